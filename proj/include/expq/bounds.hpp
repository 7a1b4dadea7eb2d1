#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "expq/formula.hpp"
#include "expq/metrics.hpp"

namespace expq {

// Parameter tables for one subroutine call. Each check returns a list of
// human-readable violations (empty when the inequalities hold). Input
// parameters are raised to the lower bounds the tables assume.

struct PresQEParams {
  Integer h, v, a, c, m, b;
  static PresQEParams of(const MetricsReport& in);
  // Element-wise maximum, used when one call has several core inputs.
  void widen(const PresQEParams& o);
  Integer memberBound() const;  // h c m^(2v+1) a^(2v+h+4)
};
std::vector<std::string> checkPresQEOutput(const PresQEParams& p, const MetricsReport& out);

struct SemCoverParams {
  Integer h, v, c, m, b, n;
  static SemCoverParams of(const MetricsReport& in, std::size_t blockSize);
  // (v+1)^(8h) log2(c)^h n, compared in log space.
  bool countWithinBound(std::size_t k) const;
};
std::vector<std::string> checkSemCoverOutput(const SemCoverParams& p, const MetricsReport& out);
// Homogeneous terms with a block variable that occur in non-PC inequalities.
std::size_t blockHomtermsOutsidePC(const Formula& f, const std::vector<Variable>& xs);

struct LineariseParams {
  Integer h, v, a, c, m, b, r, n;
  static LineariseParams of(const MetricsReport& in, const Formula& f, std::size_t blockSize);
};
std::vector<std::string> checkLineariseOutput(const LineariseParams& p, const MetricsReport& out);

// Whole-run table for Master(QF) on an Oct input with `blocks` quantifier
// blocks of at most `blockSize` variables.
struct OctParams {
  Integer c, m;
  std::size_t blocks = 1, blockSize = 1;
  static OctParams of(const MetricsReport& in, std::size_t blocks, std::size_t blockSize);
  Integer lintermsBound() const;  // 4^(blocks*blockSize) (c + 2m)
};
std::vector<std::string> checkOctOutput(const OctParams& p, const MetricsReport& out);

}  // namespace expq
