#pragma once

#include <cstddef>
#include <set>

#include <json.hpp>

#include "expq/formula.hpp"

namespace expq {

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

struct MetricsReport {
  std::set<Term, TermLess> linterms;  // always holds 0 and 2
  std::set<Term, TermLess> homterms;
  std::size_t lintermsCount = 0;
  std::size_t maxvars = 0;
  Integer norminfLinterms = 0;
  Integer norminfHomterms = 0;
  Integer normoneMax = 0;
  Integer fmod = 1;
  std::size_t boolnum = 0;
  std::size_t alt = 0;

  nlohmann::json toJson(bool withTerms = false) const;
};

MetricsReport metrics(const Formula& f);

std::size_t boolnum(const Formula& f);
// Quantifier blocks of the prefix produced by left-to-right prenexing.
std::size_t alternations(const Formula& f);

}  // namespace expq
