#pragma once

// Shared test helpers: random formula generators, a second evaluator written
// independently of the library's, and brute-force oracles.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "expq/formula.hpp"
#include "expq/oracle.hpp"
#include "expq/presburger.hpp"

namespace expq::test {

Formula P(const std::string& text);   // parse, exponential dialect
Formula PP(const std::string& text);  // parse, power-predicate dialect
Variable V(const std::string& name);  // interned variable

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(range(0, static_cast<long>(v.size()) - 1))]; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

struct GenSpec {
  std::vector<Variable> linear;  // occur as x
  std::vector<Variable> power;   // occur as 2^|x|
  long maxCoeff = 4;
  long maxConst = 12;
  int maxMonomials = 3;
  int depth = 2;
  double divProb = 0.2;
  long maxModulus = 6;
  bool allowNonSimpleDiv = true;
  bool raw = false;  // build with the plain constructors (no normalization)
};

Term randomTerm(Rng& rng, const GenSpec& s);
Formula randomAtom(Rng& rng, const GenSpec& s);
Formula randomQF(Rng& rng, const GenSpec& s);

// Sem matrices: variables split into linear-only and power-only; power
// variables occur in PC atoms (and, for free ones, in mixed inequalities).
// Divisibilities are simple.
Formula randomSemMatrix(Rng& rng, const std::vector<Variable>& bound, const std::vector<Variable>& freeLinear,
                        int depth);

// Pure Presburger sentence (no powers) whose quantifiers range over
// [-bound, bound] through explicit guards.
Formula randomBoundedPASentence(Rng& rng, int quantifiers, long bound);

// Octagon-fragment matrix over the given variables.
Formula randomOct(Rng& rng, const std::vector<Variable>& vars, int depth);

// Ground formula with small exponents.
Formula randomGround(Rng& rng, int depth);

// Evaluator over the Not/And desugaring with an explicit stack. Quantifiers
// range over [-bound, bound] when bound is given.
bool naiveEval(const Formula& f, const Assignment& nu, std::optional<long> bound = std::nullopt);

// Candidate-witness completeness check for presQE: the disjunction of the
// cover agrees, under nu, with phi evaluated at every candidate
// (v(t)+k)/a, k in [-r, r], a | v(t)+k (or every residue in [0, fmod-1] when
// there is no candidate). Returns a description of the disagreement.
std::optional<std::string> checkPresQECover(Variable x, const Formula& phi, const std::vector<Formula>& cover,
                                            const Assignment& nu);

// One random instance of the sandwich
//   lambda(a 2^|x0|) / 2 <= lambda(eta(x0) + c) <= lambda(a 2^|x0|)
// for a homogeneous eta whose power coefficient on x is a, under the guard
// 2^|x0| > 2^g max(1, 2^|u0|), 2^g = 2^7 lambda(|eta|_1 + |c|)^2.
// Returns a description when the sandwich fails.
std::optional<std::string> semSplitInstance(Rng& rng);

// Renames every binder to a name that depends only on its nesting depth,
// then normalizes. Alpha-equivalent formulas without shadowing map to the
// same result.
Formula canonicalBinders(const Formula& f);

// Euler's totient by trial division.
long totient(long n);
long lcmOf(const std::vector<long>& xs);

}  // namespace expq::test
