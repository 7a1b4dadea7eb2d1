#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "expq/formula.hpp"

namespace expq {

using Assignment = std::map<Variable, Integer>;

nlohmann::json toJson(const Assignment& nu);

// Exponents beyond this make 2^|x| too large to evaluate.
inline constexpr unsigned long kMaxEvalExponent = 1UL << 20;

// Truth of a variable-free, quantifier-free formula.
bool evalGround(const Formula& f);

// Truth of a quantifier-free formula under nu, which must cover its variables.
bool evalQF(const Formula& f, const Assignment& nu);

// Value of a term under nu.
Integer evalTerm(const Term& t, const Assignment& nu);

// Quantifiers range over [-bound, bound] only. Exact for sentences whose
// quantifiers are explicitly relativized to that box.
bool evalBounded(const Formula& f, const Assignment& nu, const Integer& bound);

// Witness with every |value| <= bound for an existential prenex formula,
// searched in order of increasing max-norm. Free variables are read from nu.
std::optional<Assignment> boundedWitnessSearch(const PrenexFormula& phi, const Integer& bound,
                                               const Assignment& nu = {});

struct SamplerSpec {
  std::uint64_t seed = 1;
  long boxRadius = 8;                 // exhaustive box [-r, r]^k when small enough
  std::size_t maxBoxSamples = 20000;  // otherwise random points of the box
  std::size_t randomSamples = 500;    // log-uniform magnitudes
  unsigned maxMagnitudeBits = 64;
  unsigned maxExponentBits = 7;       // variables under a power stay below 2^this
};

struct EquivalenceReport {
  std::uint64_t seed = 0;
  std::size_t samplesTried = 0;
  std::vector<Assignment> disagreements;
  bool agree() const { return disagreements.empty(); }
  nlohmann::json toJson() const;
};

// Compares two quantifier-free formulas on sampled assignments of their free
// variables; records the first `maxDisagreements` counterexamples.
EquivalenceReport sampleEquivalence(const Formula& a, const Formula& b, const SamplerSpec& spec = {},
                                    std::size_t maxDisagreements = 1);

// Assignments drawn as in sampleEquivalence.
std::vector<Assignment> sampleAssignments(const std::vector<Variable>& vars, const std::vector<Variable>& powerVars,
                                          const SamplerSpec& spec);

}  // namespace expq
