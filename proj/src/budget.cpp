#include "expq/budget.hpp"

#include "expq/analysis.hpp"
#include "expq/errors.hpp"

namespace expq {

Budget::Budget(Limits limits) : limits_(limits), start_(std::chrono::steady_clock::now()) {}

double Budget::elapsedSeconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void Budget::charge(std::uint64_t n) {
  const std::uint64_t before = disjuncts_;
  disjuncts_ += n;
  if (disjuncts_ > limits_.maxDisjuncts)
    throw ResourceExceeded("disjunct limit of " + std::to_string(limits_.maxDisjuncts) + " exceeded");
  // clock reads are not free; look once per 16 charged units
  if ((before >> 4) != (disjuncts_ >> 4)) checkTime();
}

void Budget::reserve(const Integer& n, const std::string& what) const {
  if (n > Integer(std::to_string(limits_.maxDisjuncts)))
    throw ResourceExceeded(what + " would produce " + n.get_str() + " members, above the disjunct limit");
}

void Budget::checkTime() const {
  if (elapsedSeconds() > limits_.maxSeconds)
    throw ResourceExceeded("time limit of " + std::to_string(limits_.maxSeconds) + " s exceeded");
}

void Budget::checkCoefficients(const Formula& f) const {
  for (const auto& a : collectAtoms(f)) {
    if (bitLength(a.modulus) > limits_.maxCoeffBits || bitLength(a.term.normInf()) > limits_.maxCoeffBits)
      throw ResourceExceeded("coefficient size limit of " + std::to_string(limits_.maxCoeffBits) +
                             " bits exceeded");
  }
}

}  // namespace expq
