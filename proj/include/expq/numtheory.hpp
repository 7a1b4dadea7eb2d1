#pragma once

#include <optional>
#include <string>
#include <variant>

#include "expq/integer.hpp"

namespace expq {

// Largest power of two <= |n|; 0 for n = 0.
Integer lambda(const Integer& n);

// Exact ceil/floor of log2(b/a) for positive a, b.
Integer ceilLog2Ratio(const Integer& b, const Integer& a);
Integer floorLog2Ratio(const Integer& b, const Integer& a);

struct CongruenceUnsat {
  friend bool operator==(const CongruenceUnsat&, const CongruenceUnsat&) = default;
};
struct CongruenceSingle {
  Integer s;
  friend bool operator==(const CongruenceSingle&, const CongruenceSingle&) = default;
};
// {s + i*t : i >= 0}
struct CongruenceProgression {
  Integer s;
  Integer t;
  friend bool operator==(const CongruenceProgression&, const CongruenceProgression&) = default;
};
using CongruenceSolution = std::variant<CongruenceUnsat, CongruenceSingle, CongruenceProgression>;

// Nonnegative solutions x of 2^x = r (mod q), for q >= 1 and 0 <= r < q.
CongruenceSolution solvePowCongruence(const Integer& q, const Integer& r);
bool congruenceContains(const CongruenceSolution& sol, const Integer& x);
std::string describe(const CongruenceSolution& sol);

}  // namespace expq
