#include "expq/numtheory.hpp"

#include "expq/errors.hpp"

namespace expq {

Integer lambda(const Integer& n) {
  if (sgn(n) == 0) return 0;
  return pow2(bitLength(n) - 1);
}

namespace {

// Compares a * 2^k with b for integer k (possibly negative).
int compareScaled(const Integer& a, long k, const Integer& b) {
  if (k >= 0) {
    Integer l = a << static_cast<unsigned long>(k);
    return cmp(l, b);
  }
  Integer r = b << static_cast<unsigned long>(-k);
  return cmp(a, r);
}

void requirePositive(const Integer& b, const Integer& a) {
  if (sgn(a) <= 0 || sgn(b) <= 0) throw ContractError("log ratio needs positive arguments");
}

}  // namespace

Integer floorLog2Ratio(const Integer& b, const Integer& a) {
  requirePositive(b, a);
  // Largest k with a * 2^k <= b; it lies within one of the bit-length gap.
  long k = static_cast<long>(bitLength(b)) - static_cast<long>(bitLength(a));
  while (compareScaled(a, k, b) > 0) --k;
  while (compareScaled(a, k + 1, b) <= 0) ++k;
  return k;
}

Integer ceilLog2Ratio(const Integer& b, const Integer& a) {
  requirePositive(b, a);
  // Smallest k with b <= a * 2^k.
  long k = static_cast<long>(bitLength(b)) - static_cast<long>(bitLength(a));
  while (compareScaled(a, k, b) < 0) ++k;
  while (compareScaled(a, k - 1, b) >= 0) --k;
  return k;
}

CongruenceSolution solvePowCongruence(const Integer& q, const Integer& r) {
  if (sgn(q) <= 0 || sgn(r) < 0 || r >= q) throw ContractError("congruence needs q >= 1 and r in [0, q-1]");
  // Both searches stop at q - 1; for q = 1 the period search needs u = 1.
  Integer limit = q == 1 ? Integer(1) : Integer(q - 1);
  std::optional<Integer> s;
  Integer p = mod(Integer(1), q);
  for (Integer i = 0; i <= limit; ++i) {
    if (p == r) {
      s = i;
      break;
    }
    p = mod(p * 2, q);
  }
  if (!s) return CongruenceUnsat{};
  Integer pu = mod(Integer(2), q);  // 2^u mod q
  for (Integer u = 1; u <= limit; ++u) {
    if (divides(q, r * (pu - 1))) return CongruenceProgression{*s, u};
    pu = mod(pu * 2, q);
  }
  return CongruenceSingle{*s};
}

bool congruenceContains(const CongruenceSolution& sol, const Integer& x) {
  if (sgn(x) < 0) return false;
  if (std::holds_alternative<CongruenceUnsat>(sol)) return false;
  if (const auto* one = std::get_if<CongruenceSingle>(&sol)) return x == one->s;
  const auto& pr = std::get<CongruenceProgression>(sol);
  return x >= pr.s && divides(pr.t, x - pr.s);
}

std::string describe(const CongruenceSolution& sol) {
  if (std::holds_alternative<CongruenceUnsat>(sol)) return "Unsat";
  if (const auto* one = std::get_if<CongruenceSingle>(&sol)) return "Single(" + one->s.get_str() + ")";
  const auto& pr = std::get<CongruenceProgression>(sol);
  return "Progression(" + pr.s.get_str() + ", " + pr.t.get_str() + ")";
}

}  // namespace expq
