#include <doctest.h>

#include <numeric>
#include <set>

#include "expq/numtheory.hpp"
#include "support.hpp"

using namespace expq;
using namespace expq::test;

namespace {

// 2^x mod q by repeated doubling.
long powMod2(long x, long q) {
  long r = 1 % q;
  for (long i = 0; i < x; ++i) r = (r * 2) % q;
  return r;
}

long oddPart(long q) {
  while (q % 2 == 0) q /= 2;
  return q;
}

}  // namespace

TEST_CASE("lambda") {
  CHECK(lambda(0) == 0);
  CHECK(lambda(1) == 1);
  CHECK(lambda(12) == 8);
  CHECK(lambda(-12) == 8);
  CHECK(lambda(pow2(200) + 1) == pow2(200));
  for (long n = -3000; n <= 3000; ++n) {
    if (n == 0) continue;
    Integer l = lambda(n);
    long an = n < 0 ? -n : n;
    // the power of two with l <= |n| < 2l, found by scanning
    long p = 1;
    while (2 * p <= an) p *= 2;
    REQUIRE(l == p);
  }
}

TEST_CASE("log ratios") {
  CHECK(ceilLog2Ratio(8, 1) == 3);
  CHECK(floorLog2Ratio(8, 1) == 3);
  CHECK(ceilLog2Ratio(8, 3) == 2);
  CHECK(floorLog2Ratio(8, 3) == 1);
  CHECK(floorLog2Ratio(1, 1) == 0);
  CHECK(ceilLog2Ratio(1, 5) == -2);
  CHECK(floorLog2Ratio(1, 5) == -3);
}

TEST_CASE("log ratios agree with rational comparison") {
  for (long a = 1; a <= 70; ++a) {
    for (long b = 1; b <= 70; ++b) {
      // floor: largest k with 2^k <= b/a; ceil: smallest k with b/a <= 2^k
      long fl = -10;
      while (true) {
        long k = fl + 1;
        bool ok = k >= 0 ? (a << k) <= b : a <= (b << -k);
        if (!ok) break;
        fl = k;
      }
      long ce = 10;
      while (true) {
        long k = ce - 1;
        bool ok = k >= 0 ? b <= (a << k) : (b << -k) <= a;
        if (!ok) break;
        ce = k;
      }
      REQUIRE(floorLog2Ratio(b, a) == fl);
      REQUIRE(ceilLog2Ratio(b, a) == ce);
    }
  }
}

TEST_CASE("solvePowCongruence examples") {
  CHECK(solvePowCongruence(20, 2) == CongruenceSolution(CongruenceSingle{1}));
  CHECK(std::holds_alternative<CongruenceUnsat>(solvePowCongruence(6, 3)));
  CHECK(solvePowCongruence(7, 2) == CongruenceSolution(CongruenceProgression{1, 3}));
  CHECK(solvePowCongruence(1, 0) == CongruenceSolution(CongruenceProgression{0, 1}));
  CHECK(solvePowCongruence(8, 0) == CongruenceSolution(CongruenceProgression{3, 1}));
}

TEST_CASE("solvePowCongruence agrees with brute force") {
  for (long q = 1; q <= 128; ++q) {
    for (long r = 0; r < q; ++r) {
      CongruenceSolution sol = solvePowCongruence(q, r);
      for (long x = 0; x <= 3 * q; ++x) {
        bool brute = powMod2(x, q) == r;
        REQUIRE_MESSAGE(congruenceContains(sol, x) == brute, "q=" << q << " r=" << r << " x=" << x);
      }
    }
  }
}

TEST_CASE("progression period divides the totient of the odd part") {
  for (long q = 1; q <= 128; ++q) {
    for (long r = 0; r < q; ++r) {
      CongruenceSolution sol = solvePowCongruence(q, r);
      if (auto* p = std::get_if<CongruenceProgression>(&sol)) {
        long t = p->t.get_si();
        CHECK(totient(q) % t == 0);
        CHECK(totient(oddPart(q)) % t == 0);
        // t is the least positive u with q | r (2^u - 1)
        for (long u = 1; u < t; ++u) CHECK((r * (powMod2(u, q) - 1 + q)) % q != 0);
        CHECK((r * (powMod2(t, q) - 1 + q)) % q == 0);
      }
    }
  }
}

TEST_CASE("describe names the solution set") {
  CHECK_FALSE(describe(solvePowCongruence(6, 3)).empty());
  CHECK(describe(solvePowCongruence(7, 2)) != describe(solvePowCongruence(20, 2)));
}

TEST_CASE("claim: r (2^u - 1) = 0 mod q has {0} or a progression through 0 as solutions") {
  for (long q = 1; q <= 64; ++q) {
    for (long r = 0; r <= q; ++r) {
      std::vector<long> sols;
      for (long u = 0; u <= 4 * q; ++u)
        if ((r * (powMod2(u, q) - 1 + q)) % q == 0) sols.push_back(u);
      REQUIRE(!sols.empty());
      REQUIRE(sols[0] == 0);
      if (sols.size() == 1) continue;
      long step = sols[1];
      for (std::size_t i = 0; i < sols.size(); ++i) REQUIRE(sols[i] == static_cast<long>(i) * step);
      REQUIRE(sols.back() + step > 4 * q);
    }
  }
}

TEST_CASE("claim: lcm of totients is at most the lcm") {
  for (long a = 1; a <= 30; ++a)
    for (long b = a; b <= 30; ++b)
      for (long c = b; c <= 30; ++c) {
        CHECK(lcmOf({totient(a)}) <= lcmOf({a}));
        CHECK(lcmOf({totient(a), totient(b)}) <= lcmOf({a, b}));
        CHECK(lcmOf({totient(a), totient(b), totient(c)}) <= lcmOf({a, b, c}));
      }
}

TEST_CASE("claim: lcm(totients, b's) is at most lcm(a's, b's) squared, sampled") {
  Rng rng(31);
  for (int i = 0; i < 20000; ++i) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 3));
    std::vector<long> as, bs, lhs, rhs;
    for (std::size_t j = 0; j < m; ++j) {
      as.push_back(rng.range(1, 30));
      bs.push_back(rng.range(1, 30));
    }
    for (long a : as) lhs.push_back(totient(a));
    lhs.insert(lhs.end(), bs.begin(), bs.end());
    rhs = as;
    rhs.insert(rhs.end(), bs.begin(), bs.end());
    long r = lcmOf(rhs);
    REQUIRE(lcmOf(lhs) <= r * r);
  }
}

TEST_CASE("claim: lambda(b x) <= 2^(x-3) when 2^x >= 64 b^2") {
  for (long b = 1; b <= 64; ++b)
    for (long x = 1; x <= 64; ++x) {
      if (pow2(static_cast<unsigned long>(x)) < 64 * b * b) continue;
      CHECK(lambda(Integer(b) * x) <= pow2(static_cast<unsigned long>(x - 3)));
    }
}

TEST_CASE("claim: the power term dominates a guarded homogeneous term") {
  Rng rng(32);
  for (int i = 0; i < 200; ++i) {
    auto bad = semSplitInstance(rng);
    REQUIRE_MESSAGE(!bad, *bad);
  }
}
