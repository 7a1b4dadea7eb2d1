#include <doctest.h>

#include "expq/analysis.hpp"
#include "expq/bounds.hpp"
#include "expq/errors.hpp"
#include "expq/fragment.hpp"
#include "expq/metrics.hpp"
#include "expq/normalize.hpp"
#include "expq/oracle.hpp"
#include "expq/parser.hpp"
#include "expq/presburger.hpp"
#include "support.hpp"

using namespace expq;
using namespace expq::test;

namespace {

Formula N(const std::string& s) { return normalize(P(s)); }

bool allDivsSimple(const Formula& f) {
  for (const auto& a : collectAtoms(f))
    if (a.isDiv() && !divIsSimple(a)) return false;
  return true;
}

std::vector<Assignment> grid(const std::vector<Variable>& vs, long r) {
  std::vector<Assignment> out{{}};
  for (Variable v : vs) {
    std::vector<Assignment> next;
    for (const auto& nu : out)
      for (long k = -r; k <= r; ++k) {
        Assignment n = nu;
        n[v] = k;
        next.push_back(n);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("simplify: nothing to do") {
  Formula f = N("x - y < 3 && 2 | x");
  CoverSet c = simplify(f, Fragment::QF);
  REQUIRE(c.size() == 1);
  CHECK(c.members[0] == f);
  CoverSet d = simplify(N("2 | x"), Fragment::QF);
  REQUIRE(d.size() == 1);
  CHECK(d.members[0] == N("2 | x"));
}

TEST_CASE("simplify: 3 | 2^|x| + x") {
  Formula f = N("3 | pow(x) + x");
  SimplifyInfo info;
  CoverSet c = simplify(f, Fragment::QF, nullptr, &info);
  CHECK(info.modulus == 3);
  CHECK(info.residueTerms == 2);
  CHECK(info.residueMaps == 9);
  // 2^|x| is never 0 mod 3, so three of the nine maps survive
  CHECK(c.size() == 3);
  for (const auto& m : c.members) CHECK(allDivsSimple(m));
  Variable x = V("x");
  for (long v = -20; v <= 20; ++v) {
    Assignment nu{{x, Integer(v)}};
    CHECK(naiveEval(f, nu) == naiveEval(c.disjunction(), nu));
  }
}

TEST_CASE("simplify: random formulas keep their truth value") {
  Rng rng(41);
  GenSpec s;
  s.linear = {V("x"), V("y")};
  s.power = {V("z")};
  s.divProb = 0.5;
  s.maxModulus = 4;
  s.maxMonomials = 2;
  for (int i = 0; i < 150; ++i) {
    Formula f = randomQF(rng, s);
    CoverSet c = simplify(f, Fragment::QF);
    for (const auto& m : c.members) CHECK(allDivsSimple(m));
    SamplerSpec spec;
    spec.seed = static_cast<std::uint64_t>(i) + 1;
    spec.boxRadius = 4;
    spec.randomSamples = 100;
    EquivalenceReport rep = sampleEquivalence(f, c.disjunction(), spec);
    REQUIRE_MESSAGE(rep.agree(), render(f));
  }
}

TEST_CASE("simplify: Sem outputs stay in Sem") {
  Rng rng(42);
  Variable x = V("x"), y = V("y"), z = V("z");
  for (int i = 0; i < 100; ++i) {
    Formula m = randomSemMatrix(rng, {x, y}, {z}, 2);
    Formula f = land(m, divides(Integer(rng.range(2, 6)), Term::pow(x, 3) + Term::pow(y) + Term(rng.range(0, 5))));
    for (const auto& mem : simplify(f, Fragment::Sem).members) CHECK(inSem(mem));
  }
}

TEST_CASE("simplify: residue map cap") {
  Limits lim;
  lim.maxDisjuncts = 10;
  Budget budget(lim);
  CHECK_THROWS_AS(simplify(N("97 | x + 2*y + 3*w"), Fragment::QF, &budget), ResourceExceeded);
}

TEST_CASE("substitutionCandidates come from the inequalities") {
  Variable x = V("x");
  auto cs = substitutionCandidates(N("y - x < 0 && 3*x - z < 1 && 2 | x"), x);
  REQUIRE(cs.size() == 2);
  bool sawA1 = false, sawA3 = false;
  for (const auto& c : cs) {
    CHECK_FALSE(c.t.mentions(x));
    sawA1 = sawA1 || (c.a == 1 && c.t == Term::var(V("y")));
    sawA3 = sawA3 || (c.a == 3 && c.t == Term::var(V("z")));
  }
  CHECK(sawA1);
  CHECK(sawA3);
}

TEST_CASE("presQE: interval of width two always has a point") {
  Variable x = V("x"), y = V("y");
  Formula f = N("y - x < 0 && x - y - 2 < 0");
  for (PresQERange mode : {PresQERange::Windowed, PresQERange::Full}) {
    CoverSet c = presQE(x, {x}, f, nullptr, nullptr, mode);
    for (const auto& m : c.members) CHECK_FALSE(occursFree(m, x));
    for (long yv = -30; yv <= 30; ++yv) CHECK(naiveEval(c.disjunction(), {{y, Integer(yv)}}));
  }
}

TEST_CASE("presQE: even number strictly between 0 and 5") {
  Variable x = V("x");
  Formula f = N("2 | x && 0 - x < 0 && x - 5 < 0");
  for (PresQERange mode : {PresQERange::Windowed, PresQERange::Full}) {
    CoverSet c = presQE(x, {x}, f, nullptr, nullptr, mode);
    CHECK(evalGround(c.disjunction()));
  }
  CHECK_FALSE(evalGround(presQE(x, {x}, N("3 | x && 0 < x && x < 3"), nullptr).disjunction()));
}

TEST_CASE("presQE: no candidate, residues only") {
  Variable x = V("x"), y = V("y");
  Formula f = N("3 | x && 2 | y");
  PresQEInfo info;
  CoverSet c = presQE(x, {x, y}, f, nullptr, &info);
  CHECK(info.candidates.empty());
  for (long yv = -6; yv <= 6; ++yv) CHECK(naiveEval(c.disjunction(), {{y, Integer(yv)}}) == (yv % 2 == 0));
}

TEST_CASE("presQE: absolute value occurrences") {
  Variable x = V("x"), y = V("y");
  Formula f = normalize(Formula::atom(Atom::less(Term::abs(x) - Term::var(y))));  // |x| < y
  CoverSet c = presQE(x, {x}, f, nullptr);
  for (long yv = -5; yv <= 5; ++yv) CHECK(naiveEval(c.disjunction(), {{y, Integer(yv)}}) == (yv > 0));
}

TEST_CASE("presQE: candidate-witness cover check on random formulas, both ranges") {
  Rng rng(43);
  Variable x = V("x"), y = V("y"), z = V("z");
  GenSpec s;
  s.linear = {x, y, z};
  s.allowNonSimpleDiv = false;
  s.maxCoeff = 3;
  s.maxConst = 8;
  s.divProb = 0.25;
  s.maxModulus = 4;
  int checked = 0;
  while (checked < 120) {
    Formula f = randomQF(rng, s);
    if (!occurrence(f, x).any()) continue;
    ++checked;
    for (PresQERange mode : {PresQERange::Windowed, PresQERange::Full}) {
      PresQEInfo info;
      CoverSet c = presQE(x, {x}, f, nullptr, &info, mode);
      for (const auto& m : c.members) CHECK(allDivsSimple(m));
      for (int j = 0; j < 4; ++j) {
        Assignment nu{{y, Integer(rng.range(-10, 10))}, {z, Integer(rng.range(-10, 10))}};
        auto bad = checkPresQECover(x, f, c.members, nu);
        REQUIRE_MESSAGE(!bad, *bad);
      }
    }
  }
}

TEST_CASE("presQE: parameter table on random formulas") {
  Rng rng(44);
  Variable x = V("x"), y = V("y"), z = V("z");
  GenSpec s;
  s.linear = {x, y, z};
  s.allowNonSimpleDiv = false;
  s.maxCoeff = 3;
  s.divProb = 0.25;
  s.maxModulus = 4;
  for (int i = 0; i < 80; ++i) {
    Formula f = randomQF(rng, s);
    if (!occurrence(f, x).any()) continue;
    PresQEInfo info;
    CoverSet c = presQE(x, {x}, f, nullptr, &info);
    REQUIRE(!info.coreInputs.empty());
    PresQEParams p = PresQEParams::of(metrics(info.coreInputs[0]));
    for (std::size_t k = 1; k < info.coreInputs.size(); ++k) p.widen(PresQEParams::of(metrics(info.coreInputs[k])));
    CHECK(Integer(c.size()) <= p.memberBound());
    for (const auto& m : c.members) {
      auto v = checkPresQEOutput(p, metrics(m));
      CHECK_MESSAGE(v.empty(), render(f) << " -> " << render(m) << ": " << (v.empty() ? "" : v[0]));
    }
  }
}

TEST_CASE("presQE on octagon inputs: unit coefficients, octagon outputs") {
  Rng rng(45);
  Variable x = V("x"), y = V("y"), z = V("z");
  for (int i = 0; i < 150; ++i) {
    Formula f = randomOct(rng, {x, y, z}, 2);
    if (!occurrence(f, x).any()) continue;
    PresQEInfo info;
    CoverSet c = presQE(x, {x}, f, nullptr, &info);
    CHECK(info.g == 1);
    for (const auto& cand : info.candidates) CHECK(cand.a == 1);
    for (const auto& m : c.members) CHECK_MESSAGE(formulaInOct(m), render(m));
    Assignment nu{{y, Integer(rng.range(-9, 9))}, {z, Integer(rng.range(-9, 9))}};
    auto bad = checkPresQECover(x, f, c.members, nu);
    REQUIRE_MESSAGE(!bad, *bad);
  }
}

TEST_CASE("presQE: exhaustive small grid against bounded search") {
  Variable x = V("x"), y = V("y");
  Formula f = N("3*x - y < 2 && y - 2*x < 1 && 5 | x - 2");
  CoverSet c = presQE(x, {x}, f, nullptr, nullptr, PresQERange::Full);
  Formula ex = quantify(Quantifier::Exists, x, f);
  for (const auto& nu : grid({y}, 25)) CHECK(evalBounded(ex, nu, 200) == naiveEval(c.disjunction(), nu));
}
