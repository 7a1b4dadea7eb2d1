#include <doctest.h>

#include <chrono>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"
#include "expq/fragment.hpp"
#include "expq/master.hpp"
#include "expq/metrics.hpp"
#include "expq/normalize.hpp"
#include "expq/oracle.hpp"
#include "expq/parser.hpp"
#include "expq/prenex.hpp"
#include "support.hpp"

using namespace expq;
using namespace expq::test;

namespace {

PrenexFormula PX(const std::string& s) {
  PrenexFormula p = toPrenex(P(s));
  p.matrix = normalize(p.matrix);
  return p;
}

SolveConfig qfConfig(bool check = true) {
  SolveConfig cfg;
  cfg.fragment = Fragment::QF;
  cfg.checkInvariants = check;
  cfg.limits.maxSeconds = 60;
  return cfg;
}

bool decideQF(const std::string& s, SolveStats* stats = nullptr) {
  Formula r = masterProcedure(PX(s), qfConfig(), stats);
  REQUIRE(isGround(r));
  return evalGround(r);
}

PipelineResult power(const std::string& s) {
  SolveConfig cfg;
  cfg.fragment = Fragment::Sem;
  cfg.checkInvariants = true;
  cfg.octTable = true;
  cfg.limits.maxSeconds = 60;
  return decidePresPower(SourceFormula{s, Dialect::PresPower}, cfg);
}

}  // namespace

TEST_CASE("masterProcedure: 2^|x| = 8 and 2^|x| = 3") {
  SolveStats st;
  CHECK(decideQF("exists x. pow(x) = 8", &st));
  CHECK(st.violations.empty());
  CHECK(st.semCoverCalls >= 1);
  CHECK_FALSE(decideQF("exists x. pow(x) = 3"));
  CHECK_FALSE(decideQF("exists x. pow(x) < 0"));
}

TEST_CASE("masterProcedure: pure Presburger sentence never calls semCover") {
  SolveStats st;
  CHECK(decideQF("exists x. forall y. y - x < 0 || x - y - 1 < 0", &st));
  CHECK(st.semCoverCalls == 0);
  CHECK(st.violations.empty());
  SolveStats st2;
  CHECK_FALSE(decideQF("exists x. forall y. y - x < 0", &st2));
  CHECK(st2.semCoverCalls == 0);
}

TEST_CASE("masterProcedure: free variables survive, result is quantifier-free") {
  PrenexFormula p = PX("exists x. x - y < 0 && 0 < x && 3 | x");
  Formula r = masterProcedure(p, qfConfig());
  CHECK_FALSE(hasQuantifier(r));
  Variable y = V("y");
  for (long yv = -10; yv <= 10; ++yv) CHECK(evalQF(r, {{y, Integer(yv)}}) == (yv > 3));
}

TEST_CASE("masterProcedure: sentences yield sentences and the block count is bounded by alternations") {
  const char* inputs[] = {
      "exists x. forall y. y - x < 0 || x - y - 1 < 0",
      "forall x. exists y. x < y && 2 | y",
      "forall x. exists y. pow(y) > x",
      "exists x. exists y. 2*pow(x) - pow(y) = 0",
      "forall x. forall y. x < y || y <= x",
  };
  for (const char* s : inputs) {
    PrenexFormula p = PX(s);
    SolveStats st;
    Formula r = masterProcedure(p, qfConfig(), &st);
    CHECK_MESSAGE(isGround(r), s);
    CHECK(st.blocks <= alternations(p.toFormula()));
    CHECK(st.violations.empty());
    CHECK(evalGround(r));
  }
}

TEST_CASE("masterProcedure: trace events are well nested") {
  std::vector<TraceEvent> events;
  SolveConfig cfg = qfConfig();
  cfg.traceSink = [&](const TraceEvent& e) { events.push_back(e); };
  masterProcedure(PX("forall x. exists y. pow(y) > x && 3 | y"), cfg);
  REQUIRE(!events.empty());
  bool open = false;
  std::size_t block = 0, blocks = 0;
  for (const auto& e : events) {
    if (e.kind == TraceKind::BlockStart) {
      CHECK_FALSE(open);
      open = true;
      block = e.block;
      ++blocks;
    } else if (e.kind == TraceKind::BlockEnd) {
      CHECK(open);
      CHECK(e.block == block);
      open = false;
    } else {
      CHECK(open);
      CHECK(e.block == block);
    }
    CHECK(e.toJson().contains("kind"));
  }
  CHECK_FALSE(open);
  CHECK(blocks == 2);
}

TEST_CASE("masterProcedure: disjunct cap raises ResourceExceeded") {
  SolveConfig cfg = qfConfig(false);
  cfg.limits.maxDisjuncts = 5;
  SolveStats st;
  CHECK_THROWS_AS(masterProcedure(PX("forall x. exists y. pow(y) > x && 7 | y - 1"), cfg, &st), ResourceExceeded);
}

TEST_CASE("masterProcedure: time limit raises ResourceExceeded") {
  SolveConfig cfg = qfConfig(false);
  cfg.limits.maxSeconds = 0.2;
  auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(masterProcedure(PX("forall x. exists y. pow(y) > x && 7 | y - 1 && 11 | pow(y) - 3"), cfg),
                  ResourceExceeded);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10);
}

TEST_CASE("decideExistential examples") {
  SolveConfig cfg = qfConfig();
  cfg.strategy = Strategy::Backtracking;
  CHECK(decideExistential(PX("exists x. exists y. 2*pow(x) - pow(y) = 0"), cfg));
  CHECK_FALSE(decideExistential(PX("exists x. pow(x) < 0"), cfg));
  CHECK(decideExistential(PX("exists x. pow(x) = 8"), cfg));
  CHECK_FALSE(decideExistential(PX("exists x. exists y. pow(x) + pow(y) = 7 && x < y"), cfg));
  CHECK(decideExistential(PX("exists x. exists y. pow(x) + pow(y) = 12 && x < y"), cfg));
  CHECK_THROWS_AS(decideExistential(PX("forall x. pow(x) > 0"), cfg), ContractError);
}

TEST_CASE("Exhaustive and Backtracking agree on random existential sentences") {
  Rng rng(61);
  Variable x = V("x"), y = V("y");
  GenSpec s;
  s.linear = {x};
  s.power = {x, y};
  s.maxCoeff = 3;
  s.maxConst = 10;
  s.maxMonomials = 2;
  s.depth = 1;
  s.divProb = 0.2;
  s.maxModulus = 4;
  int done = 0;
  for (int i = 0; i < 80; ++i) {
    Formula m = randomQF(rng, s);
    PrenexFormula p{{{Quantifier::Exists, x}, {Quantifier::Exists, y}}, m};
    SolveConfig ex = qfConfig(false);
    ex.limits.maxSeconds = 10;
    SolveConfig bt = ex;
    bt.strategy = Strategy::Backtracking;
    bool a, b;
    try {
      a = evalGround(masterProcedure(p, ex));
      b = decideExistential(p, bt);
    } catch (const ResourceExceeded&) {
      continue;
    }
    ++done;
    REQUIRE_MESSAGE(a == b, render(p));
    // a bounded witness is a proof of truth
    if (boundedWitnessSearch(p, 12)) CHECK(a);
  }
  CHECK(done >= 60);
}

TEST_CASE("decidePresExp follows the configured strategy") {
  SolveConfig cfg = qfConfig();
  Verdict v = decidePresExp(P("exists x. pow(x) = 8"), cfg);
  CHECK(v.value);
  CHECK(isGround(v.residual));
  cfg.strategy = Strategy::Backtracking;
  CHECK(decidePresExp(P("exists x. pow(x) = 8"), cfg).value);
  CHECK_FALSE(decidePresExp(P("forall x. pow(x) > 8"), cfg).value);
}

TEST_CASE("decidePresPower examples") {
  PipelineResult r = power("forall x. exists y. P(y) && y > x");
  CHECK(r.value);
  CHECK(r.stage3InOct);
  CHECK(r.semStats.violations.empty());
  CHECK(r.qfStats.violations.empty());
  CHECK(r.stage3.size() == r.residuals.size());
  CHECK(isGround(r.residual));

  CHECK_FALSE(power("exists x. P(x) && P(x + 1) && x > 1").value);
  CHECK_FALSE(power("exists x. P(x) && 3 | x").value);
  CHECK(power("exists x. P(x) && 5 | x - 3").value);
  CHECK(power("P(8)").value);
  CHECK_FALSE(power("P(12)").value);
}

TEST_CASE("decidePresPower: stage-3 formulas are octagonal and QF runs keep the octagon shape") {
  for (const char* s : {"forall x. P(x) -> 2 | x || x = 1", "exists x. forall y. P(y) -> x < y",
                        "forall x. exists y. x < y && 2 | y"}) {
    PipelineResult r = power(s);
    CHECK_MESSAGE(r.value, s);
    CHECK(r.stage3InOct);
    for (const auto& p : r.stage3) {
      CHECK(formulaInOct(p.matrix));
      CHECK(freeVariables(p.toFormula()).empty());
    }
    CHECK(r.qfStats.maxMaxvars <= 2);
    CHECK(r.qfStats.maxHomtermsNorm <= 1);
    CHECK(r.qfStats.violations.empty());
  }
}

TEST_CASE("decideViaSem on an exponential sentence in Sem") {
  SolveConfig cfg;
  cfg.fragment = Fragment::Sem;
  cfg.checkInvariants = true;
  PipelineResult r = decideViaSem(PX("exists x. exists y. 3*pow(x) < 5*pow(y) && 7 | pow(y) - 2"), cfg);
  CHECK(r.value);
  CHECK(r.semStats.violations.empty());
}

TEST_CASE("Pi prime stays empty for sentences in Sem") {
  SolveConfig cfg;
  cfg.fragment = Fragment::Sem;
  cfg.checkInvariants = true;
  SolveStats st;
  Formula r = masterProcedure(PX("forall x. exists y. 3*pow(y) > 5*pow(x) && 5 | pow(y) - 3"), cfg, &st);
  CHECK(freeVariables(r).empty());
  CHECK(fragmentCheck(r, Fragment::Sem));
  CHECK(st.violations.empty());
}
