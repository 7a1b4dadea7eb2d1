#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expq/budget.hpp"
#include "expq/formula.hpp"
#include "expq/fragment.hpp"
#include "expq/metrics.hpp"
#include "expq/parser.hpp"
#include "expq/presburger.hpp"

namespace expq {

enum class Strategy : unsigned char { Exhaustive, Backtracking };

enum class TraceKind : unsigned char {
  BlockStart,
  Pop,
  PresQECall,
  SemCoverCall,
  LineariseCall,
  SimplifyCall,
  BlockEnd
};
const char* toString(TraceKind k);

struct TraceEvent {
  TraceKind kind = TraceKind::Pop;
  std::size_t block = 0;
  double wallSeconds = 0;
  std::optional<MetricsReport> metricsBefore;
  std::optional<MetricsReport> metricsAfter;  // of the disjunction of the outputs
  nlohmann::json counts = nlohmann::json::object();
  nlohmann::json toJson() const;
};

using TraceSink = std::function<void(const TraceEvent&)>;

struct SolveConfig {
  Fragment fragment = Fragment::QF;
  Strategy strategy = Strategy::Exhaustive;
  Limits limits;
  TraceSink traceSink;
  // Parameter tables, fragment membership and termination measure are
  // checked after every subroutine call; failures land in SolveStats.
  bool checkInvariants = false;
  PresQERange presQERange = PresQERange::Windowed;
  // Additionally check the octagon table (Master(QF) on an Oct input).
  bool octTable = false;
};

struct SolveStats {
  std::size_t blocks = 0;
  std::size_t pops = 0;
  std::size_t presQECalls = 0;
  std::size_t semCoverCalls = 0;
  std::size_t lineariseCalls = 0;
  std::size_t simplifyCalls = 0;
  std::size_t dedupHits = 0;
  std::size_t maxQueue = 0;
  std::size_t quantifiersAdded = 0;  // over all blocks
  std::size_t maxQuantifiersPerSemCover = 0;
  std::size_t maxStaleSteps = 0;     // subroutine steps on one pair without shrinking its block
  std::size_t maxMaxvars = 0;        // over every formula produced
  Integer maxHomtermsNorm = 0;
  std::uint64_t disjuncts = 0;
  std::vector<std::string> violations;
  void merge(const SolveStats& o);
  nlohmann::json toJson() const;
};

// Block-by-block quantifier elimination. The matrix of phi must be in cfg.fragment up to non-simple
// divisibilities, which are removed by a preliminary simplify. The result is
// equivalent to phi and alternation-free modulo the fragment; a sentence
// yields a sentence of the fragment. `stats`, when given, is filled as the
// run progresses and so also describes a run cut short by ResourceExceeded.
Formula masterProcedure(const PrenexFormula& phi, const SolveConfig& cfg, SolveStats* stats = nullptr);

// Depth-first search over the outputs of the subroutines for an existential
// sentence with quantifier-free matrix (fragment QF).
bool decideExistential(const PrenexFormula& phi, const SolveConfig& cfg, SolveStats* stats = nullptr);

struct Verdict {
  bool value = false;
  Formula residual;  // ground formula that was evaluated
  SolveStats stats;
};

// Decides a sentence of the exponential dialect: Master(QF), or the
// backtracking search when requested and the sentence is existential, then
// ground evaluation.
Verdict decidePresExp(const Formula& sentence, const SolveConfig& cfg);

struct PipelineResult {
  bool value = false;
  PrenexFormula translated;  // Phi
  Formula stage1;            // Master(Sem) output
  // One linearised prenex sentence per distinct maximal quantified
  // subformula of stage1; each is closed and decided separately.
  std::vector<PrenexFormula> stage3;
  std::vector<Formula> residuals;  // Master(QF) outputs, ground, aligned with stage3
  Formula residual;                // stage1 with each subformula replaced by its value
  bool stage3InOct = false;        // every stage3 matrix is in Oct
  SolveStats semStats;
  SolveStats qfStats;
};

// Master(Sem) -> prenex -> linearise -> Master(QF) -> ground evaluation, for
// a prenex sentence whose matrix lies in Sem. Stages 2-4 run on each maximal
// quantified subformula of the Master(Sem) output on its own.
PipelineResult decideViaSem(const PrenexFormula& phi, const SolveConfig& cfg);

// The power-predicate pipeline: translation, then decideViaSem.
PipelineResult decidePresPower(const Formula& sentence, const SolveConfig& cfg);
PipelineResult decidePresPower(const SourceFormula& src, const SolveConfig& cfg);

}  // namespace expq
