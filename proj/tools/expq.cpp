// expq: decide, eliminate and measure formulas of Presburger arithmetic with
// powers of two.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"
#include "expq/master.hpp"
#include "expq/metrics.hpp"
#include "expq/normalize.hpp"
#include "expq/oracle.hpp"
#include "expq/parser.hpp"
#include "expq/prenex.hpp"

namespace {

using namespace expq;

enum Exit { kValid = 0, kInvalid = 1, kParse = 2, kResource = 3, kContract = 4 };

struct Options {
  std::string input;
  std::string dialect = "presexp";
  std::string fragment = "auto";
  std::string strategy = "exhaustive";
  std::uint64_t maxDisjuncts = Limits{}.maxDisjuncts;
  double maxSeconds = Limits{}.maxSeconds;
  std::string tracePath;
  std::uint64_t seed = 1;
  bool check = false;
  long bound = 16;
};

std::string readInput(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dialect dialectOf(const Options& o) { return o.dialect == "prespower" ? Dialect::PresPower : Dialect::PresExp; }

class Tracer {
 public:
  explicit Tracer(const Options& o) {
    if (o.tracePath.empty()) return;
    out_.open(o.tracePath);
    if (!out_) throw ContractError("cannot write trace file " + o.tracePath);
    nlohmann::json header{{"kind", "Header"}, {"seed", o.seed}, {"input", o.input}};
    out_ << header.dump() << '\n';
  }
  TraceSink sink() {
    if (!out_.is_open()) return {};
    return [this](const TraceEvent& e) { out_ << e.toJson().dump() << '\n'; };
  }

 private:
  std::ofstream out_;
};

SolveConfig configOf(const Options& o, Tracer& tracer) {
  SolveConfig cfg;
  cfg.strategy = o.strategy == "backtracking" ? Strategy::Backtracking : Strategy::Exhaustive;
  cfg.limits.maxDisjuncts = o.maxDisjuncts;
  cfg.limits.maxSeconds = o.maxSeconds;
  cfg.traceSink = tracer.sink();
  cfg.checkInvariants = o.check;
  return cfg;
}

// "auto" resolves to QF, which accepts every matrix of the exponential
// dialect; the power-predicate dialect always runs through Sem.
Fragment fragmentOf(const Options& o) {
  if (dialectOf(o) == Dialect::PresPower) return Fragment::Sem;
  return o.fragment == "sem" ? Fragment::Sem : Fragment::QF;
}

void summarize(const SolveStats& s) {
  std::cerr << "blocks=" << s.blocks << " pops=" << s.pops << " presQE=" << s.presQECalls
            << " semCover=" << s.semCoverCalls << " disjuncts=" << s.disjuncts;
  if (!s.violations.empty()) std::cerr << " violations=" << s.violations.size();
  std::cerr << '\n';
  for (const auto& v : s.violations) std::cerr << "  violation: " << v << '\n';
}

int decide(const Options& o, bool oracle) {
  Tracer tracer(o);
  SolveConfig cfg = configOf(o, tracer);
  Formula f = parse(readInput(o.input), dialectOf(o));
  const bool sentence = freeVariables(f).empty();

  if (!sentence) {
    PrenexFormula p = dialectOf(o) == Dialect::PresPower ? translatePresPower(f) : toPrenex(normalize(f));
    cfg.fragment = fragmentOf(o);
    SolveStats stats;
    Formula r = masterProcedure(p, cfg, &stats);
    std::cout << render(r) << '\n';
    summarize(stats);
    return kValid;
  }

  bool value = false;
  if (dialectOf(o) == Dialect::PresPower) {
    PipelineResult r = decidePresPower(f, cfg);
    value = r.value;
    summarize(r.semStats);
    summarize(r.qfStats);
  } else if (o.fragment == "sem") {
    PrenexFormula p = toPrenex(normalize(f));
    PipelineResult r = decideViaSem(p, cfg);
    value = r.value;
    summarize(r.semStats);
    summarize(r.qfStats);
  } else {
    Verdict v = decidePresExp(f, cfg);
    value = v.value;
    summarize(v.stats);
  }
  std::cout << (value ? "VALID" : "INVALID") << '\n';

  if (oracle) {
    if (dialectOf(o) == Dialect::PresPower) f = translatePresPower(f).toFormula();
    PrenexFormula p = toPrenex(normalize(f));
    bool existential = std::all_of(p.prefix.begin(), p.prefix.end(),
                                   [](const PrefixEntry& e) { return e.quantifier == Quantifier::Exists; });
    if (!existential || hasQuantifier(p.matrix)) {
      std::cout << "oracle: not applicable (sentence is not existential)\n";
    } else if (auto w = boundedWitnessSearch(p, Integer(o.bound))) {
      std::cout << "oracle: witness " << toJson(*w).dump() << '\n';
      if (!value) {
        std::cout << "MISMATCH\n";
        return kContract;
      }
    } else {
      std::cout << "oracle: no witness with |values| <= " << o.bound << (value ? " (inconclusive)" : "") << '\n';
    }
  }
  return value ? kValid : kInvalid;
}

int qe(const Options& o) {
  Tracer tracer(o);
  SolveConfig cfg = configOf(o, tracer);
  Formula f = parse(readInput(o.input), dialectOf(o));
  PrenexFormula p = dialectOf(o) == Dialect::PresPower ? translatePresPower(f) : toPrenex(normalize(f));
  cfg.fragment = fragmentOf(o);
  SolveStats stats;
  Formula r = masterProcedure(p, cfg, &stats);
  std::cout << render(r) << '\n';
  summarize(stats);
  return kValid;
}

int metricsCmd(const Options& o) {
  Formula f = parse(readInput(o.input), dialectOf(o));
  std::cout << metrics(normalize(f)).toJson(true).dump() << '\n';
  return kValid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for Presburger arithmetic with powers of two"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool solving) {
    sub->add_option("input", o.input, "Formula file ('-' for stdin)")->required();
    sub->add_option("--dialect", o.dialect, "Input dialect")->check(CLI::IsMember({"presexp", "prespower"}));
    if (!solving) return;
    sub->add_option("--strategy", o.strategy, "Search strategy")
        ->check(CLI::IsMember({"exhaustive", "backtracking"}));
    sub->add_option("--max-disjuncts", o.maxDisjuncts, "Disjunct limit")->check(CLI::PositiveNumber);
    sub->add_option("--max-seconds", o.maxSeconds, "Wall-clock limit")->check(CLI::PositiveNumber);
    sub->add_option("--trace", o.tracePath, "Write JSON-lines trace to FILE");
    sub->add_option("--seed", o.seed, "Seed recorded in the trace");
    sub->add_flag("--check", o.check, "Check parameter tables and invariants after every subroutine call");
  };

  auto* decideCmd = app.add_subcommand("decide", "Print VALID/INVALID for a sentence, or eliminate quantifiers");
  common(decideCmd, true);
  decideCmd->add_option("--fragment", o.fragment, "Target fragment")->check(CLI::IsMember({"qf", "sem", "auto"}));
  auto* qeCmd = app.add_subcommand("qe", "Run the master procedure and print its result");
  common(qeCmd, true);
  qeCmd->add_option("--fragment", o.fragment, "Target fragment")->check(CLI::IsMember({"qf", "sem", "auto"}));
  auto* oracleCmd = app.add_subcommand("check-oracle", "Decide, then cross-check with bounded witness search");
  common(oracleCmd, true);
  oracleCmd->add_option("--bound", o.bound, "Search box radius")->check(CLI::PositiveNumber);
  auto* metricsSub = app.add_subcommand("metrics", "Print the formula's metrics as JSON");
  common(metricsSub, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kParse;
  }

  try {
    if (decideCmd->parsed()) return decide(o, false);
    if (qeCmd->parsed()) return qe(o);
    if (oracleCmd->parsed()) return decide(o, true);
    if (metricsSub->parsed()) return metricsCmd(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ResourceExceeded& e) {
    std::cerr << "resource exceeded: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kContract;
  }
  return kContract;
}
