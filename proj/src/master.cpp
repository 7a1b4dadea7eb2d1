#include "expq/master.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "expq/analysis.hpp"
#include "expq/bounds.hpp"
#include "expq/errors.hpp"
#include "expq/normalize.hpp"
#include "expq/oracle.hpp"
#include "expq/prenex.hpp"
#include "expq/presburger.hpp"
#include "expq/semenov.hpp"

namespace expq {

const char* toString(TraceKind k) {
  switch (k) {
    case TraceKind::BlockStart: return "BlockStart";
    case TraceKind::Pop: return "Pop";
    case TraceKind::PresQECall: return "PresQECall";
    case TraceKind::SemCoverCall: return "SemCoverCall";
    case TraceKind::LineariseCall: return "LineariseCall";
    case TraceKind::SimplifyCall: return "SimplifyCall";
    case TraceKind::BlockEnd: return "BlockEnd";
  }
  return "?";
}

nlohmann::json TraceEvent::toJson() const {
  nlohmann::json j;
  j["kind"] = toString(kind);
  j["block"] = block;
  j["wall"] = wallSeconds;
  if (metricsBefore) j["before"] = metricsBefore->toJson();
  if (metricsAfter) j["after"] = metricsAfter->toJson();
  j["counts"] = counts;
  return j;
}

void SolveStats::merge(const SolveStats& o) {
  blocks += o.blocks;
  pops += o.pops;
  presQECalls += o.presQECalls;
  semCoverCalls += o.semCoverCalls;
  lineariseCalls += o.lineariseCalls;
  simplifyCalls += o.simplifyCalls;
  dedupHits += o.dedupHits;
  maxQueue = std::max(maxQueue, o.maxQueue);
  quantifiersAdded += o.quantifiersAdded;
  maxQuantifiersPerSemCover = std::max(maxQuantifiersPerSemCover, o.maxQuantifiersPerSemCover);
  maxStaleSteps = std::max(maxStaleSteps, o.maxStaleSteps);
  maxMaxvars = std::max(maxMaxvars, o.maxMaxvars);
  maxHomtermsNorm = std::max(maxHomtermsNorm, o.maxHomtermsNorm);
  disjuncts += o.disjuncts;
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
}

nlohmann::json SolveStats::toJson() const {
  nlohmann::json j;
  j["blocks"] = blocks;
  j["pops"] = pops;
  j["presQECalls"] = presQECalls;
  j["semCoverCalls"] = semCoverCalls;
  j["lineariseCalls"] = lineariseCalls;
  j["simplifyCalls"] = simplifyCalls;
  j["dedupHits"] = dedupHits;
  j["maxQueue"] = maxQueue;
  j["quantifiersAdded"] = quantifiersAdded;
  j["maxStaleSteps"] = maxStaleSteps;
  j["maxMaxvars"] = maxMaxvars;
  j["maxHomtermsNorm"] = toString(maxHomtermsNorm);
  j["disjuncts"] = disjuncts;
  j["violations"] = violations;
  return j;
}

namespace {

struct Pair {
  std::vector<Variable> vars;
  Formula body;
  std::size_t stale = 0;
};

struct PairKey {
  std::vector<Variable> vars;
  Formula body;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    std::size_t h = k.body.hash();
    for (Variable v : k.vars) h = hashCombine(h, v.hash());
    return h;
  }
};

std::vector<Variable> without(const std::vector<Variable>& xs, Variable x) {
  std::vector<Variable> out;
  for (Variable y : xs)
    if (!(y == x)) out.push_back(y);
  return out;
}

std::vector<Formula> conjunctsOf(const Formula& f) {
  if (f.kind() == FormulaKind::And) return f.children();
  return {f};
}

// Disjuncts of f. Negations of conjunctions are split by De Morgan; for the
// negation of a disjunction, conjuncts shared by every disjunct come out
// first:  !(C && A1 || C && A2)  =  !C || !(A1 || A2).
void splitOrInto(const Formula& f, std::vector<Formula>& out) {
  if (f.isFalse()) return;
  if (f.kind() == FormulaKind::Or) {
    for (const auto& c : f.children()) splitOrInto(c, out);
    return;
  }
  if (f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::And) {
    for (const auto& c : f.child().children()) splitOrInto(lnot(c), out);
    return;
  }
  if (f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::Or) {
    const auto& ds = f.child().children();
    std::vector<Formula> common = conjunctsOf(ds.front());
    for (std::size_t i = 1; i < ds.size() && !common.empty(); ++i) {
      std::vector<Formula> cs = conjunctsOf(ds[i]);
      std::unordered_set<Formula> set(cs.begin(), cs.end());
      std::erase_if(common, [&](const Formula& c) { return !set.count(c); });
    }
    if (!common.empty()) {
      std::unordered_set<Formula> set(common.begin(), common.end());
      std::vector<Formula> rests;
      for (const auto& d : ds) {
        std::vector<Formula> rest;
        for (const auto& c : conjunctsOf(d))
          if (!set.count(c)) rest.push_back(c);
        rests.push_back(land(std::move(rest)));
      }
      for (const auto& c : common) splitOrInto(lnot(c), out);
      splitOrInto(lnot(lor(std::move(rests))), out);
      return;
    }
  }
  out.push_back(f);
}

std::vector<Formula> splitOr(const Formula& f) {
  std::vector<Formula> out;
  splitOrInto(f, out);
  return out;
}

bool hasNonSimpleDiv(const Formula& f) {
  for (const auto& a : collectAtoms(f))
    if (a.isDiv() && !divIsSimple(a)) return true;
  return false;
}

// Drops disjuncts whose conjuncts include all conjuncts of another one.
void pruneSubsumed(std::vector<Formula>& D) {
  if (D.size() < 2 || D.size() > 4000) return;
  auto conjuncts = [](const Formula& f) {
    std::unordered_set<Formula> s;
    if (f.kind() == FormulaKind::And) s.insert(f.children().begin(), f.children().end());
    else s.insert(f);
    return s;
  };
  std::vector<std::size_t> order(D.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::unordered_set<Formula>> sets;
  for (const auto& f : D) sets.push_back(conjuncts(f));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sets[a].size() < sets[b].size(); });
  std::vector<bool> drop(D.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    for (std::size_t k : kept) {
      if (std::all_of(sets[k].begin(), sets[k].end(), [&](const Formula& c) { return sets[i].count(c) > 0; })) {
        drop[i] = true;
        break;
      }
    }
    if (!drop[i]) kept.push_back(i);
  }
  std::vector<Formula> out;
  for (std::size_t i = 0; i < D.size(); ++i)
    if (!drop[i]) out.push_back(D[i]);
  D = std::move(out);
}

using PairOut = std::function<bool(Pair&&)>;

class Engine {
 public:
  Engine(const SolveConfig& cfg, SolveStats& stats, Budget& budget) : cfg_(cfg), stats_(stats), budget_(budget) {}

  std::size_t block = 0;
  std::optional<OctParams> oct;

  bool instrumented() const { return cfg_.checkInvariants || static_cast<bool>(cfg_.traceSink); }

  void violation(const std::string& what) { stats_.violations.push_back("block " + std::to_string(block) + ": " + what); }

  void trace(TraceKind kind, std::optional<MetricsReport> before = std::nullopt,
             std::optional<MetricsReport> after = std::nullopt, nlohmann::json counts = nlohmann::json::object()) {
    if (!cfg_.traceSink) return;
    TraceEvent e;
    e.kind = kind;
    e.block = block;
    e.wallSeconds = budget_.elapsedSeconds();
    e.metricsBefore = std::move(before);
    e.metricsAfter = std::move(after);
    e.counts = std::move(counts);
    cfg_.traceSink(e);
  }

  // Bookkeeping for every formula that enters the worklist.
  void produced(const Formula& f, const MetricsReport* m) {
    budget_.checkCoefficients(f);
    if (!m) return;
    stats_.maxMaxvars = std::max(stats_.maxMaxvars, m->maxvars);
    stats_.maxHomtermsNorm = std::max(stats_.maxHomtermsNorm, m->norminfHomterms);
    if (cfg_.checkInvariants) {
      if (!fragmentCheck(f, cfg_.fragment)) violation("output outside the fragment");
      if (hasNonSimpleDiv(f)) violation("output has a non-simple divisibility");
      if (oct) {
        for (auto& v : checkOctOutput(*oct, *m)) violation(v);
        if (!formulaInOct(f)) violation("output left Oct");
      }
    }
  }

  // Preliminary simplify; splits the result into disjuncts.
  std::vector<Formula> prepare(const Formula& f) {
    if (!hasNonSimpleDiv(f)) return splitOr(f);
    ++stats_.simplifyCalls;
    std::optional<MetricsReport> before;
    if (instrumented()) before = metrics(f);
    SimplifyInfo info;
    CoverSet cs = simplify(f, cfg_.fragment, &budget_, &info);
    std::vector<Formula> out;
    for (const auto& m : cs.members)
      for (auto& c : splitOr(m)) out.push_back(std::move(c));
    if (cfg_.traceSink)
      trace(TraceKind::SimplifyCall, before, metrics(lor(out)),
            {{"members", cs.size()}, {"residueMaps", info.residueMaps}, {"modulus", toString(info.modulus)}});
    return out;
  }

  // One step of the inner loop on a pair with a nonempty block.
  bool expand(const Pair& p, const PairOut& out) {
    budget_.checkTime();
    const Formula& phi = p.body;
    std::vector<Occurrence> occ;
    for (Variable x : p.vars) occ.push_back(occurrence(phi, x));

    // Variable no longer present.
    for (std::size_t i = 0; i < p.vars.size(); ++i)
      if (!occ[i].any()) return out(Pair{without(p.vars, p.vars[i]), phi, 0});

    // The quantifier can move into the fragment.
    if (cfg_.fragment == Fragment::Sem) {
      for (Variable x : p.vars) {
        Formula q = quantify(Quantifier::Exists, x, phi);
        if (inSem(q)) return out(Pair{without(p.vars, x), q, 0});
      }
    }

    for (std::size_t i = 0; i < p.vars.size(); ++i)
      if (occ[i].onlyLinear()) return callPresQE(p, p.vars[i], out);

    return callSemCover(p, occ, out);
  }

 private:
  const SolveConfig& cfg_;
  SolveStats& stats_;
  Budget& budget_;

  bool emitPieces(const Formula& f, std::vector<Variable> vars, std::size_t stale, const PairOut& out) {
    for (auto& piece : splitOr(f)) {
      if (!out(Pair{vars, piece, stale})) return false;
    }
    return true;
  }

  bool callPresQE(const Pair& p, Variable x, const PairOut& out) {
    ++stats_.presQECalls;
    const bool inst = instrumented();
    std::optional<MetricsReport> before;
    if (inst) before = metrics(p.body);
    PresQEInfo info;
    std::size_t seenCores = 0;
    std::optional<PresQEParams> params;
    Integer countBound = 0;
    std::vector<Formula> outs;
    const std::vector<Variable> rest = without(p.vars, x);
    bool completed = true;

    presQE(x, p.vars, p.body, [&](const Formula& psi) {
      std::optional<MetricsReport> m;
      if (inst) m = metrics(psi);
      if (cfg_.checkInvariants) {
        for (; seenCores < info.coreInputs.size(); ++seenCores) {
          PresQEParams q = PresQEParams::of(metrics(info.coreInputs[seenCores]));
          countBound += q.memberBound();
          if (params) params->widen(q); else params = q;
        }
        for (auto& v : checkPresQEOutput(*params, *m)) violation(v);
        if (occurrence(psi, x).any()) violation("presQE output still mentions " + x.name());
      }
      produced(psi, m ? &*m : nullptr);
      if (cfg_.traceSink) outs.push_back(psi);
      if (!emitPieces(psi, rest, 0, out)) {
        completed = false;
        return false;
      }
      return true;
    }, &budget_, &info, cfg_.presQERange);

    if (cfg_.checkInvariants && completed && Integer(info.members) > countBound && seenCores > 0)
      violation("presQE produced " + std::to_string(info.members) + " members, above " + toString(countBound));
    if (cfg_.traceSink)
      trace(TraceKind::PresQECall, before, metrics(lor(outs)),
            {{"var", x.name()}, {"members", info.members}, {"candidates", info.candidates.size()},
             {"g", toString(info.g)}, {"maxR", toString(info.maxR)}});
    return completed;
  }

  bool callSemCover(const Pair& p, const std::vector<Occurrence>& occ, const PairOut& out) {
    ++stats_.semCoverCalls;
    const bool inst = instrumented();
    std::optional<MetricsReport> before;
    if (inst) before = metrics(p.body);
    std::optional<SemCoverParams> params;
    if (cfg_.checkInvariants) params = SemCoverParams::of(*before, p.vars.size());
    SemCoverInfo info;
    std::vector<Formula> outs;
    std::vector<Formula> linOuts;
    bool completed = true;
    const std::size_t stale = p.stale + 1;
    stats_.maxStaleSteps = std::max(stats_.maxStaleSteps, stale);
    if (cfg_.checkInvariants && stale > 2) violation("pair processed " + std::to_string(stale) + " times without shrinking");

    semCover(p.vars, p.body, state, [&](const Formula& theta) {
      std::optional<MetricsReport> m;
      if (inst) m = metrics(theta);
      if (cfg_.checkInvariants) {
        for (auto& v : checkSemCoverOutput(*params, *m)) violation(v);
        if (!hasNiceVariable(p.vars, theta)) violation("semCover output without a PC-only block variable");
        if (Integer(blockHomtermsOutsidePC(theta, p.vars)) > params->h)
          violation("semCover output with too many block homterms outside PC");
        if (cfg_.fragment == Fragment::Sem) {
          for (std::size_t i = 0; i < p.vars.size(); ++i) {
            if (!occ[i].onlyLinear() && (occurrence(theta, p.vars[i]).linear || occurrence(theta, p.vars[i]).abs))
              violation("semCover made " + p.vars[i].name() + " linear");
          }
        }
      }
      if (cfg_.traceSink) outs.push_back(theta);
      Formula lin = linearise(p.vars, theta, cfg_.fragment);
      if (cfg_.fragment == Fragment::QF) {
        ++stats_.lineariseCalls;
        std::optional<MetricsReport> lm;
        if (inst) lm = metrics(lin);
        if (cfg_.checkInvariants) {
          LineariseParams lp = LineariseParams::of(*m, theta, p.vars.size());
          for (auto& v : checkLineariseOutput(lp, *lm)) violation(v + " on " + render(theta) + " -> " + render(lin));
        }
        produced(lin, lm ? &*lm : nullptr);
        if (cfg_.traceSink) {
          linOuts.push_back(lin);
          trace(TraceKind::LineariseCall, m, lm, {{"changed", !(lin == theta)}});
        }
      } else {
        produced(lin, m ? &*m : nullptr);
      }
      if (!emitPieces(lin, p.vars, stale, out)) {
        completed = false;
        return false;
      }
      return true;
    }, &budget_, &info);

    stats_.quantifiersAdded += info.quantifiersAdded;
    stats_.maxQuantifiersPerSemCover = std::max(stats_.maxQuantifiersPerSemCover, info.quantifiersAdded);
    if (cfg_.checkInvariants) {
      if (Integer(info.quantifiersAdded) > params->h)
        violation("semCover added " + std::to_string(info.quantifiersAdded) + " quantifiers");
      if (completed && !params->countWithinBound(info.outputs))
        violation("semCover produced " + std::to_string(info.outputs) + " outputs, above the bound");
    }
    if (cfg_.traceSink)
      trace(TraceKind::SemCoverCall, before, metrics(lor(outs)),
            {{"vars", p.vars.size()}, {"outputs", info.outputs}, {"pairs", info.inequalityPairs},
             {"gamma", info.gammaCount}, {"sigma", info.sigmaCount}, {"quantifiersAdded", info.quantifiersAdded}});
    return completed;
  }

 public:
  SemState state;
};

// Inner loop of one block: returns the set D (or {True} on a short circuit).
std::vector<Formula> runBlock(Engine& eng, SolveStats& stats, const std::vector<Variable>& u, const Formula& psi) {
  std::vector<Pair> stack;
  std::unordered_set<PairKey, PairKeyHash> seen;
  std::vector<Formula> D;
  std::unordered_set<Formula> inD;

  auto push = [&](Pair&& p) {
    if (!seen.insert(PairKey{p.vars, p.body}).second) {
      ++stats.dedupHits;
      return;
    }
    stack.push_back(std::move(p));
    stats.maxQueue = std::max(stats.maxQueue, stack.size());
  };
  {
    std::vector<Formula> init = eng.prepare(psi);
    for (auto it = init.rbegin(); it != init.rend(); ++it) push(Pair{u, *it, 0});
  }

  while (!stack.empty()) {
    Pair p = std::move(stack.back());
    stack.pop_back();
    ++stats.pops;
    if (p.vars.empty()) {
      if (p.body.isTrue()) return {Formula::top()};
      if (inD.insert(p.body).second) D.push_back(p.body);
      continue;
    }
    std::vector<Pair> produced;
    eng.expand(p, [&](Pair&& c) {
      produced.push_back(std::move(c));
      return true;
    });
    // Reverse so that the first output is popped first.
    for (auto it = produced.rbegin(); it != produced.rend(); ++it) push(std::move(*it));
  }
  return D;
}

std::size_t countBlocks(const std::vector<PrefixEntry>& prefix, std::size_t* maxBlock = nullptr) {
  std::size_t blocks = 0;
  std::size_t run = 0;
  if (maxBlock) *maxBlock = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i == 0 || prefix[i].quantifier != prefix[i - 1].quantifier) {
      ++blocks;
      run = 0;
    }
    ++run;
    if (maxBlock) *maxBlock = std::max(*maxBlock, run);
  }
  return blocks;
}

Formula runMaster(const PrenexFormula& input, const SolveConfig& cfg, SolveStats& stats, Budget& budget) {
  Engine eng(cfg, stats, budget);
  PrenexFormula cur = input;
  const bool sentence = freeVariables(input.toFormula()).empty();

  Formula matrix = cur.matrix;
  if (hasNonSimpleDiv(matrix)) matrix = lor(eng.prepare(matrix));
  if (!fragmentCheck(matrix, cfg.fragment))
    throw ContractError("masterProcedure: matrix is not in the requested fragment");
  cur.matrix = matrix;

  if (cfg.octTable) {
    std::size_t maxBlock = 0;
    std::size_t blocks = countBlocks(cur.prefix, &maxBlock);
    eng.oct = OctParams::of(metrics(cur.matrix), blocks, maxBlock);
    if (!formulaInOct(cur.matrix)) stats.violations.push_back("input matrix is not in Oct");
  }
  const std::size_t altBound = countBlocks(cur.prefix);

  for (;;) {
    // Largest suffix of the prefix that, with the matrix, stays in the fragment.
    std::size_t k = cur.prefix.size();
    Formula psi = cur.matrix;
    while (k > 0) {
      const auto& e = cur.prefix[k - 1];
      Formula widened = quantify(e.quantifier, e.var, psi);
      if (!fragmentCheck(widened, cfg.fragment)) break;
      psi = widened;
      --k;
    }
    if (k == 0) return psi;

    const Quantifier q = cur.prefix[k - 1].quantifier;
    std::size_t start = k - 1;
    while (start > 0 && cur.prefix[start - 1].quantifier == q) --start;
    std::vector<Variable> u;
    for (std::size_t i = start; i < k; ++i) u.push_back(cur.prefix[i].var);
    const bool negated = q == Quantifier::Forall;
    if (negated) psi = lnot(psi);

    ++stats.blocks;
    ++eng.block;
    if (cfg.checkInvariants && stats.blocks > altBound)
      stats.violations.push_back("outer loop ran more than alt(phi) = " + std::to_string(altBound) + " times");
    eng.state = SemState{};
    eng.trace(TraceKind::BlockStart, std::nullopt, std::nullopt,
              {{"vars", u.size()}, {"negated", negated}, {"remainingPrefix", start}});

    std::vector<Formula> D = runBlock(eng, stats, u, psi);
    pruneSubsumed(D);
    Formula body = lor(D);
    stats.disjuncts = budget.disjuncts();

    PrenexFormula next;
    next.prefix.assign(cur.prefix.begin(), cur.prefix.begin() + static_cast<long>(start));
    for (Variable w : eng.state.piPrime)
      next.prefix.push_back(PrefixEntry{negated ? Quantifier::Exists : Quantifier::Forall, w});
    next.matrix = negated ? lnot(body) : body;
    eng.trace(TraceKind::BlockEnd, std::nullopt, std::nullopt,
              {{"disjuncts", D.size()}, {"piPrime", eng.state.piPrime.size()}});
    cur = std::move(next);

    if (start == 0) {
      if (sentence && !eng.state.piPrime.empty())
        throw ContractError("masterProcedure: definitional quantifiers left on a sentence");
      return cur.toFormula();
    }
  }
}

}  // namespace

Formula masterProcedure(const PrenexFormula& phi, const SolveConfig& cfg, SolveStats* stats) {
  SolveStats local;
  SolveStats& s = stats ? *stats : local;
  Budget budget(cfg.limits);
  Formula out = runMaster(phi, cfg, s, budget);
  s.disjuncts = budget.disjuncts();
  return out;
}

bool decideExistential(const PrenexFormula& phi, const SolveConfig& cfg, SolveStats* stats) {
  SolveStats local;
  SolveStats& s = stats ? *stats : local;
  for (const auto& e : phi.prefix)
    if (e.quantifier != Quantifier::Exists) throw ContractError("decideExistential: prefix is not existential");
  if (hasQuantifier(phi.matrix)) throw ContractError("decideExistential: matrix has quantifiers");
  if (!freeVariables(phi.toFormula()).empty()) throw ContractError("decideExistential: formula is not a sentence");

  SolveConfig qf = cfg;
  qf.fragment = Fragment::QF;
  Budget budget(qf.limits);
  Engine eng(qf, s, budget);
  eng.block = 1;
  s.blocks = 1;
  std::vector<Variable> u;
  for (const auto& e : phi.prefix) u.push_back(e.var);

  std::unordered_set<PairKey, PairKeyHash> failed;
  std::function<bool(Pair&&)> dfs = [&](Pair&& p) -> bool {
    ++s.pops;
    if (p.vars.empty()) return evalGround(p.body);
    PairKey key{p.vars, p.body};
    if (failed.count(key)) {
      ++s.dedupHits;
      return false;
    }
    bool found = false;
    eng.expand(p, [&](Pair&& c) {
      if (dfs(std::move(c))) {
        found = true;
        return false;
      }
      return true;
    });
    if (!found) failed.insert(std::move(key));
    return found;
  };

  bool result = false;
  for (const auto& f : eng.prepare(phi.matrix)) {
    if (dfs(Pair{u, f, 0})) {
      result = true;
      break;
    }
  }
  s.disjuncts = budget.disjuncts();
  return result;
}

Verdict decidePresExp(const Formula& sentence, const SolveConfig& cfg) {
  if (!freeVariables(sentence).empty()) throw ContractError("decidePresExp: formula is not a sentence");
  PrenexFormula p = toPrenex(normalize(sentence));
  Verdict v;
  const bool existential = std::all_of(p.prefix.begin(), p.prefix.end(),
                                       [](const PrefixEntry& e) { return e.quantifier == Quantifier::Exists; });
  if (cfg.strategy == Strategy::Backtracking && existential) {
    v.value = decideExistential(p, cfg, &v.stats);
    v.residual = v.value ? Formula::top() : Formula::bottom();
    return v;
  }
  SolveConfig qf = cfg;
  qf.fragment = Fragment::QF;
  v.residual = masterProcedure(p, qf, &v.stats);
  v.value = evalGround(v.residual);
  return v;
}

PipelineResult decideViaSem(const PrenexFormula& phi, const SolveConfig& cfg) {
  if (!freeVariables(phi.toFormula()).empty()) throw ContractError("decideViaSem: formula is not a sentence");
  const auto start = std::chrono::steady_clock::now();
  PipelineResult r;
  r.translated = phi;

  SolveConfig sem = cfg;
  sem.fragment = Fragment::Sem;
  sem.octTable = false;
  r.stage1 = masterProcedure(phi, sem, &r.semStats);

  SolveConfig qf = cfg;
  qf.fragment = Fragment::QF;
  qf.octTable = true;
  r.stage3InOct = true;

  // One wall-clock limit for the whole pipeline.
  auto remaining = [&] {
    double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double left = cfg.limits.maxSeconds - used;
    if (left <= 0)
      throw ResourceExceeded("time limit of " + std::to_string(cfg.limits.maxSeconds) + " s exceeded");
    return left;
  };

  // The output is a sentence, so every quantified subformula not below
  // another quantifier is closed.
  std::unordered_map<Formula, bool> decided;
  std::function<Formula(const Formula&)> replace = [&](const Formula& f) -> Formula {
    switch (f.kind()) {
      case FormulaKind::Not: return lnot(replace(f.child()));
      case FormulaKind::And:
      case FormulaKind::Or: {
        // Children after a deciding one are left undecided.
        const bool conj = f.kind() == FormulaKind::And;
        std::vector<Formula> cs;
        for (const auto& c : f.children()) {
          cs.push_back(replace(c));
          if (cs.back().kind() == (conj ? FormulaKind::False : FormulaKind::True)) return cs.back();
        }
        return conj ? land(std::move(cs)) : lor(std::move(cs));
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        auto it = decided.find(f);
        if (it == decided.end()) {
          PrenexFormula p2 = toPrenexMinAlternation(f);
          std::vector<Variable> xs;
          for (const auto& e : p2.prefix) xs.push_back(e.var);
          PrenexFormula p3{p2.prefix, linearise(xs, p2.matrix, Fragment::QF)};
          if (!formulaInOct(p3.matrix)) {
            r.stage3InOct = false;
            throw ContractError("linearised matrix is not in Oct: " + render(p3.matrix));
          }
          SolveStats st;
          qf.limits.maxSeconds = remaining();
          Formula res = masterProcedure(p3, qf, &st);
          r.qfStats.merge(st);
          r.stage3.push_back(std::move(p3));
          r.residuals.push_back(res);
          it = decided.emplace(f, evalGround(res)).first;
        }
        return it->second ? Formula::top() : Formula::bottom();
      }
      default: return f;
    }
  };
  r.residual = replace(r.stage1);
  r.value = evalGround(r.residual);
  return r;
}

PipelineResult decidePresPower(const Formula& sentence, const SolveConfig& cfg) {
  if (!freeVariables(sentence).empty()) throw ContractError("decidePresPower: formula is not a sentence");
  return decideViaSem(translatePresPower(sentence), cfg);
}

PipelineResult decidePresPower(const SourceFormula& src, const SolveConfig& cfg) {
  return decidePresPower(parse(src), cfg);
}

}  // namespace expq
