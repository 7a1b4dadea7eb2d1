#include "expq/prenex.hpp"

#include <algorithm>
#include <unordered_set>

#include "expq/analysis.hpp"
#include "expq/normalize.hpp"

namespace expq {

namespace {

struct Prenexer {
  std::unordered_set<Variable> used;
  std::vector<PrefixEntry> prefix;

  // Returns the matrix of f and appends f's quantifiers to `prefix`.
  Formula run(const Formula& f, bool negated) {
    switch (f.kind()) {
      case FormulaKind::Not:
        return lnot(run(f.child(), !negated));
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(run(c, negated));
        return f.kind() == FormulaKind::And ? land(std::move(cs)) : lor(std::move(cs));
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        Variable v = f.boundVar();
        Formula body = f.child();
        if (!used.insert(v).second) {
          Variable w = Variable::fresh(v.name());
          used.insert(w);
          body = renameVariable(body, v, w);
          v = w;
        }
        Quantifier q = negated ? dual(f.quantifier()) : f.quantifier();
        prefix.push_back({q, v});
        return run(body, negated);
      }
      default:
        return f;
    }
  }
};

using Blocks = std::vector<std::pair<Quantifier, std::vector<Variable>>>;

// Blocks needed to merge the children's block lists when the first block has
// quantifier q: each child contributes one extra block if it starts with the
// other quantifier.
std::size_t mergedLength(const std::vector<Blocks>& bs, Quantifier q) {
  std::size_t n = 0;
  for (const auto& b : bs)
    if (!b.empty()) n = std::max(n, b.size() + (b.front().first == q ? 0 : 1));
  return n;
}

// Ties go to `prefer`, the quantifier of the enclosing binder, whose block
// the first merged block can then join.
Blocks merge(std::vector<Blocks> bs, Quantifier prefer) {
  Blocks out;
  const std::size_t e = mergedLength(bs, Quantifier::Exists);
  const std::size_t a = mergedLength(bs, Quantifier::Forall);
  if (e == 0) return out;
  Quantifier q = e < a ? Quantifier::Exists : a < e ? Quantifier::Forall : prefer;
  std::vector<std::size_t> pos(bs.size(), 0);
  for (;;) {
    std::vector<Variable> block;
    bool left = false;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (pos[i] < bs[i].size() && bs[i][pos[i]].first == q) {
        auto& vs = bs[i][pos[i]++].second;
        block.insert(block.end(), vs.begin(), vs.end());
      }
      left = left || pos[i] < bs[i].size();
    }
    if (!block.empty()) out.emplace_back(q, std::move(block));
    if (!left) break;
    q = dual(q);
  }
  return out;
}

struct MinAltPrenexer {
  std::unordered_set<Variable> used;

  Formula run(const Formula& f, bool negated, Blocks& blocks, Quantifier prefer) {
    switch (f.kind()) {
      case FormulaKind::Not:
        return lnot(run(f.child(), !negated, blocks, prefer));
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> cs;
        std::vector<Blocks> bs;
        for (const auto& c : f.children()) {
          bs.emplace_back();
          cs.push_back(run(c, negated, bs.back(), prefer));
        }
        blocks = merge(std::move(bs), prefer);
        return f.kind() == FormulaKind::And ? land(std::move(cs)) : lor(std::move(cs));
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        Variable v = f.boundVar();
        Formula body = f.child();
        if (!used.insert(v).second) {
          Variable w = Variable::fresh(v.name());
          used.insert(w);
          body = renameVariable(body, v, w);
          v = w;
        }
        Quantifier q = negated ? dual(f.quantifier()) : f.quantifier();
        Blocks inner;
        Formula m = run(body, negated, inner, q);
        if (!inner.empty() && inner.front().first == q) {
          inner.front().second.insert(inner.front().second.begin(), v);
          blocks = std::move(inner);
        } else {
          blocks.clear();
          blocks.emplace_back(q, std::vector<Variable>{v});
          blocks.insert(blocks.end(), inner.begin(), inner.end());
        }
        return m;
      }
      default:
        return f;
    }
  }
};

}  // namespace

PrenexFormula toPrenexMinAlternation(const Formula& f) {
  MinAltPrenexer p;
  for (Variable v : freeVariables(f)) p.used.insert(v);
  Blocks blocks;
  Formula m = p.run(f, false, blocks, Quantifier::Exists);
  std::vector<PrefixEntry> prefix;
  for (const auto& [q, vs] : blocks)
    for (Variable v : vs) prefix.push_back({q, v});
  return PrenexFormula{std::move(prefix), std::move(m)};
}

PrenexFormula toPrenex(const Formula& f) {
  Prenexer p;
  for (Variable v : freeVariables(f)) p.used.insert(v);
  Formula m = p.run(f, false);
  return PrenexFormula{std::move(p.prefix), std::move(m)};
}

}  // namespace expq
