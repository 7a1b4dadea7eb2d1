#include "expq/formula.hpp"

#include <stdexcept>

#include "expq/errors.hpp"

namespace expq {

std::size_t Atom::hash() const {
  std::size_t h = static_cast<std::size_t>(kind) * 31 + 7;
  h = hashCombine(h, hashInteger(modulus));
  return hashCombine(h, term.hash());
}

struct Formula::Node {
  FormulaKind kind;
  std::size_t hash;
  std::optional<Atom> atom;
  std::vector<Formula> children;
  Variable var;
  Quantifier quant = Quantifier::Exists;
};

namespace {

std::size_t kindSeed(FormulaKind k) { return 0x51ED270B27A3C1D5ULL * (static_cast<std::size_t>(k) + 1); }

}  // namespace

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(
      Node{FormulaKind::True, kindSeed(FormulaKind::True), std::nullopt, {}, {}, {}}));
  return t;
}

Formula Formula::bottom() {
  static const Formula f(std::make_shared<const Node>(
      Node{FormulaKind::False, kindSeed(FormulaKind::False), std::nullopt, {}, {}, {}}));
  return f;
}

Formula Formula::atom(Atom a) {
  std::size_t h = hashCombine(kindSeed(FormulaKind::Atom), a.hash());
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Atom, h, std::move(a), {}, {}, {}}));
}

Formula Formula::notOf(Formula f) {
  std::size_t h = hashCombine(kindSeed(FormulaKind::Not), f.hash());
  std::vector<Formula> cs{std::move(f)};
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Not, h, std::nullopt, std::move(cs), {}, {}}));
}

Formula Formula::andOf(std::vector<Formula> fs) { return nary(FormulaKind::And, std::move(fs)); }
Formula Formula::orOf(std::vector<Formula> fs) { return nary(FormulaKind::Or, std::move(fs)); }

Formula Formula::quantified(Quantifier q, Variable v, Formula body) {
  FormulaKind k = q == Quantifier::Exists ? FormulaKind::Exists : FormulaKind::Forall;
  std::size_t h = hashCombine(hashCombine(kindSeed(k), v.hash()), body.hash());
  std::vector<Formula> cs{std::move(body)};
  return Formula(std::make_shared<const Node>(Node{k, h, std::nullopt, std::move(cs), v, q}));
}

FormulaKind Formula::kind() const { return node_->kind; }

const Atom& Formula::atomValue() const {
  if (!node_->atom) throw ContractError("formula is not an atom");
  return *node_->atom;
}

const std::vector<Formula>& Formula::children() const { return node_->children; }

const Formula& Formula::child() const {
  if (node_->children.size() != 1) throw ContractError("formula has no unique child");
  return node_->children.front();
}

Variable Formula::boundVar() const { return node_->var; }
Quantifier Formula::quantifier() const { return node_->quant; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  return compare(a, b) == 0;
}

std::strong_ordering compare(const Formula& a, const Formula& b) {
  if (a.identity() == b.identity()) return std::strong_ordering::equal;
  if (auto c = a.hash() <=> b.hash(); c != 0) return c;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return std::strong_ordering::equal;
    case FormulaKind::Atom: {
      const Atom& x = a.atomValue();
      const Atom& y = b.atomValue();
      if (auto c = x.kind <=> y.kind; c != 0) return c;
      if (int d = cmp(x.modulus, y.modulus); d != 0)
        return d < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      return compare(x.term, y.term);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (auto c = a.boundVar() <=> b.boundVar(); c != 0) return c;
      [[fallthrough]];
    default: {
      const auto& xs = a.children();
      const auto& ys = b.children();
      if (auto c = xs.size() <=> ys.size(); c != 0) return c;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (auto c = compare(xs[i], ys[i]); c != 0) return c;
      return std::strong_ordering::equal;
    }
  }
}

Formula Formula::nary(FormulaKind k, std::vector<Formula> fs) {
  std::size_t h = kindSeed(k);
  for (const auto& f : fs) h = hashCombine(h, f.hash());
  return Formula(std::make_shared<const Node>(Node{k, h, std::nullopt, std::move(fs), {}, {}}));
}

Formula PrenexFormula::toFormula() const {
  Formula f = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    f = Formula::quantified(it->quantifier, it->var, f);
  return f;
}

}  // namespace expq
