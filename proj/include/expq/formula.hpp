#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expq/term.hpp"

namespace expq {

enum class AtomKind : unsigned char { Less, Div, Pred };

// Less: term < 0.  Div: modulus | term.  Pred: P(term), term is a power of two
// (only before the power-predicate translation).
struct Atom {
  AtomKind kind = AtomKind::Less;
  Integer modulus = 0;
  Term term;

  static Atom less(Term t) { return Atom{AtomKind::Less, 0, std::move(t)}; }
  static Atom div(Integer q, Term t) { return Atom{AtomKind::Div, std::move(q), std::move(t)}; }
  static Atom pred(Term t) { return Atom{AtomKind::Pred, 0, std::move(t)}; }

  bool isLess() const { return kind == AtomKind::Less; }
  bool isDiv() const { return kind == AtomKind::Div; }
  bool isPred() const { return kind == AtomKind::Pred; }
  std::size_t hash() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind == b.kind && a.modulus == b.modulus && a.term == b.term;
  }
};

enum class FormulaKind : unsigned char { True, False, Atom, Not, And, Or, Exists, Forall };

enum class Quantifier : unsigned char { Exists, Forall };

inline Quantifier dual(Quantifier q) {
  return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

// Immutable, shared formula tree. The constructors here build nodes as given;
// the normalizing constructors live in normalize.hpp.
class Formula {
 public:
  Formula();  // True

  static Formula top();
  static Formula bottom();
  static Formula atom(Atom a);
  static Formula notOf(Formula f);
  static Formula andOf(std::vector<Formula> fs);
  static Formula orOf(std::vector<Formula> fs);
  static Formula quantified(Quantifier q, Variable v, Formula body);

  FormulaKind kind() const;
  bool isTrue() const { return kind() == FormulaKind::True; }
  bool isFalse() const { return kind() == FormulaKind::False; }
  bool isAtom() const { return kind() == FormulaKind::Atom; }
  bool isQuantifier() const {
    return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall;
  }

  const Atom& atomValue() const;
  const std::vector<Formula>& children() const;
  const Formula& child() const;  // Not / quantifier body
  Variable boundVar() const;
  Quantifier quantifier() const;

  std::size_t hash() const;
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  static Formula nary(FormulaKind k, std::vector<Formula> fs);
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Total order used to canonicalize n-ary connectives.
std::strong_ordering compare(const Formula& a, const Formula& b);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};

struct PrefixEntry {
  Quantifier quantifier;
  Variable var;
  friend bool operator==(const PrefixEntry&, const PrefixEntry&) = default;
};

struct PrenexFormula {
  std::vector<PrefixEntry> prefix;
  Formula matrix;

  Formula toFormula() const;
};

}  // namespace expq

template <>
struct std::hash<expq::Formula> {
  std::size_t operator()(const expq::Formula& f) const noexcept { return f.hash(); }
};
template <>
struct std::hash<expq::Atom> {
  std::size_t operator()(const expq::Atom& a) const noexcept { return a.hash(); }
};
