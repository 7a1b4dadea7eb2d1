#include "expq/normalize.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"

namespace expq {

namespace {

Formula fromBool(bool b) { return b ? Formula::top() : Formula::bottom(); }

// Decides t < 0 when the sign of t is fixed by its shape: powers are >= 1,
// absolute values are >= 0.
std::optional<bool> signTrivial(const Term& t) {
  if (t.hasKind(MonoKind::Linear)) return std::nullopt;
  bool allPos = true;
  bool allNeg = true;
  Integer powSum = 0;
  for (const auto& [m, a] : t.entries()) {
    if (sgn(a) > 0) allNeg = false;
    if (sgn(a) < 0) allPos = false;
    if (m.kind == MonoKind::Power) powSum += a;
  }
  if (allPos && powSum + t.constant() >= 0) return false;
  if (allNeg && powSum + t.constant() < 0) return true;
  return std::nullopt;
}

}  // namespace

Formula less(Term t) {
  if (t.isConstant()) return fromBool(sgn(t.constant()) < 0);
  if (auto v = signTrivial(t)) return fromBool(*v);
  if (t.size() == 1 && t.entries().front().first.kind != MonoKind::Power) {
    const auto& [m, a] = t.entries().front();
    if (abs(a) >= 2) {
      Integer b = -t.constant();  // a*m < b
      if (sgn(a) > 0) {
        Integer k = floorDiv(b - 1, a);  // m <= k
        return less(Term::mono(m) - Term(k) - Term(1));
      }
      Integer k = ceilDiv(b - 1, a);  // m >= k
      return less(Term(k) - Term::mono(m) - Term(1));
    }
  }
  return Formula::atom(Atom::less(std::move(t)));
}

Formula lessThan(const Term& a, const Term& b) { return less(a - b); }
Formula lessEq(const Term& a, const Term& b) { return less(a - b - Term(1)); }
Formula equal(const Term& a, const Term& b) { return land(lessEq(a, b), lessEq(b, a)); }
Formula notEqual(const Term& a, const Term& b) { return lor(lessThan(a, b), lessThan(b, a)); }

Formula divides(Integer q, Term t) {
  if (sgn(q) <= 0) throw ContractError("divisibility modulus must be positive");
  if (q == 1) return Formula::top();
  Term r = t.reducedMod(q);
  if (r.isConstant()) return fromBool(sgn(r.constant()) == 0);
  if (r.size() == 1) {
    // q | a*m + c  ~>  q/d | m + c', with d = gcd(a, q) and a/d inverted mod q/d.
    const auto& [m, a] = r.entries().front();
    Integer d = gcd(a, q);
    if (!expq::divides(d, r.constant())) return Formula::bottom();
    Integer q2 = q / d;
    if (q2 == 1) return Formula::top();
    Integer inv;
    Integer a2 = a / d;
    mpz_invert(inv.get_mpz_t(), a2.get_mpz_t(), q2.get_mpz_t());
    Integer c = mod(inv * (r.constant() / d), q2);
    return Formula::atom(Atom::div(std::move(q2), Term::mono(m) + Term(c)));
  }
  return Formula::atom(Atom::div(std::move(q), std::move(r)));
}

Formula normalizeAtom(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Less: return less(a.term);
    case AtomKind::Div: return divides(a.modulus, a.term);
    case AtomKind::Pred:
      if (a.term.isConstant()) return fromBool(log2Exact(a.term.constant()) >= 0);
      return Formula::atom(a);
  }
  return Formula::atom(a);
}

Formula lnot(Formula f) {
  switch (f.kind()) {
    case FormulaKind::True: return Formula::bottom();
    case FormulaKind::False: return Formula::top();
    case FormulaKind::Not: return f.child();
    default: return Formula::notOf(std::move(f));
  }
}

namespace {

struct BoundEntry {
  Integer constant;
  Formula atom;
};

// Shared body of land/lor. For a conjunction the absorbing element is False;
// for a disjunction it is True.
Formula combine(std::vector<Formula> fs, bool conj) {
  const FormulaKind self = conj ? FormulaKind::And : FormulaKind::Or;
  const FormulaKind absorbing = conj ? FormulaKind::False : FormulaKind::True;
  const FormulaKind neutral = conj ? FormulaKind::True : FormulaKind::False;

  std::vector<Formula> flat;
  flat.reserve(fs.size());
  for (auto& f : fs) {
    if (f.kind() == absorbing) return f;
    if (f.kind() == neutral) continue;
    if (f.kind() == self) {
      for (const auto& c : f.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(f));
    }
  }

  // Bound merging on inequalities sharing a homogeneous part.
  std::unordered_map<Term, BoundEntry> bounds;
  std::vector<Formula> rest;
  rest.reserve(flat.size());
  for (auto& f : flat) {
    if (f.isAtom() && f.atomValue().isLess()) {
      const Term& t = f.atomValue().term;
      Term h = t.homogeneous();
      auto it = bounds.find(h);
      if (it == bounds.end()) {
        bounds.emplace(std::move(h), BoundEntry{t.constant(), f});
      } else {
        bool stronger = conj ? t.constant() > it->second.constant : t.constant() < it->second.constant;
        if (stronger) it->second = BoundEntry{t.constant(), f};
      }
    } else {
      rest.push_back(std::move(f));
    }
  }
  for (const auto& [h, e] : bounds) {
    auto it = bounds.find(-h);
    if (it == bounds.end()) continue;
    Integer s = e.constant + it->second.constant;
    // h + c1 < 0 and -h + c2 < 0 are jointly unsatisfiable iff c1 + c2 >= -1,
    // and h + c1 < 0 or -h + c2 < 0 is valid iff c1 + c2 <= -1.
    if (conj && s >= -1) return Formula::bottom();
    if (!conj && s <= -1) return Formula::top();
  }
  for (auto& [h, e] : bounds) rest.push_back(std::move(e.atom));

  std::sort(rest.begin(), rest.end(), FormulaLess{});
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());

  if (rest.size() > 1) {
    std::unordered_set<Formula> present(rest.begin(), rest.end());
    for (const auto& f : rest)
      if (f.kind() == FormulaKind::Not && present.count(f.child()))
        return conj ? Formula::bottom() : Formula::top();
  }

  if (rest.empty()) return conj ? Formula::top() : Formula::bottom();
  if (rest.size() == 1) return rest.front();
  return conj ? Formula::andOf(std::move(rest)) : Formula::orOf(std::move(rest));
}

}  // namespace

Formula land(std::vector<Formula> fs) { return combine(std::move(fs), true); }
Formula land(Formula a, Formula b) { return land(std::vector<Formula>{std::move(a), std::move(b)}); }
Formula lor(std::vector<Formula> fs) { return combine(std::move(fs), false); }
Formula lor(Formula a, Formula b) { return lor(std::vector<Formula>{std::move(a), std::move(b)}); }
Formula limplies(Formula a, Formula b) { return lor(lnot(std::move(a)), std::move(b)); }

// Miniscoping: an existential distributes over a disjunction and leaves
// conjuncts without v outside; dually for the universal.
Formula quantify(Quantifier q, Variable v, Formula body) {
  if (!occursFree(body, v)) return body;
  const FormulaKind over = q == Quantifier::Exists ? FormulaKind::Or : FormulaKind::And;
  const FormulaKind across = q == Quantifier::Exists ? FormulaKind::And : FormulaKind::Or;
  if (body.kind() == over) {
    std::vector<Formula> cs;
    for (const auto& c : body.children()) cs.push_back(quantify(q, v, c));
    return over == FormulaKind::Or ? lor(std::move(cs)) : land(std::move(cs));
  }
  if (body.kind() == across) {
    std::vector<Formula> with, without;
    for (const auto& c : body.children()) (occursFree(c, v) ? with : without).push_back(c);
    if (!without.empty()) {
      Formula inner = across == FormulaKind::And ? land(std::move(with)) : lor(std::move(with));
      without.push_back(Formula::quantified(q, v, std::move(inner)));
      return across == FormulaKind::And ? land(std::move(without)) : lor(std::move(without));
    }
  }
  return Formula::quantified(q, v, std::move(body));
}

Formula mapAtoms(const Formula& f, const AtomRewrite& fn) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Atom: {
      if (auto r = fn(f.atomValue())) return *r;
      return normalizeAtom(f.atomValue());
    }
    case FormulaKind::Not:
      return lnot(mapAtoms(f.child(), fn));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const auto& c : f.children()) cs.push_back(mapAtoms(c, fn));
      return f.kind() == FormulaKind::And ? land(std::move(cs)) : lor(std::move(cs));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return quantify(f.quantifier(), f.boundVar(), mapAtoms(f.child(), fn));
  }
  return f;
}

Formula normalize(const Formula& f) {
  return mapAtoms(f, [](const Atom&) { return std::optional<Formula>(); });
}

Formula substitute(const Formula& f, const Monomial& target, const Term& replacement) {
  if (target.kind == MonoKind::Linear) {
    Occurrence occ = occurrence(f, target.var);
    if (occ.abs || occ.power)
      throw ContractError("substituting variable " + target.var.name() +
                          " that does not occur only linearly");
  }
  return mapAtoms(f, [&](const Atom& a) -> std::optional<Formula> {
    if (!a.term.contains(target)) return std::nullopt;
    Atom b = a;
    b.term = a.term.replace(target, replacement);
    return normalizeAtom(b);
  });
}

Atom scaledSubstituteAtom(const Atom& a, const Monomial& t1, const Term& t2, const Integer& n) {
  Integer c = a.term.coeff(t1);
  if (sgn(c) == 0) return a;
  if (a.isPred() && n != 1) throw ContractError("scaled substitution into a power predicate");
  Term t = t2 * c + a.term.without(t1) * n;
  if (a.isLess()) return Atom::less(std::move(t));
  if (a.isPred()) return Atom::pred(std::move(t));
  return Atom::div(a.modulus * n, std::move(t));
}

Formula scaledSubstitute(const Formula& f, const Monomial& t1, const Term& t2, const Integer& n) {
  if (sgn(n) <= 0) throw ContractError("scaled substitution needs a positive scale");
  return mapAtoms(f, [&](const Atom& a) -> std::optional<Formula> {
    if (!a.term.contains(t1)) return std::nullopt;
    return normalizeAtom(scaledSubstituteAtom(a, t1, t2, n));
  });
}

Formula renameVariable(const Formula& f, Variable from, Variable to) {
  if (f.isQuantifier()) {
    Variable v = f.boundVar() == from ? to : f.boundVar();
    return Formula::quantified(f.quantifier(), v, renameVariable(f.child(), from, to));
  }
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atomValue();
      if (!a.term.mentions(from)) return f;
      Term t(a.term.constant());
      for (const auto& [m, c] : a.term.entries())
        t += Term::mono(m.var == from ? Monomial{to, m.kind} : m, c);
      Atom b = a;
      b.term = std::move(t);
      return normalizeAtom(b);
    }
    case FormulaKind::Not:
      return lnot(renameVariable(f.child(), from, to));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(renameVariable(c, from, to));
      return f.kind() == FormulaKind::And ? land(std::move(cs)) : lor(std::move(cs));
    }
    default:
      return f;
  }
}

}  // namespace expq
