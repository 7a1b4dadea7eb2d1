#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "expq/formula.hpp"

namespace expq {

// Normalizing constructors. Every formula built through these is already in
// normal form, so normalize() is a rebuild through them.
Formula less(Term t);  // t < 0
Formula lessThan(const Term& a, const Term& b);
Formula lessEq(const Term& a, const Term& b);
Formula equal(const Term& a, const Term& b);
Formula notEqual(const Term& a, const Term& b);
Formula divides(Integer q, Term t);
Formula normalizeAtom(const Atom& a);

Formula lnot(Formula f);
Formula land(std::vector<Formula> fs);
Formula land(Formula a, Formula b);
Formula lor(std::vector<Formula> fs);
Formula lor(Formula a, Formula b);
Formula limplies(Formula a, Formula b);
Formula quantify(Quantifier q, Variable v, Formula body);

Formula normalize(const Formula& f);

// Rebuilds f, replacing each atom for which `fn` returns a formula.
using AtomRewrite = std::function<std::optional<Formula>(const Atom&)>;
Formula mapAtoms(const Formula& f, const AtomRewrite& fn);

// f[replacement / target]. A linear target requires the variable to occur
// only linearly (no |x| and no 2^|x|).
Formula substitute(const Formula& f, const Monomial& target, const Term& replacement);

// Replaces target by t2/n: a*t1 + t' < 0 becomes a*t2 + n*t' < 0 and
// q | a*t1 + t' becomes n*q | a*t2 + n*t'. Atoms without t1 are unchanged.
Formula scaledSubstitute(const Formula& f, const Monomial& t1, const Term& t2, const Integer& n);
Atom scaledSubstituteAtom(const Atom& a, const Monomial& t1, const Term& t2, const Integer& n);

// Renames every occurrence (linear, absolute, power, binder) of `from`.
Formula renameVariable(const Formula& f, Variable from, Variable to);

}  // namespace expq
