#include "expq/analysis.hpp"

#include <algorithm>
#include <unordered_set>

#include "expq/fragment.hpp"

namespace expq {

namespace {

void collectFree(const Formula& f, std::vector<Variable>& bound, std::unordered_set<Variable>& seen,
                 std::vector<Variable>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      for (const auto& [m, c] : f.atomValue().term.entries()) {
        if (std::find(bound.begin(), bound.end(), m.var) != bound.end()) continue;
        if (seen.insert(m.var).second) out.push_back(m.var);
      }
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(f.boundVar());
      collectFree(f.child(), bound, seen, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : f.children()) collectFree(c, bound, seen, out);
  }
}

bool freeIn(const Formula& f, Variable v) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return f.atomValue().term.mentions(v);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return !(f.boundVar() == v) && freeIn(f.child(), v);
    default:
      for (const auto& c : f.children())
        if (freeIn(c, v)) return true;
      return false;
  }
}

void gatherAtoms(const Formula& f, std::unordered_set<Atom>& seen, std::vector<Atom>& out) {
  if (f.isAtom()) {
    if (seen.insert(f.atomValue()).second) out.push_back(f.atomValue());
    return;
  }
  for (const auto& c : f.children()) gatherAtoms(c, seen, out);
}

void scanOccurrence(const Formula& f, Variable v, Occurrence& occ) {
  if (f.isAtom()) {
    const Atom& a = f.atomValue();
    bool pc = false;
    bool pcKnown = false;
    for (const auto& [m, c] : a.term.entries()) {
      if (!(m.var == v)) continue;
      switch (m.kind) {
        case MonoKind::Linear: occ.linear = true; break;
        case MonoKind::Abs: occ.abs = true; break;
        case MonoKind::Power:
          occ.power = true;
          if (!pcKnown) {
            pc = atomInPC(a);
            pcKnown = true;
          }
          if (!pc) occ.powerOutsidePC = true;
          break;
      }
    }
    return;
  }
  for (const auto& c : f.children()) scanOccurrence(c, v, occ);
}

}  // namespace

std::vector<Variable> freeVariables(const Formula& f) {
  std::vector<Variable> bound;
  std::unordered_set<Variable> seen;
  std::vector<Variable> out;
  collectFree(f, bound, seen, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool occursFree(const Formula& f, Variable v) { return freeIn(f, v); }

bool hasQuantifier(const Formula& f) {
  if (f.isQuantifier()) return true;
  for (const auto& c : f.children())
    if (hasQuantifier(c)) return true;
  return false;
}

bool isGround(const Formula& f) {
  if (f.isAtom()) return f.atomValue().term.isConstant();
  if (f.isQuantifier()) return false;
  for (const auto& c : f.children())
    if (!isGround(c)) return false;
  return true;
}

std::vector<Atom> collectAtoms(const Formula& f) {
  std::unordered_set<Atom> seen;
  std::vector<Atom> out;
  gatherAtoms(f, seen, out);
  return out;
}

Occurrence occurrence(const Formula& f, Variable v) {
  Occurrence occ;
  scanOccurrence(f, v, occ);
  return occ;
}

}  // namespace expq
