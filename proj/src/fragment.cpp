#include "expq/fragment.hpp"

#include <unordered_map>
#include <unordered_set>

#include "expq/analysis.hpp"

namespace expq {

bool atomInPC(const Atom& a) {
  if (a.isPred()) return false;
  const Term& t = a.term;
  if (t.isConstant()) return true;
  for (const auto& [m, c] : t.entries())
    if (m.kind != MonoKind::Power) return false;
  if (a.isDiv()) return t.size() == 1 && t.entries().front().second == 1;
  if (t.size() == 1) return true;
  return t.size() == 2 && sgn(t.constant()) == 0;
}

bool divIsSimple(const Atom& a) {
  return a.isDiv() && a.term.size() == 1 && a.term.entries().front().second == 1;
}

bool atomInOct(const Atom& a) {
  if (a.isPred()) return false;
  const Term& t = a.term;
  for (const auto& [m, c] : t.entries())
    if (m.kind == MonoKind::Power) return false;
  if (a.isDiv()) return t.isConstant() || divIsSimple(a);
  if (t.size() > 2) return false;
  for (const auto& [m, c] : t.entries())
    if (abs(c) != 1) return false;
  return true;
}

bool formulaInOct(const Formula& f) {
  for (const auto& a : collectAtoms(f))
    if (!atomInOct(a)) return false;
  return true;
}

namespace {

struct SemScan {
  std::unordered_map<Variable, unsigned> kinds;  // bit 0 linear, bit 1 power
  bool ok = true;

  void visit(const Formula& f, std::unordered_set<Variable>& bound) {
    if (!ok) return;
    switch (f.kind()) {
      case FormulaKind::True:
      case FormulaKind::False:
        return;
      case FormulaKind::Atom: {
        const Atom& a = f.atomValue();
        if (a.isPred() || (a.isDiv() && !divIsSimple(a))) {
          ok = false;
          return;
        }
        bool pc = atomInPC(a);
        for (const auto& [m, c] : a.term.entries()) {
          kinds[m.var] |= m.kind == MonoKind::Power ? 2u : 1u;
          if (!pc && bound.count(m.var)) ok = false;
        }
        return;
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        bool inserted = bound.insert(f.boundVar()).second;
        visit(f.child(), bound);
        if (inserted) bound.erase(f.boundVar());
        return;
      }
      default:
        for (const auto& c : f.children()) visit(c, bound);
    }
  }
};

}  // namespace

bool inSem(const Formula& f) {
  SemScan scan;
  std::unordered_set<Variable> bound;
  scan.visit(f, bound);
  if (!scan.ok) return false;
  for (const auto& [v, k] : scan.kinds)
    if (k == 3u) return false;
  return true;
}

bool fragmentCheck(const Formula& f, Fragment frag) {
  return frag == Fragment::QF ? !hasQuantifier(f) : inSem(f);
}

}  // namespace expq
