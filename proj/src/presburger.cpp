#include "expq/presburger.hpp"

#include <algorithm>
#include <unordered_set>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"
#include "expq/normalize.hpp"

namespace expq {

void CoverSet::add(const Formula& f) {
  if (index.insert(f).second) members.push_back(f);
}

Formula CoverSet::disjunction() const { return lor(members); }

// ---------------------------------------------------------------- simplify

void simplify(const Formula& f, Fragment, const Emit& emit, Budget* budget, SimplifyInfo* info) {
  std::vector<Atom> nonSimple;
  for (const auto& a : collectAtoms(f))
    if (a.isDiv() && !divIsSimple(a)) nonSimple.push_back(a);
  if (nonSimple.empty()) {
    if (info) info->residueMaps = 1;
    if (!f.isFalse()) {
      if (budget) budget->charge();
      emit(f);
    }
    return;
  }

  Integer d = 1;
  std::vector<Monomial> monos;
  for (const auto& a : nonSimple) {
    d = lcm(d, a.modulus);
    for (const auto& [m, c] : a.term.entries()) monos.push_back(m);
  }
  std::sort(monos.begin(), monos.end());
  monos.erase(std::unique(monos.begin(), monos.end()), monos.end());
  if (info) {
    info->modulus = d;
    info->residueTerms = monos.size();
  }
  Integer total;
  mpz_pow_ui(total.get_mpz_t(), d.get_mpz_t(), monos.size());
  if (budget) budget->reserve(total, "simplify");

  std::unordered_set<Atom> nonSimpleSet(nonSimple.begin(), nonSimple.end());
  std::vector<Integer> residue(monos.size(), 0);
  for (;;) {
    if (info) ++info->residueMaps;
    std::vector<Formula> parts;
    parts.reserve(monos.size() + 1);
    for (std::size_t i = 0; i < monos.size(); ++i)
      parts.push_back(divides(d, Term::mono(monos[i]) - Term(residue[i])));
    Formula guard = land(parts);
    if (!guard.isFalse()) {
      Formula body = mapAtoms(f, [&](const Atom& a) -> std::optional<Formula> {
        if (!nonSimpleSet.count(a)) return std::nullopt;
        Integer v = a.term.constant();
        for (const auto& [m, c] : a.term.entries()) {
          auto pos = std::lower_bound(monos.begin(), monos.end(), m) - monos.begin();
          v += c * residue[pos];
        }
        return divides(a.modulus, Term(v));
      });
      Formula member = land(guard, body);
      if (!member.isFalse()) {
        if (budget) budget->charge();
        if (!emit(member)) return;
      }
    }
    std::size_t i = 0;
    while (i < residue.size()) {
      ++residue[i];
      if (residue[i] < d) break;
      residue[i] = 0;
      ++i;
    }
    if (i == residue.size()) return;
  }
}

CoverSet simplify(const Formula& f, Fragment frag, Budget* budget, SimplifyInfo* info) {
  CoverSet out;
  simplify(f, frag, [&](const Formula& m) { out.add(m); return true; }, budget, info);
  return out;
}

// ---------------------------------------------------------------- presQE

std::vector<SubstitutionCandidate> substitutionCandidates(const Formula& f, Variable x) {
  const Monomial mx = Monomial::linear(x);
  std::vector<SubstitutionCandidate> out;
  for (const auto& a : collectAtoms(f)) {
    if (!a.isLess()) continue;
    Integer b = a.term.coeff(mx);
    if (sgn(b) == 0) continue;
    Term rest = a.term.homogeneous().without(mx);
    SubstitutionCandidate c = sgn(b) > 0 ? SubstitutionCandidate{b, -rest} : SubstitutionCandidate{-b, rest};
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const SubstitutionCandidate& p, const SubstitutionCandidate& q) {
    if (int d = cmp(p.a, q.a); d != 0) return d < 0;
    return compare(p.t, q.t) < 0;
  });
  return out;
}

namespace {

Integer lintermsNorm(const Formula& f) {
  Integer c = 2;
  for (const auto& a : collectAtoms(f)) {
    if (!a.isLess()) continue;
    Integer n = a.term.normInf();
    if (n > c) c = n;
  }
  return c;
}

Integer divisibilityLcm(const Formula& f) {
  Integer m = 1;
  for (const auto& a : collectAtoms(f))
    if (a.isDiv()) m = lcm(m, a.modulus);
  return m;
}

// Weispfenning-style elimination of a purely linear x. Returns false when
// the consumer asked to stop.
bool eliminateLinear(Variable x, const Formula& f, const Emit& emit, Budget* budget, PresQEInfo* info,
                     bool fullRange) {
  const Monomial mx = Monomial::linear(x);
  if (info) info->coreInputs.push_back(f);
  std::vector<SubstitutionCandidate> cands = substitutionCandidates(f, x);
  Integer m = divisibilityLcm(f);
  bool keepGoing = true;
  auto forward = [&](const Formula& g) {
    simplify(g, Fragment::QF, [&](const Formula& member) {
      if (info) ++info->members;
      keepGoing = emit(member);
      return keepGoing;
    }, budget);
    return keepGoing;
  };

  if (cands.empty()) {
    // x occurs only in divisibilities: its residue modulo m is all that matters.
    if (budget) budget->reserve(m, "presQE residue enumeration");
    for (Integer k = 0; k < m; ++k)
      if (!forward(substitute(f, mx, Term(k)))) return false;
    return true;
  }

  Integer g = 1;
  for (const auto& c : cands) g *= c.a;
  Integer c = lintermsNorm(f);
  if (info) {
    info->candidates = cands;
    info->g = g;
  }

  // k-intervals per candidate: the whole [-r, r], or windows of half-width
  // a(m+1) around each inequality's threshold, clipped to [-r, r].
  std::vector<std::vector<std::pair<Integer, Integer>>> ranges(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    Integer r = cands[i].a * (2 * c + g * m);
    if (info && r > info->maxR) info->maxR = r;
    if (fullRange) ranges[i].emplace_back(-r, r);
  }
  if (!fullRange) {
    for (const auto& a : collectAtoms(f)) {
      if (!a.isLess()) continue;
      Integer b = a.term.coeff(mx);
      if (sgn(b) == 0) continue;
      Term rest = a.term.homogeneous().without(mx);
      SubstitutionCandidate cand = sgn(b) > 0 ? SubstitutionCandidate{b, -rest} : SubstitutionCandidate{-b, rest};
      std::size_t i = static_cast<std::size_t>(std::find(cands.begin(), cands.end(), cand) - cands.begin());
      Integer center = sgn(b) > 0 ? Integer(-a.term.constant()) : a.term.constant();
      Integer half = cand.a * (m + 1);
      Integer r = cand.a * (2 * c + g * m);
      Integer lo = center - half;
      Integer hi = center + half;
      ranges[i].emplace_back(lo < -r ? Integer(-r) : lo, hi > r ? r : hi);
    }
    for (auto& rs : ranges) {
      std::sort(rs.begin(), rs.end());
      std::vector<std::pair<Integer, Integer>> merged;
      for (const auto& iv : rs) {
        if (!merged.empty() && iv.first <= merged.back().second + 1)
          merged.back().second = std::max(merged.back().second, iv.second);
        else
          merged.push_back(iv);
      }
      rs = std::move(merged);
    }
  }
  Integer total = 0;
  for (const auto& rs : ranges)
    for (const auto& [lo, hi] : rs) total += hi - lo + 1;
  if (budget) budget->reserve(total, "presQE");

  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& cand = cands[i];
    for (const auto& [lo, hi] : ranges[i]) {
      for (Integer k = lo; k <= hi; ++k) {
        Term shifted = cand.t + Term(k);
        Formula gamma = land(scaledSubstitute(f, mx, shifted, cand.a), divides(cand.a, shifted));
        if (gamma.isFalse()) continue;
        if (!forward(gamma)) return false;
      }
    }
  }
  return true;
}

}  // namespace

void presQE(Variable x, const std::vector<Variable>& xs, const Formula& f, const Emit& emit, Budget* budget,
            PresQEInfo* info, PresQERange range) {
  const bool fullRange = range == PresQERange::Full;
  if (std::find(xs.begin(), xs.end(), x) == xs.end())
    throw ContractError("presQE: variable " + x.name() + " not in the block");
  Occurrence occ = occurrence(f, x);
  if (occ.power) throw ContractError("presQE: variable " + x.name() + " occurs in a power");
  if (!occ.abs) {
    eliminateLinear(x, f, emit, budget, info, fullRange);
    return;
  }
  // |x| is split on the sign of x before elimination.
  const Term tx = Term::var(x);
  std::vector<Formula> branches{
      land(less(-tx - Term(1)), substitute(f, Monomial::abs(x), tx)),
      land(less(tx), substitute(f, Monomial::abs(x), -tx)),
  };
  for (const auto& b : branches) {
    bool stop = false;
    simplify(b, Fragment::QF, [&](const Formula& member) {
      if (!eliminateLinear(x, member, emit, budget, info, fullRange)) stop = true;
      return !stop;
    });
    if (stop) return;
  }
}

CoverSet presQE(Variable x, const std::vector<Variable>& xs, const Formula& f, Budget* budget, PresQEInfo* info,
                PresQERange range) {
  CoverSet out;
  presQE(x, xs, f, [&](const Formula& m) { out.add(m); return true; }, budget, info, range);
  return out;
}

}  // namespace expq
