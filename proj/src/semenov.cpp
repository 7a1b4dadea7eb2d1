#include "expq/semenov.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"
#include "expq/normalize.hpp"
#include "expq/numtheory.hpp"

namespace expq {

std::optional<Variable> SemState::lookup(const Term& sigma) const {
  for (const auto& [s, w] : sigmaRegistry)
    if (s == sigma) return w;
  return std::nullopt;
}

namespace {

struct PairInfo {
  Variable x;
  Term eta;
  Term sigma;
  std::unordered_set<Atom> atoms;  // A
  unsigned long g = 0;
  Integer a;
  std::vector<Variable> others;  // V
  Formula beta;
};

struct XInfo {
  Variable x;
  std::vector<PairInfo> pairs;
  Formula maxGuard;
};

Term powTerm(Variable v, const Integer& c = 1) { return Term::pow(v, c); }

// lambda(sigma) = lambda(-sigma): both signs share one placeholder and one w.
Term canonicalSigma(const Term& sigma) {
  if (!sigma.isConstant() && sgn(sigma.entries().front().second) < 0) return -sigma;
  return sigma;
}

// 2^|x| = 2^j * 2^|v| for powers of two.
Formula powEqualShifted(Variable x, const Integer& scale, Variable v) {
  return land(less(powTerm(x) - powTerm(v, 2 * scale)), less(powTerm(v, scale) - powTerm(x, 2)));
}

Formula rewriteAtoms(const Formula& gamma, const std::unordered_set<Atom>& atoms,
                     const std::function<Formula(const Atom&)>& fn) {
  return mapAtoms(gamma, [&](const Atom& at) -> std::optional<Formula> {
    if (!atoms.count(at)) return std::nullopt;
    return fn(at);
  });
}

class Cover {
 public:
  Cover(const std::vector<Variable>& xs, const Formula& f, Budget* budget)
      : xs_(xs), f_(f), budget_(budget) {}

  std::vector<XInfo> xinfos;
  std::vector<Term> sigmas;  // nonzero canonical sigma in first-appearance order
  std::unordered_map<Term, Variable> placeholder;

  void analyse() {
    std::unordered_set<Variable> block(xs_.begin(), xs_.end());
    std::vector<Atom> atoms = collectAtoms(f_);
    for (Variable x : xs_) {
      XInfo xi{x, {}, Formula::top()};
      std::vector<Formula> guards;
      for (Variable y : xs_)
        if (!(y == x)) guards.push_back(less(powTerm(y) - powTerm(x, 2)));
      xi.maxGuard = land(guards);

      std::map<std::pair<Term, Term>, std::size_t, PairKeyLess> index;
      for (const auto& at : atoms) {
        if (!at.isLess() || !at.term.contains(Monomial::power(x)) || atomInPC(at)) continue;
        Term eta;
        Term sigma;
        for (const auto& [m, c] : at.term.entries())
          (block.count(m.var) ? eta : sigma) += Term::mono(m, c);
        auto key = std::make_pair(eta, sigma);
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, xi.pairs.size()).first;
          xi.pairs.push_back(PairInfo{x, eta, sigma, {}, 0, 0, {}, Formula::top()});
        }
        xi.pairs[it->second].atoms.insert(at);
      }
      for (auto& p : xi.pairs) finishPair(p);
      xinfos.push_back(std::move(xi));
    }
  }

  // Generates the guarded members of Gamma; `leaf` returns false to stop.
  bool generate(const std::function<bool(const Formula&)>& leaf) {
    for (const auto& xi : xinfos) {
      if (!expand(xi, 0, f_, leaf)) return false;
    }
    return true;
  }

  Term lambdaOf(const Term& sigma) const {
    if (sigma.isZero()) return Term(0);
    return Term::var(placeholder.at(canonicalSigma(sigma)));
  }

 private:
  struct PairKeyLess {
    bool operator()(const std::pair<Term, Term>& p, const std::pair<Term, Term>& q) const {
      if (auto c = compare(p.first, q.first); c != 0) return c < 0;
      return compare(p.second, q.second) < 0;
    }
  };

  const std::vector<Variable>& xs_;
  Formula f_;
  Budget* budget_;

  void finishPair(PairInfo& p) {
    Integer cmax = 0;
    for (const auto& at : p.atoms) {
      Integer c = abs(at.term.constant());
      if (c > cmax) cmax = c;
    }
    Integer lam = lambda(p.eta.normOne() + cmax);
    Integer twoG = 128 * lam * lam;
    p.g = static_cast<unsigned long>(log2Exact(twoG));
    p.a = p.eta.coeff(Monomial::power(p.x));
    for (Variable v : p.eta.variables())
      if (!(v == p.x)) p.others.push_back(v);
    std::vector<Formula> beta{less(Term(twoG) - powTerm(p.x))};
    for (Variable u : p.others) beta.push_back(less(powTerm(u, twoG) - powTerm(p.x)));
    p.beta = land(beta);
    const Term key = canonicalSigma(p.sigma);
    if (!key.isZero() && !placeholder.count(key)) {
      placeholder.emplace(key, Variable::fresh("lambda"));
      sigmas.push_back(key);
    }
  }

  bool expand(const XInfo& xi, std::size_t idx, const Formula& gamma,
              const std::function<bool(const Formula&)>& leaf) {
    if (gamma.isFalse()) return true;
    if (budget_) budget_->checkTime();
    if (idx == xi.pairs.size()) {
      Formula g = land(xi.maxGuard, gamma);
      if (g.isFalse()) return true;
      return leaf(g);
    }
    const PairInfo& p = xi.pairs[idx];
    const Monomial px = Monomial::power(p.x);
    auto next = [&](const Formula& caseGuard, const Formula& body) {
      if (caseGuard.isFalse()) return true;
      return expand(xi, idx + 1, land(caseGuard, body), leaf);
    };
    auto substituted = [&](const Term& replacement) {
      return rewriteAtoms(gamma, p.atoms, [&](const Atom& at) {
        Atom b = at;
        b.term = at.term.replace(px, replacement);
        return normalizeAtom(b);
      });
    };
    auto scaled = [&](const Term& numerator, const Integer& n) {
      return rewriteAtoms(gamma, p.atoms,
                          [&](const Atom& at) { return normalizeAtom(scaledSubstituteAtom(at, px, numerator, n)); });
    };
    auto constant = [&](bool v) {
      return rewriteAtoms(gamma, p.atoms, [&](const Atom&) { return v ? Formula::top() : Formula::bottom(); });
    };

    // 1: 2^|x| = 2^j
    for (unsigned long j = 0; j <= p.g; ++j) {
      Integer pj = pow2(j);
      if (!next(equal(powTerm(p.x), Term(pj)), substituted(Term(pj)))) return false;
    }
    // 2: 2^|x| > 2^g and 2^|x| = 2^j * 2^|v|
    const Formula large = less(Term(pow2(p.g)) - powTerm(p.x));
    for (Variable v : p.others) {
      for (unsigned long j = 0; j <= p.g; ++j) {
        Integer pj = pow2(j);
        if (!next(land(large, powEqualShifted(p.x, pj, v)), substituted(powTerm(v, pj)))) return false;
      }
    }
    const Integer la = lambda(p.a);
    const Term lx = powTerm(p.x, la);
    const Term ls = lambdaOf(p.sigma);
    // 3, 4: lambda(a) 2^|x| < lambda(sigma)
    const Formula below = land(p.beta, less(lx - ls));
    if (!next(land(below, less(p.sigma)), constant(true))) return false;
    if (!next(land(below, less(-p.sigma - Term(1))), constant(false))) return false;
    // 5: lambda(a) 2^|x| = lambda(sigma)
    if (!next(land({p.beta, less(lx - ls * 2), less(ls - lx * 2)}), scaled(ls, la))) return false;
    // 6: lambda(a) 2^|x| = 2 lambda(sigma)
    if (!next(land({p.beta, less(lx - ls * 4), less(ls * 2 - lx * 2)}), scaled(ls * 2, la))) return false;
    // 7, 8: lambda(a) 2^|x| > 2 lambda(sigma); the sign of a decides A
    const Formula above = land(p.beta, less(ls * 2 - lx));
    if (sgn(p.a) < 0) {
      if (!next(above, constant(true))) return false;
    } else {
      if (!next(above, constant(false))) return false;
    }
    return true;
  }
};

// 2^|w| <= |sigma| < 2 * 2^|w|
Formula lambdaGuard(const Term& sigma, Variable w) {
  const Term pw = Term::pow(w);
  return land({lor(less(pw - sigma - Term(1)), less(pw + sigma - Term(1))), less(sigma - pw * 2),
               less(-sigma - pw * 2)});
}

}  // namespace

void semCover(const std::vector<Variable>& xs, const Formula& f, SemState& state, const Emit& emit, Budget* budget,
              SemCoverInfo* info) {
  if (xs.empty()) throw ContractError("semCover: empty variable block");
  for (Variable x : xs)
    if (!occurrence(f, x).power) throw ContractError("semCover: 2^|" + x.name() + "| does not occur");

  Cover cover(xs, f, budget);
  cover.analyse();
  if (info)
    for (const auto& xi : cover.xinfos) info->inequalityPairs += xi.pairs.size();

  auto emitCounted = [&](const Formula& g) {
    if (g.isFalse()) return true;
    if (budget) budget->charge();
    if (info) ++info->outputs;
    return emit(g);
  };

  if (cover.sigmas.empty()) {
    cover.generate([&](const Formula& g) {
      if (info) ++info->gammaCount;
      return emitCounted(g);
    });
    return;
  }

  std::vector<Formula> gamma;
  cover.generate([&](const Formula& g) {
    gamma.push_back(g);
    if (budget) budget->charge();
    return true;
  });
  if (info) info->gammaCount = gamma.size();

  // Sigma: the sigma whose lambda survived into some member of Gamma.
  std::vector<Term> sigmas;
  for (const auto& s : cover.sigmas) {
    Variable l = cover.placeholder.at(s);
    for (const auto& g : gamma) {
      if (occursFree(g, l)) {
        sigmas.push_back(s);
        break;
      }
    }
  }
  if (info) info->sigmaCount = sigmas.size();

  std::vector<Variable> ws;
  for (const auto& s : sigmas) {
    auto w = state.lookup(s);
    if (!w) {
      w = Variable::fresh("w_" + std::to_string(s.hash() & 0xFFFFFFu));
      state.sigmaRegistry.emplace_back(s, *w);
      state.piPrime.push_back(*w);
      if (info) ++info->quantifiersAdded;
    }
    ws.push_back(*w);
  }

  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    Formula m = land(lor(less(sigmas[i]), less(-sigmas[i])), lnot(lambdaGuard(sigmas[i], ws[i])));
    if (!emitCounted(m)) return;
  }
  if (budget) budget->reserve(Integer(gamma.size()) << static_cast<unsigned long>(sigmas.size()), "semCover");

  // Subsets of Sigma in increasing cardinality.
  const std::size_t n = sigmas.size();
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<bool> chosen(n, false);
    std::fill(chosen.begin(), chosen.begin() + static_cast<long>(k), true);
    do {
      std::vector<Formula> guards;
      for (std::size_t i = 0; i < n; ++i)
        guards.push_back(chosen[i] ? lambdaGuard(sigmas[i], ws[i]) : equal(sigmas[i], Term(0)));
      Formula guard = land(guards);
      if (guard.isFalse()) continue;
      for (const auto& g : gamma) {
        Formula body = g;
        for (std::size_t i = 0; i < n; ++i) {
          Variable l = cover.placeholder.at(sigmas[i]);
          body = substitute(body, Monomial::linear(l), chosen[i] ? Term::pow(ws[i]) : Term(0));
        }
        if (!emitCounted(land(guard, body))) return;
      }
    } while (std::prev_permutation(chosen.begin(), chosen.end()));
  }
}

std::vector<Formula> semCover(const std::vector<Variable>& xs, const Formula& f, SemState& state, Budget* budget,
                              SemCoverInfo* info) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  semCover(xs, f, state, [&](const Formula& g) {
    if (seen.insert(g).second) out.push_back(g);
    return true;
  }, budget, info);
  return out;
}

bool hasNiceVariable(const std::vector<Variable>& xs, const Formula& f) {
  for (Variable x : xs)
    if (!occurrence(f, x).powerOutsidePC) return true;
  return false;
}

// ---------------------------------------------------------------- linearise

Formula linearisePCAtom(const Atom& at, Variable x) {
  const Monomial px = Monomial::power(x);
  const Term ax = Term::abs(x);
  if (at.isDiv()) {
    Integer r = mod(-at.term.constant(), at.modulus);
    CongruenceSolution sol = solvePowCongruence(at.modulus, r);
    if (std::holds_alternative<CongruenceUnsat>(sol)) return Formula::bottom();
    if (const auto* one = std::get_if<CongruenceSingle>(&sol)) return equal(ax, Term(one->s));
    const auto& pr = std::get<CongruenceProgression>(sol);
    // Solutions are s, s + t, ...; |x| >= s only matters when s - t >= 0 is in the class.
    Formula cong = divides(pr.t, ax - Term(pr.s));
    if (pr.s < pr.t) return cong;
    return land(cong, lessEq(Term(pr.s), ax));
  }
  const Integer a = at.term.coeff(px);
  if (at.term.size() == 1) {
    const Integer b = -at.term.constant();  // a 2^|x| < b
    if (sgn(a) > 0 && sgn(b) > 0) return lessThan(ax, Term(ceilLog2Ratio(b, a)));
    if (sgn(a) < 0 && sgn(b) < 0) return lessThan(Term(floorLog2Ratio(-b, -a)), ax);
    throw ContractError("linearise: sign-trivial power comparison was not normalized");
  }
  // a 2^|x| < b 2^|y|
  Variable y;
  Integer b;
  for (const auto& [m, c] : at.term.entries())
    if (!(m == px)) {
      y = m.var;
      b = -c;
    }
  const Term ay = Term::abs(y);
  if (sgn(a) > 0 && sgn(b) > 0) return lessThan(ax, ay + Term(ceilLog2Ratio(b, a)));
  if (sgn(a) < 0 && sgn(b) < 0) return lessThan(ay + Term(floorLog2Ratio(-b, -a)), ax);
  throw ContractError("linearise: sign-trivial power comparison was not normalized");
}

Formula linearise(const std::vector<Variable>& xs, const Formula& f, Fragment frag) {
  if (frag == Fragment::Sem) return f;
  std::vector<Variable> nice;
  for (Variable x : xs) {
    Occurrence occ = occurrence(f, x);
    if (occ.power && !occ.powerOutsidePC) nice.push_back(x);
  }
  if (nice.empty()) return f;
  return mapAtoms(f, [&](const Atom& at) -> std::optional<Formula> {
    for (Variable x : nice)
      if (at.term.contains(Monomial::power(x))) return linearisePCAtom(at, x);
    return std::nullopt;
  });
}

std::vector<WorkPair> linearise(std::vector<WorkPair> pairs, Fragment frag) {
  if (frag == Fragment::Sem) return pairs;
  for (auto& p : pairs) p.body = linearise(p.vars, p.body, frag);
  return pairs;
}

}  // namespace expq
