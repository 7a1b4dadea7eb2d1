#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "expq/analysis.hpp"
#include "expq/normalize.hpp"
#include "expq/parser.hpp"

namespace expq::test {

Formula P(const std::string& text) { return parse(text, Dialect::PresExp); }
Formula PP(const std::string& text) { return parse(text, Dialect::PresPower); }
Variable V(const std::string& name) { return Variable::intern(name); }

namespace {

Integer coeff(Rng& rng, long maxAbs) {
  long c = 0;
  while (c == 0) c = rng.range(-maxAbs, maxAbs);
  return Integer(c);
}

Formula mkAnd(std::vector<Formula> fs, bool raw) { return raw ? Formula::andOf(std::move(fs)) : land(std::move(fs)); }
Formula mkOr(std::vector<Formula> fs, bool raw) { return raw ? Formula::orOf(std::move(fs)) : lor(std::move(fs)); }
Formula mkNot(Formula f, bool raw) { return raw ? Formula::notOf(std::move(f)) : lnot(std::move(f)); }

template <class AtomGen>
Formula randomBool(Rng& rng, int depth, bool raw, AtomGen&& atom) {
  if (depth <= 0 || rng.coin(0.3)) return atom();
  switch (rng.range(0, 2)) {
    case 0: return mkNot(randomBool(rng, depth - 1, raw, atom), raw);
    case 1: {
      std::vector<Formula> cs;
      for (long i = rng.range(2, 3); i > 0; --i) cs.push_back(randomBool(rng, depth - 1, raw, atom));
      return mkAnd(std::move(cs), raw);
    }
    default: {
      std::vector<Formula> cs;
      for (long i = rng.range(2, 3); i > 0; --i) cs.push_back(randomBool(rng, depth - 1, raw, atom));
      return mkOr(std::move(cs), raw);
    }
  }
}

}  // namespace

Term randomTerm(Rng& rng, const GenSpec& s) {
  std::vector<Monomial> monos;
  for (Variable v : s.linear) monos.push_back(Monomial::linear(v));
  for (Variable v : s.power) monos.push_back(Monomial::power(v));
  Term t(Integer(rng.range(-s.maxConst, s.maxConst)));
  if (monos.empty()) return t;
  for (long i = rng.range(1, s.maxMonomials); i > 0; --i) t += Term::mono(rng.pick(monos), coeff(rng, s.maxCoeff));
  return t;
}

Formula randomAtom(Rng& rng, const GenSpec& s) {
  if (rng.coin(s.divProb)) {
    Integer q(rng.range(2, s.maxModulus));
    Term t;
    if (s.allowNonSimpleDiv) {
      t = randomTerm(rng, s);
    } else {
      std::vector<Monomial> monos;
      for (Variable v : s.linear) monos.push_back(Monomial::linear(v));
      for (Variable v : s.power) monos.push_back(Monomial::power(v));
      if (!monos.empty()) t = Term::mono(rng.pick(monos)) + Term(Integer(rng.range(0, q.get_si() - 1)));
    }
    return s.raw ? Formula::atom(Atom::div(q, t)) : divides(q, t);
  }
  Term t = randomTerm(rng, s);
  return s.raw ? Formula::atom(Atom::less(t)) : less(t);
}

Formula randomQF(Rng& rng, const GenSpec& s) {
  return randomBool(rng, s.depth, s.raw, [&] { return randomAtom(rng, s); });
}

Formula randomSemMatrix(Rng& rng, const std::vector<Variable>& power, const std::vector<Variable>& linear,
                        int depth) {
  auto atom = [&]() -> Formula {
    const long kind = rng.range(0, 5);
    Variable x = rng.pick(power);
    if (kind == 0 && power.size() > 1) {
      Variable y = rng.pick(power);
      return less(Term::pow(x, Integer(rng.range(1, 6))) - Term::pow(y, Integer(rng.range(1, 6))));
    }
    if (kind == 1) return less(Term::pow(x, coeff(rng, 5)) + Term(rng.range(-40, 40)));
    if (kind == 2) {
      long q = rng.range(2, 9);
      return divides(Integer(q), Term::pow(x) - Term(rng.range(0, q - 1)));
    }
    if (kind == 3 && !linear.empty()) {
      long q = rng.range(2, 5);
      return divides(Integer(q), Term::var(rng.pick(linear)) - Term(rng.range(0, q - 1)));
    }
    // Mixed inequality over powers of the block and linear free variables.
    Term t(Integer(rng.range(-30, 30)));
    for (long i = rng.range(1, 2); i > 0; --i) t += Term::pow(rng.pick(power), coeff(rng, 5));
    if (!linear.empty())
      for (long i = rng.range(0, 2); i > 0; --i) t += Term::var(rng.pick(linear), coeff(rng, 3));
    return less(t);
  };
  return randomBool(rng, depth, false, atom);
}

Formula randomBoundedPASentence(Rng& rng, int quantifiers, long bound) {
  std::vector<Variable> vars;
  for (int i = 0; i < quantifiers; ++i) vars.push_back(Variable::fresh("pa"));
  GenSpec s;
  s.linear = vars;
  s.maxCoeff = 3;
  s.maxConst = 6;
  s.maxMonomials = 2;
  s.depth = 2;
  s.divProb = 0.25;
  s.maxModulus = 4;
  Formula f = randomQF(rng, s);
  const Integer B(bound);
  for (int i = quantifiers - 1; i >= 0; --i) {
    Variable v = vars[static_cast<std::size_t>(i)];
    Formula inBox = land(lessEq(Term(-B), Term::var(v)), lessEq(Term::var(v), Term(B)));
    if (rng.coin()) f = quantify(Quantifier::Exists, v, land(inBox, f));
    else f = quantify(Quantifier::Forall, v, lor(lnot(inBox), f));
  }
  return f;
}

Formula randomOct(Rng& rng, const std::vector<Variable>& vars, int depth) {
  auto atom = [&]() -> Formula {
    Variable x = rng.pick(vars);
    const long kind = rng.range(0, 3);
    if (kind == 0) {
      long q = rng.range(2, 5);
      return divides(Integer(q), Term::var(x) - Term(rng.range(0, q - 1)));
    }
    Term t = Term::var(x, Integer(rng.coin() ? 1 : -1)) + Term(rng.range(-8, 8));
    if (kind >= 2 && vars.size() > 1) {
      Variable y = rng.pick(vars);
      if (y != x) t += Term::var(y, Integer(rng.coin() ? 1 : -1));
    }
    return less(t);
  };
  return randomBool(rng, depth, false, atom);
}

Formula randomGround(Rng& rng, int depth) {
  auto atom = [&]() -> Formula {
    switch (rng.range(0, 4)) {
      case 0: return Formula::atom(Atom::less(Term(rng.range(-5, 5))));
      case 1: return Formula::atom(Atom::div(Integer(rng.range(1, 6)), Term(rng.range(-20, 20))));
      case 2: return Formula::atom(Atom::pred(Term(rng.range(-4, 70))));
      case 3: return rng.coin() ? Formula::top() : Formula::bottom();
      default: return Formula::atom(Atom::less(Term(rng.range(-1000, 1000))));
    }
  };
  return randomBool(rng, depth, true, atom);
}

// ------------------------------------------------------------ naive evaluator

namespace {

Integer naiveTerm(const Term& t, const Assignment& nu) {
  Integer total = t.constant();
  for (const auto& entry : t.entries()) {
    const Monomial& m = entry.first;
    auto it = nu.find(m.var);
    if (it == nu.end()) throw std::runtime_error("naiveEval: unassigned " + m.var.name());
    Integer val = it->second;
    if (m.kind != MonoKind::Linear && val < 0) val = -val;
    if (m.kind == MonoKind::Power) {
      Integer p = 1;
      mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), val.get_ui());
      val = p;
    }
    total += entry.second * val;
  }
  return total;
}

bool naiveAtom(const Atom& a, const Assignment& nu) {
  Integer v = naiveTerm(a.term, nu);
  if (a.kind == AtomKind::Less) return v < 0;
  if (a.kind == AtomKind::Div) return v % a.modulus == 0;
  if (v <= 0) return false;
  Integer p = 1;
  while (p < v) p *= 2;
  return p == v;
}

}  // namespace

bool naiveEval(const Formula& root, const Assignment& nuIn, std::optional<long> bound) {
  // Postorder over the Not/And desugaring: Or(a, b, ...) is Not(And(Not a, Not b, ...)).
  struct Frame {
    Formula f;
    std::size_t next = 0;
    bool acc = true;
  };
  Assignment nu = nuIn;
  std::vector<Frame> stack{{root}};
  bool ret = false;
  bool haveRet = false;
  while (!stack.empty()) {
    Frame& fr = stack.back();
    const Formula f = fr.f;
    switch (f.kind()) {
      case FormulaKind::True: ret = true; haveRet = true; stack.pop_back(); continue;
      case FormulaKind::False: ret = false; haveRet = true; stack.pop_back(); continue;
      case FormulaKind::Atom: ret = naiveAtom(f.atomValue(), nu); haveRet = true; stack.pop_back(); continue;
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        if (!bound) throw std::runtime_error("naiveEval: quantifier without bound");
        const bool ex = f.kind() == FormulaKind::Exists;
        Variable v = f.boundVar();
        auto saved = nu.find(v) == nu.end() ? std::optional<Integer>() : std::optional<Integer>(nu[v]);
        bool r = !ex;
        for (long k = -*bound; k <= *bound; ++k) {
          nu[v] = k;
          if (naiveEval(f.child(), nu, bound) == ex) {
            r = ex;
            break;
          }
        }
        if (saved) nu[v] = *saved; else nu.erase(v);
        ret = r;
        haveRet = true;
        stack.pop_back();
        continue;
      }
      case FormulaKind::Not: {
        if (fr.next == 0) {
          fr.next = 1;
          haveRet = false;
          stack.push_back({f.child()});
          continue;
        }
        ret = !ret;
        stack.pop_back();
        continue;
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        const bool isOr = f.kind() == FormulaKind::Or;
        if (fr.next > 0) {
          bool childVal = isOr ? !ret : ret;  // the Not of each disjunct
          fr.acc = fr.acc && childVal;
        }
        if (fr.next < f.children().size() && fr.acc) {
          Formula c = f.children()[fr.next++];
          stack.push_back({c});
          continue;
        }
        ret = isOr ? !fr.acc : fr.acc;
        haveRet = true;
        stack.pop_back();
        continue;
      }
    }
  }
  (void)haveRet;
  return ret;
}

// ------------------------------------------------------------ presQE oracle

std::optional<std::string> checkPresQECover(Variable x, const Formula& phi, const std::vector<Formula>& cover,
                                            const Assignment& nu) {
  struct Cand {
    Integer a;
    Term t;
  };
  std::vector<Cand> cands;
  Integer c = 2;
  Integer m = 1;
  for (const auto& atom : collectAtoms(phi)) {
    if (atom.kind == AtomKind::Div) {
      m = lcm(m, atom.modulus);
      continue;
    }
    Integer n = 0;
    for (const auto& [mono, k] : atom.term.entries()) n = std::max(n, Integer(abs(k)));
    n = std::max(n, Integer(abs(atom.term.constant())));
    c = std::max(c, n);
    Integer b = atom.term.coeff(Monomial::linear(x));
    if (b == 0) continue;
    Term rest = atom.term.without(Monomial::linear(x)).withConstant(0);
    Cand cand{abs(b), b > 0 ? -rest : rest};
    bool dup = false;
    for (const auto& o : cands) dup = dup || (o.a == cand.a && o.t == cand.t);
    if (!dup) cands.push_back(cand);
  }
  Integer g = 1;
  for (const auto& cd : cands) g *= cd.a;

  Assignment at = nu;
  bool truth = false;
  std::string witness;
  if (cands.empty()) {
    for (Integer k = 0; k < m && !truth; ++k) {
      at[x] = k;
      if (naiveEval(phi, at)) {
        truth = true;
        witness = k.get_str();
      }
    }
  }
  for (const auto& cd : cands) {
    if (truth) break;
    Integer r = cd.a * (2 * c + g * m);
    Integer base = naiveTerm(cd.t, nu);
    for (Integer k = -r; k <= r && !truth; ++k) {
      Integer num = base + k;
      if (num % cd.a != 0) continue;
      at[x] = num / cd.a;
      if (naiveEval(phi, at)) {
        truth = true;
        witness = at[x].get_str();
      }
    }
  }
  bool coverTruth = false;
  for (const auto& f : cover) {
    if (occursFree(f, x)) return "cover member mentions the eliminated variable: " + render(f);
    if (naiveEval(f, nu)) {
      coverTruth = true;
      break;
    }
  }
  if (truth != coverTruth) {
    std::string s = "exists-truth " + std::to_string(truth) + " (witness " + witness + ") vs cover " +
                    std::to_string(coverTruth) + " at " + toJson(nu).dump() + " for " + render(phi);
    return s;
  }
  return std::nullopt;
}

std::optional<std::string> semSplitInstance(Rng& rng) {
  Variable x = Variable::intern("ss_x");
  std::vector<Variable> others{Variable::intern("ss_u"), Variable::intern("ss_v")};
  Integer a = coeff(rng, 9);
  Term eta = Term::pow(x, a);
  if (rng.coin()) eta += Term::var(x, coeff(rng, 9));
  for (Variable u : others) {
    if (rng.coin()) eta += Term::pow(u, coeff(rng, 9));
    if (rng.coin()) eta += Term::var(u, coeff(rng, 9));
  }
  Integer c(rng.range(-50, 50));
  Integer n1 = c < 0 ? Integer(-c) : c;
  for (const auto& e : eta.entries()) n1 += abs(e.second);
  // g = 7 + 2 log2(lambda(n1))
  long g = 7 + 2 * static_cast<long>(bitLength(n1) - 1);
  Assignment nu;
  long maxU = 0;
  for (Variable u : others) {
    long uv = rng.range(-12, 12);
    nu[u] = uv;
    maxU = std::max(maxU, uv < 0 ? -uv : uv);
  }
  long xAbs = g + maxU + 1 + rng.range(0, 40);
  nu[x] = rng.coin() ? xAbs : -xAbs;
  Integer px = pow2(static_cast<unsigned long>(xAbs));
  Integer lamA = pow2(bitLength(a * px) - 1);
  Integer val = naiveTerm(eta, nu) + c;
  Integer lamV = sgn(val) == 0 ? Integer(0) : pow2(bitLength(val) - 1);
  if (2 * lamV >= lamA && lamV <= lamA) return std::nullopt;
  return "sandwich fails for " + renderTerm(eta) + " + " + c.get_str() + " at " + toJson(nu).dump();
}

namespace {

Formula canonicalAt(const Formula& f, int depth) {
  switch (f.kind()) {
    case FormulaKind::Not: return Formula::notOf(canonicalAt(f.child(), depth));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(canonicalAt(c, depth));
      return f.kind() == FormulaKind::And ? Formula::andOf(std::move(cs)) : Formula::orOf(std::move(cs));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Variable v = Variable::intern("_bound" + std::to_string(depth));
      Formula body = renameVariable(f.child(), f.boundVar(), v);
      return Formula::quantified(f.quantifier(), v, canonicalAt(body, depth + 1));
    }
    default: return f;
  }
}

}  // namespace

Formula canonicalBinders(const Formula& f) { return normalize(canonicalAt(f, 0)); }

long totient(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

long lcmOf(const std::vector<long>& xs) {
  long l = 1;
  for (long x : xs) l = std::lcm(l, x);
  return l;
}

}  // namespace expq::test
