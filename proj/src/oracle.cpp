#include "expq/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"

namespace expq {

// Evaluation works from the formula tree alone: no normalization and no
// simplification helpers, so that it stays an independent reference.

namespace {

Integer twoToAbs(const Integer& x) {
  Integer e = abs(x);
  if (e > Integer(kMaxEvalExponent)) throw ResourceExceeded("exponent " + toString(e) + " too large to evaluate");
  return pow2(e.get_ui());
}

bool isPowerOfTwo(const Integer& n) { return sgn(n) > 0 && mpz_popcount(n.get_mpz_t()) == 1; }

bool evalAtom(const Atom& a, const Assignment& nu) {
  Integer v = evalTerm(a.term, nu);
  switch (a.kind) {
    case AtomKind::Less: return sgn(v) < 0;
    case AtomKind::Div: return sgn(a.modulus) != 0 && mpz_divisible_p(v.get_mpz_t(), a.modulus.get_mpz_t()) != 0;
    case AtomKind::Pred: return isPowerOfTwo(v);
  }
  return false;
}

bool evalRec(const Formula& f, Assignment& nu, const Integer* bound) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return evalAtom(f.atomValue(), nu);
    case FormulaKind::Not: return !evalRec(f.child(), nu, bound);
    case FormulaKind::And:
      for (const auto& c : f.children())
        if (!evalRec(c, nu, bound)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f.children())
        if (evalRec(c, nu, bound)) return true;
      return false;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (!bound) throw ContractError("quantifier in a formula evaluated without bound");
      const bool exists = f.kind() == FormulaKind::Exists;
      const Variable v = f.boundVar();
      auto saved = nu.find(v) != nu.end() ? std::optional<Integer>(nu[v]) : std::nullopt;
      bool result = !exists;
      for (Integer k = -*bound; k <= *bound; ++k) {
        nu[v] = k;
        if (evalRec(f.child(), nu, bound) == exists) {
          result = exists;
          break;
        }
      }
      if (saved) nu[v] = *saved; else nu.erase(v);
      return result;
    }
  }
  return false;
}

}  // namespace

nlohmann::json toJson(const Assignment& nu) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, k] : nu) j[v.name()] = toString(k);
  return j;
}

Integer evalTerm(const Term& t, const Assignment& nu) {
  Integer sum = t.constant();
  for (const auto& [m, c] : t.entries()) {
    auto it = nu.find(m.var);
    if (it == nu.end()) throw ContractError("no value for variable " + m.var.name());
    switch (m.kind) {
      case MonoKind::Linear: sum += c * it->second; break;
      case MonoKind::Abs: sum += c * abs(it->second); break;
      case MonoKind::Power: sum += c * twoToAbs(it->second); break;
    }
  }
  return sum;
}

bool evalGround(const Formula& f) {
  if (hasQuantifier(f)) throw ContractError("evalGround: formula has quantifiers");
  if (!freeVariables(f).empty()) throw ContractError("evalGround: formula has variables");
  Assignment none;
  return evalRec(f, none, nullptr);
}

bool evalQF(const Formula& f, const Assignment& nu) {
  Assignment copy = nu;
  return evalRec(f, copy, nullptr);
}

bool evalBounded(const Formula& f, const Assignment& nu, const Integer& bound) {
  Assignment copy = nu;
  return evalRec(f, copy, &bound);
}

std::optional<Assignment> boundedWitnessSearch(const PrenexFormula& phi, const Integer& bound, const Assignment& nu) {
  std::vector<Variable> vars;
  for (const auto& e : phi.prefix) {
    if (e.quantifier != Quantifier::Exists) throw ContractError("boundedWitnessSearch: prefix is not existential");
    vars.push_back(e.var);
  }
  if (hasQuantifier(phi.matrix)) throw ContractError("boundedWitnessSearch: matrix has quantifiers");
  Assignment a = nu;
  if (vars.empty()) return evalQF(phi.matrix, a) ? std::optional<Assignment>(a) : std::nullopt;

  // Shells of increasing max-norm R; a point is on the shell when some
  // coordinate has absolute value R.
  for (Integer R = 0; R <= bound; ++R) {
    std::vector<Integer> point(vars.size(), -R);
    for (;;) {
      bool onShell = std::any_of(point.begin(), point.end(), [&](const Integer& p) { return abs(p) == R; });
      if (onShell) {
        for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = point[i];
        if (evalQF(phi.matrix, a)) return a;
      }
      std::size_t i = 0;
      while (i < point.size()) {
        if (point[i] < R) {
          ++point[i];
          break;
        }
        point[i] = -R;
        ++i;
      }
      if (i == point.size()) break;
    }
  }
  return std::nullopt;
}

nlohmann::json EquivalenceReport::toJson() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["samplesTried"] = samplesTried;
  j["verdict"] = agree() ? "Agree" : "Disagree";
  j["disagreements"] = nlohmann::json::array();
  for (const auto& d : disagreements) j["disagreements"].push_back(expq::toJson(d));
  return j;
}

std::vector<Assignment> sampleAssignments(const std::vector<Variable>& vars, const std::vector<Variable>& powerVars,
                                          const SamplerSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::vector<Assignment> out;
  const std::set<Variable> powers(powerVars.begin(), powerVars.end());
  const long r = spec.boxRadius;
  const long side = 2 * r + 1;

  // Exhaustive box when it is small enough, random box points otherwise.
  double boxSize = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) boxSize *= static_cast<double>(side);
  if (boxSize <= static_cast<double>(spec.maxBoxSamples)) {
    std::vector<long> point(vars.size(), -r);
    for (;;) {
      Assignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = point[i];
      out.push_back(std::move(a));
      std::size_t i = 0;
      while (i < point.size()) {
        if (point[i] < r) {
          ++point[i];
          break;
        }
        point[i] = -r;
        ++i;
      }
      if (i == point.size()) break;
    }
  } else {
    std::uniform_int_distribution<long> box(-r, r);
    for (std::size_t s = 0; s < spec.maxBoxSamples; ++s) {
      Assignment a;
      for (Variable v : vars) a[v] = box(rng);
      out.push_back(std::move(a));
    }
  }

  // Log-uniform magnitudes with random signs.
  auto draw = [&](unsigned maxBits) {
    std::uniform_int_distribution<unsigned> bitsDist(0, maxBits);
    unsigned bits = bitsDist(rng);
    Integer v = 0;
    for (unsigned done = 0; done < bits; done += 32) {
      unsigned chunk = std::min(32u, bits - done);
      std::uint64_t word = rng() & ((chunk == 64 ? 0 : (std::uint64_t{1} << chunk)) - 1);
      v = (v << chunk) + Integer(static_cast<unsigned long>(word));
    }
    return (rng() & 1) ? Integer(-v) : v;
  };
  for (std::size_t s = 0; s < spec.randomSamples; ++s) {
    Assignment a;
    for (Variable v : vars) a[v] = draw(powers.count(v) ? spec.maxExponentBits : spec.maxMagnitudeBits);
    out.push_back(std::move(a));
  }
  return out;
}

EquivalenceReport sampleEquivalence(const Formula& a, const Formula& b, const SamplerSpec& spec,
                                    std::size_t maxDisagreements) {
  std::set<Variable> vars;
  std::set<Variable> powerVars;
  for (const Formula* f : {&a, &b}) {
    for (Variable v : freeVariables(*f)) vars.insert(v);
    for (const auto& at : collectAtoms(*f))
      for (const auto& [m, c] : at.term.entries())
        if (m.kind == MonoKind::Power) powerVars.insert(m.var);
  }
  std::vector<Variable> vs(vars.begin(), vars.end());
  std::vector<Variable> ps(powerVars.begin(), powerVars.end());

  EquivalenceReport report;
  report.seed = spec.seed;
  for (const auto& nu : sampleAssignments(vs, ps, spec)) {
    ++report.samplesTried;
    if (evalQF(a, nu) != evalQF(b, nu)) {
      report.disagreements.push_back(nu);
      if (report.disagreements.size() >= maxDisagreements) break;
    }
  }
  return report;
}

}  // namespace expq
