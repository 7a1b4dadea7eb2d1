#include "expq/metrics.hpp"

#include <algorithm>

#include "expq/analysis.hpp"

namespace expq {

namespace {

void prefixKinds(const Formula& f, bool negated, std::vector<Quantifier>& out) {
  switch (f.kind()) {
    case FormulaKind::Not:
      prefixKinds(f.child(), !negated, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out.push_back(negated ? dual(f.quantifier()) : f.quantifier());
      prefixKinds(f.child(), negated, out);
      return;
    default:
      for (const auto& c : f.children()) prefixKinds(c, negated, out);
  }
}

}  // namespace

std::size_t boolnum(const Formula& f) {
  std::size_t sum = 0;
  for (const auto& c : f.children()) sum += boolnum(c);
  std::size_t k = f.children().size();
  switch (f.kind()) {
    case FormulaKind::Not: return sum + 1;
    case FormulaKind::And: return sum + (k - 1);
    // Or as not(not a and not b ...): one outer not, k inner nots, k-1 ands.
    case FormulaKind::Or: return sum + 2 * k;
    default: return sum;
  }
}

std::size_t alternations(const Formula& f) {
  std::vector<Quantifier> ks;
  prefixKinds(f, false, ks);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (i == 0 || ks[i] != ks[i - 1]) ++blocks;
  return blocks;
}

MetricsReport metrics(const Formula& f) {
  MetricsReport r;
  r.linterms.insert(Term(0));
  r.linterms.insert(Term(2));
  for (const auto& a : collectAtoms(f)) {
    r.maxvars = std::max(r.maxvars, a.term.numVariables());
    if (a.isLess()) {
      r.linterms.insert(a.term);
    } else if (a.isDiv()) {
      r.fmod = lcm(r.fmod, a.modulus);
    }
  }
  for (const auto& t : r.linterms) {
    r.homterms.insert(t.homogeneous());
    Integer n = t.normInf();
    if (n > r.norminfLinterms) r.norminfLinterms = n;
    Integer o = t.normOne();
    if (o > r.normoneMax) r.normoneMax = o;
  }
  for (const auto& h : r.homterms) {
    Integer n = h.normInf();
    if (n > r.norminfHomterms) r.norminfHomterms = n;
  }
  r.lintermsCount = r.linterms.size();
  r.boolnum = boolnum(f);
  r.alt = alternations(f);
  return r;
}

namespace {

nlohmann::json integerJson(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

}  // namespace

nlohmann::json MetricsReport::toJson(bool withTerms) const {
  nlohmann::json j;
  j["lintermsCount"] = lintermsCount;
  j["homtermsCount"] = homterms.size();
  j["maxvars"] = maxvars;
  j["norminfLinterms"] = integerJson(norminfLinterms);
  j["norminfHomterms"] = integerJson(norminfHomterms);
  j["normoneMax"] = integerJson(normoneMax);
  j["fmod"] = integerJson(fmod);
  j["boolnum"] = boolnum;
  j["alt"] = alt;
  if (withTerms) {
    auto& lt = j["linterms"] = nlohmann::json::array();
    for (const auto& t : linterms) lt.push_back(renderTerm(t));
    auto& ht = j["homterms"] = nlohmann::json::array();
    for (const auto& t : homterms) ht.push_back(renderTerm(t));
  }
  return j;
}

}  // namespace expq
