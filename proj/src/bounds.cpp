#include "expq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "expq/analysis.hpp"
#include "expq/fragment.hpp"

namespace expq {

namespace {

// base^exp; exponents are small table parameters, but a huge result is
// clipped to 2^(1<<20), which no measured quantity can reach.
Integer power(const Integer& base, const Integer& exp) {
  if (sgn(base) == 0) return sgn(exp) == 0 ? Integer(1) : Integer(0);
  const Integer cap = 1 << 20;
  if (exp * Integer(bitLength(base)) > cap) return pow2(1UL << 20);
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp.get_ui());
  return r;
}

Integer atLeast(const Integer& x, long lo) { return x < lo ? Integer(lo) : x; }

void expectLe(std::vector<std::string>& out, const char* what, const Integer& got, const Integer& bound) {
  if (got > bound) out.push_back(std::string(what) + " = " + toString(got) + " exceeds " + toString(bound));
}

double log2Of(const Integer& n) {
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log2(d) + static_cast<double>(exp);
}

}  // namespace

PresQEParams PresQEParams::of(const MetricsReport& in) {
  PresQEParams p;
  p.h = atLeast(Integer(in.homterms.size()), 2);
  p.v = Integer(in.maxvars);
  p.a = atLeast(in.norminfHomterms, 2);
  p.c = in.norminfLinterms;
  p.m = in.fmod;
  p.b = Integer(in.boolnum);
  return p;
}

void PresQEParams::widen(const PresQEParams& o) {
  h = std::max(h, o.h);
  v = std::max(v, o.v);
  a = std::max(a, o.a);
  c = std::max(c, o.c);
  m = std::max(m, o.m);
  b = std::max(b, o.b);
}

Integer PresQEParams::memberBound() const {
  return h * c * power(m, 2 * v + 1) * power(a, 2 * v + h + 4);
}

std::vector<std::string> checkPresQEOutput(const PresQEParams& p, const MetricsReport& out) {
  std::vector<std::string> v;
  expectLe(v, "presQE |homterms|", Integer(out.homterms.size()), p.h);
  expectLe(v, "presQE maxvars", Integer(out.maxvars), 2 * p.v);
  expectLe(v, "presQE |homterms|_inf", out.norminfHomterms, 2 * p.a * p.a);
  expectLe(v, "presQE |linterms|_inf", out.norminfLinterms, power(p.a, p.h + 2) * (p.c + p.m));
  expectLe(v, "presQE fmod", out.fmod, p.a * p.m);
  expectLe(v, "presQE boolnum", Integer(out.boolnum), p.b + 2 * p.v + 1);
  return v;
}

SemCoverParams SemCoverParams::of(const MetricsReport& in, std::size_t blockSize) {
  SemCoverParams p;
  p.h = Integer(in.homterms.size());
  p.v = atLeast(Integer(in.maxvars), 2);
  p.c = atLeast(in.norminfLinterms, 2);
  p.m = in.fmod;
  p.b = Integer(in.boolnum);
  p.n = Integer(blockSize);
  return p;
}

bool SemCoverParams::countWithinBound(std::size_t k) const {
  if (k == 0) return true;
  const double hh = h.get_d();
  const double logBound =
      8.0 * hh * std::log2(v.get_d() + 1.0) + hh * std::log2(log2Of(c)) + std::log2(n.get_d());
  return std::log2(static_cast<double>(k)) <= logBound + 1e-9;
}

std::vector<std::string> checkSemCoverOutput(const SemCoverParams& p, const MetricsReport& out) {
  std::vector<std::string> v;
  expectLe(v, "semCover |homterms|", Integer(out.homterms.size()), p.h * (p.v + 10) + p.n);
  expectLe(v, "semCover maxvars", Integer(out.maxvars), p.v);
  expectLe(v, "semCover |linterms|_inf", out.norminfLinterms, Integer(2048) * p.v * p.v * power(p.c, 4));
  expectLe(v, "semCover fmod", out.fmod, p.m);
  expectLe(v, "semCover boolnum", Integer(out.boolnum), p.b + p.h * (p.v + 11) + p.n);
  return v;
}

std::size_t blockHomtermsOutsidePC(const Formula& f, const std::vector<Variable>& xs) {
  std::set<Term, TermLess> seen;
  for (const auto& a : collectAtoms(f)) {
    if (!a.isLess() || atomInPC(a)) continue;
    bool mentions = std::any_of(xs.begin(), xs.end(), [&](Variable x) { return a.term.mentions(x); });
    if (mentions) seen.insert(a.term.homogeneous());
  }
  return seen.size();
}

LineariseParams LineariseParams::of(const MetricsReport& in, const Formula& f, std::size_t blockSize) {
  LineariseParams p;
  p.h = Integer(in.homterms.size());
  p.v = Integer(in.maxvars);
  p.a = in.norminfHomterms;
  p.c = atLeast(in.norminfLinterms, 2);
  p.m = atLeast(in.fmod, 2);
  p.b = Integer(in.boolnum);
  std::set<Variable> vars;
  for (const auto& a : collectAtoms(f))
    for (Variable x : a.term.variables()) vars.insert(x);
  p.r = Integer(vars.size());
  p.n = Integer(blockSize);
  return p;
}

std::vector<std::string> checkLineariseOutput(const LineariseParams& p, const MetricsReport& out) {
  std::vector<std::string> v;
  expectLe(v, "linearise |homterms|", Integer(out.homterms.size()), p.h + (6 * p.r + 2) * p.n);
  expectLe(v, "linearise maxvars", Integer(out.maxvars), p.v);
  expectLe(v, "linearise |homterms|_inf", out.norminfHomterms, p.a);
  expectLe(v, "linearise |linterms|_inf", out.norminfLinterms, p.c);
  expectLe(v, "linearise fmod", out.fmod, p.m * p.m);
  expectLe(v, "linearise boolnum", Integer(out.boolnum), 22 * p.b);
  return v;
}

OctParams OctParams::of(const MetricsReport& in, std::size_t blocks, std::size_t blockSize) {
  OctParams p;
  p.c = atLeast(in.norminfLinterms, 2);
  p.m = atLeast(in.fmod, 2);
  p.blocks = std::max<std::size_t>(blocks, 1);
  p.blockSize = std::max<std::size_t>(blockSize, 1);
  return p;
}

Integer OctParams::lintermsBound() const {
  return power(Integer(4), Integer(blocks * blockSize)) * (c + 2 * m);
}

std::vector<std::string> checkOctOutput(const OctParams& p, const MetricsReport& out) {
  std::vector<std::string> v;
  expectLe(v, "Oct maxvars", Integer(out.maxvars), Integer(2));
  expectLe(v, "Oct |homterms|_inf", out.norminfHomterms, Integer(1));
  expectLe(v, "Oct fmod", out.fmod, p.m);
  expectLe(v, "Oct |linterms|_inf", out.norminfLinterms, p.lintermsBound());
  return v;
}

}  // namespace expq
