#include "expq/term.hpp"

#include <algorithm>

namespace expq {

Term Term::mono(const Monomial& m, Integer coeff) {
  Term t;
  if (sgn(coeff) != 0) t.entries_.emplace_back(m, std::move(coeff));
  return t;
}

Term Term::var(Variable v, Integer coeff) { return mono(Monomial::linear(v), std::move(coeff)); }
Term Term::abs(Variable v, Integer coeff) { return mono(Monomial::abs(v), std::move(coeff)); }
Term Term::pow(Variable v, Integer coeff) { return mono(Monomial::power(v), std::move(coeff)); }

Integer Term::coeff(const Monomial& m) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), m,
                             [](const Entry& e, const Monomial& k) { return e.first < k; });
  if (it != entries_.end() && it->first == m) return it->second;
  return 0;
}

bool Term::contains(const Monomial& m) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), m,
                             [](const Entry& e, const Monomial& k) { return e.first < k; });
  return it != entries_.end() && it->first == m;
}

bool Term::mentions(Variable v) const {
  for (const auto& e : entries_)
    if (e.first.var == v) return true;
  return false;
}

bool Term::hasKind(MonoKind k) const {
  for (const auto& e : entries_)
    if (e.first.kind == k) return true;
  return false;
}

Term Term::homogeneous() const {
  Term t = *this;
  t.constant_ = 0;
  return t;
}

Term Term::withConstant(Integer c) const {
  Term t = *this;
  t.constant_ = std::move(c);
  return t;
}

Term Term::without(const Monomial& m) const {
  Term t;
  t.constant_ = constant_;
  t.entries_.reserve(entries_.size());
  for (const auto& e : entries_)
    if (!(e.first == m)) t.entries_.push_back(e);
  return t;
}

Term Term::replace(const Monomial& m, const Term& replacement) const {
  Integer a = coeff(m);
  if (sgn(a) == 0) return *this;
  return without(m) + replacement * a;
}

Term Term::reducedMod(const Integer& q) const {
  Term t;
  t.entries_.reserve(entries_.size());
  for (const auto& e : entries_) {
    Integer r = mod(e.second, q);
    if (sgn(r) != 0) t.entries_.emplace_back(e.first, std::move(r));
  }
  t.constant_ = mod(constant_, q);
  return t;
}

Integer Term::normInf() const {
  Integer m = ::abs(constant_);
  for (const auto& e : entries_) {
    Integer a = ::abs(e.second);
    if (a > m) m = a;
  }
  return m;
}

Integer Term::normOne() const {
  Integer s = ::abs(constant_);
  for (const auto& e : entries_) s += ::abs(e.second);
  return s;
}

std::size_t Term::numVariables() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (i == 0 || !(entries_[i].first.var == entries_[i - 1].first.var)) ++n;
  return n;
}

std::vector<Variable> Term::variables() const {
  std::vector<Variable> vs;
  for (const auto& e : entries_)
    if (vs.empty() || !(vs.back() == e.first.var)) vs.push_back(e.first.var);
  return vs;
}

Term Term::operator-() const {
  Term t = *this;
  for (auto& e : t.entries_) e.second = -e.second;
  t.constant_ = -t.constant_;
  return t;
}

Term Term::operator+(const Term& o) const {
  Term t;
  t.constant_ = constant_ + o.constant_;
  t.entries_.reserve(entries_.size() + o.entries_.size());
  auto i = entries_.begin();
  auto j = o.entries_.begin();
  while (i != entries_.end() || j != o.entries_.end()) {
    if (j == o.entries_.end() || (i != entries_.end() && i->first < j->first)) {
      t.entries_.push_back(*i++);
    } else if (i == entries_.end() || j->first < i->first) {
      t.entries_.push_back(*j++);
    } else {
      Integer s = i->second + j->second;
      if (sgn(s) != 0) t.entries_.emplace_back(i->first, std::move(s));
      ++i;
      ++j;
    }
  }
  return t;
}

Term Term::operator-(const Term& o) const { return *this + (-o); }

Term Term::operator*(const Integer& k) const {
  if (sgn(k) == 0) return Term();
  Term t = *this;
  for (auto& e : t.entries_) e.second *= k;
  t.constant_ *= k;
  return t;
}

std::size_t Term::hash() const {
  std::size_t h = hashInteger(constant_);
  for (const auto& e : entries_) {
    h = hashCombine(h, e.first.var.hash());
    h = hashCombine(h, static_cast<std::size_t>(e.first.kind));
    h = hashCombine(h, hashInteger(e.second));
  }
  return h;
}

std::strong_ordering compare(const Term& a, const Term& b) {
  std::size_t n = std::min(a.entries_.size(), b.entries_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.entries_[i].first <=> b.entries_[i].first; c != 0) return c;
    int d = cmp(a.entries_[i].second, b.entries_[i].second);
    if (d != 0) return d < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.entries_.size() <=> b.entries_.size(); c != 0) return c;
  int d = cmp(a.constant_, b.constant_);
  if (d != 0) return d < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

std::string monomialText(const Monomial& m) {
  switch (m.kind) {
    case MonoKind::Linear: return m.var.name();
    case MonoKind::Abs: return "|" + m.var.name() + "|";
    case MonoKind::Power: return "pow(" + m.var.name() + ")";
  }
  return {};
}

}  // namespace

std::string renderTerm(const Term& t) {
  // Display order is by name so output does not depend on interning history.
  std::vector<const Term::Entry*> es;
  for (const auto& e : t.entries()) es.push_back(&e);
  std::stable_sort(es.begin(), es.end(), [](const Term::Entry* a, const Term::Entry* b) {
    if (a->first.var.name() != b->first.var.name()) return a->first.var.name() < b->first.var.name();
    return a->first.kind > b->first.kind;
  });
  std::string out;
  bool first = true;
  auto emit = [&](const Integer& c, const std::string& body) {
    bool neg = sgn(c) < 0;
    Integer a = ::abs(c);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (body.empty()) {
      out += a.get_str();
    } else {
      if (a != 1) out += a.get_str() + "*";
      out += body;
    }
    first = false;
  };
  // Power terms first, then linear and absolute-value terms, then the constant.
  for (const auto* e : es)
    if (e->first.kind == MonoKind::Power) emit(e->second, monomialText(e->first));
  for (const auto* e : es)
    if (e->first.kind != MonoKind::Power) emit(e->second, monomialText(e->first));
  if (sgn(t.constant()) != 0 || first) emit(t.constant(), "");
  return out;
}

}  // namespace expq
