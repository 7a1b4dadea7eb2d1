#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "expq/integer.hpp"
#include "expq/variable.hpp"

namespace expq {

// Linear: x.  Abs: |x| (produced when taking logarithms).  Power: 2^|x|.
enum class MonoKind : unsigned char { Linear = 0, Abs = 1, Power = 2 };

struct Monomial {
  Variable var;
  MonoKind kind = MonoKind::Linear;

  static Monomial linear(Variable v) { return {v, MonoKind::Linear}; }
  static Monomial abs(Variable v) { return {v, MonoKind::Abs}; }
  static Monomial power(Variable v) { return {v, MonoKind::Power}; }

  bool isPower() const { return kind == MonoKind::Power; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.var <=> b.var; c != 0) return c;
    return a.kind <=> b.kind;
  }
};

// sum of coefficient * monomial, plus a constant. Entries are sorted by
// monomial and all coefficients are nonzero.
class Term {
 public:
  using Entry = std::pair<Monomial, Integer>;

  Term() = default;
  explicit Term(Integer c) : constant_(std::move(c)) {}
  Term(long c) : constant_(c) {}  // NOLINT: literals read naturally in term arithmetic

  static Term var(Variable v, Integer coeff = 1);
  static Term abs(Variable v, Integer coeff = 1);
  static Term pow(Variable v, Integer coeff = 1);
  static Term mono(const Monomial& m, Integer coeff = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  const Integer& constant() const { return constant_; }

  bool isConstant() const { return entries_.empty(); }
  bool isZero() const { return entries_.empty() && sgn(constant_) == 0; }
  std::size_t size() const { return entries_.size(); }

  Integer coeff(const Monomial& m) const;
  bool contains(const Monomial& m) const;
  bool mentions(Variable v) const;
  bool hasKind(MonoKind k) const;

  Term homogeneous() const;
  Term withConstant(Integer c) const;
  Term without(const Monomial& m) const;
  // Replaces coefficient*m by coefficient*replacement.
  Term replace(const Monomial& m, const Term& replacement) const;
  Term reducedMod(const Integer& q) const;

  Integer normInf() const;  // max |coefficient| including the constant
  Integer normOne() const;  // sum |coefficient| including the constant
  std::size_t numVariables() const;
  std::vector<Variable> variables() const;

  Term operator-() const;
  Term operator+(const Term& o) const;
  Term operator-(const Term& o) const;
  Term operator*(const Integer& k) const;
  Term& operator+=(const Term& o) { return *this = *this + o; }
  Term& operator-=(const Term& o) { return *this = *this - o; }

  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.constant_ == b.constant_ && a.entries_ == b.entries_;
  }
  friend std::strong_ordering compare(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

 private:
  std::vector<Entry> entries_;
  Integer constant_ = 0;
};

inline Term operator*(const Integer& k, const Term& t) { return t * k; }

std::string renderTerm(const Term& t);

}  // namespace expq

template <>
struct std::hash<expq::Term> {
  std::size_t operator()(const expq::Term& t) const noexcept { return t.hash(); }
};
