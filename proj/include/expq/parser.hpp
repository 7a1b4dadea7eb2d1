#pragma once

#include <string>
#include <string_view>

#include "expq/formula.hpp"

namespace expq {

enum class Dialect : unsigned char { PresExp, PresPower };

struct SourceFormula {
  std::string text;
  Dialect dialect = Dialect::PresExp;
};

// Builds the formula as written: relations are folded into t < 0 atoms and
// terms are canonical, but nothing else is simplified. Bound variables are
// renamed apart from each other and from the free variables.
Formula parse(const SourceFormula& src);
Formula parse(std::string_view text, Dialect dialect = Dialect::PresExp);

std::string render(const Formula& f);
std::string render(const PrenexFormula& f);

// P(t) becomes exists y. t = 2^|y| and q | t becomes exists z. t = q*z; the
// result is normalized and in prenex form with as few quantifier blocks as
// interleaving sibling prefixes allows.
PrenexFormula translatePresPower(const Formula& f);

}  // namespace expq
