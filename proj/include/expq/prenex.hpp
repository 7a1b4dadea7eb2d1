#pragma once

#include "expq/formula.hpp"

namespace expq {

// Left-to-right prenex transformation. Binders that clash with free variables
// or with earlier binders are renamed to fresh variables.
PrenexFormula toPrenex(const Formula& f);

// Same renaming, but quantifiers of sibling subformulas are interleaved so
// that the prefix has as few blocks as any interleaving of the children's
// prefixes allows.
PrenexFormula toPrenexMinAlternation(const Formula& f);

}  // namespace expq
