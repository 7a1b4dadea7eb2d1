#pragma once

#include "expq/formula.hpp"

namespace expq {

enum class Fragment : unsigned char { QF, Sem };

// a*2^|x| < b*2^|y|, a*2^|x| < b, q | 2^|x| - r. Ground atoms count as PC.
bool atomInPC(const Atom& a);
// Div atom whose term is a single variable occurrence with coefficient 1.
bool divIsSimple(const Atom& a);
// +-x +-y < c, +-x < c, q | x - r; |x| counts as a linear occurrence.
bool atomInOct(const Atom& a);
bool formulaInOct(const Formula& f);

// Each variable is linear-only or power-only, bound variables occur only in
// PC atoms, and every divisibility is simple.
bool inSem(const Formula& f);
bool fragmentCheck(const Formula& f, Fragment frag);

}  // namespace expq
