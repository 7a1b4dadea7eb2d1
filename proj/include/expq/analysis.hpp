#pragma once

#include <vector>

#include "expq/formula.hpp"

namespace expq {

std::vector<Variable> freeVariables(const Formula& f);
bool occursFree(const Formula& f, Variable v);
bool hasQuantifier(const Formula& f);
bool isGround(const Formula& f);

// Distinct atoms in first-occurrence order, including those under binders.
std::vector<Atom> collectAtoms(const Formula& f);

struct Occurrence {
  bool linear = false;  // x
  bool abs = false;     // |x|
  bool power = false;   // 2^|x|
  bool powerOutsidePC = false;

  bool any() const { return linear || abs || power; }
  bool onlyLinear() const { return (linear || abs) && !power; }
};

Occurrence occurrence(const Formula& f, Variable v);

}  // namespace expq
