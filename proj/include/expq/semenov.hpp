#pragma once

#include <utility>
#include <vector>

#include "expq/budget.hpp"
#include "expq/formula.hpp"
#include "expq/fragment.hpp"

namespace expq {

struct WorkPair {
  std::vector<Variable> vars;
  Formula body;
};

// Threaded replacement for the global quantifier string of the cover: the
// universally quantified w variables standing for lambda(sigma).
struct SemState {
  std::vector<Variable> piPrime;
  std::vector<std::pair<Term, Variable>> sigmaRegistry;

  std::optional<Variable> lookup(const Term& sigma) const;
};

struct SemCoverInfo {
  std::size_t inequalityPairs = 0;  // |H| summed over the block variables
  std::size_t gammaCount = 0;       // |Gamma| after false members are dropped
  std::size_t sigmaCount = 0;       // |Sigma|
  std::size_t quantifiersAdded = 0;
  std::size_t outputs = 0;
};

// Case analysis on the size of each 2^|x| relative to the other powers and to
// lambda of the free part. Every output has some x in xs whose power occurs
// only in PC atoms. New w variables are appended to state.piPrime.
void semCover(const std::vector<Variable>& xs, const Formula& f, SemState& state, const Emit& emit,
              Budget* budget = nullptr, SemCoverInfo* info = nullptr);
std::vector<Formula> semCover(const std::vector<Variable>& xs, const Formula& f, SemState& state,
                              Budget* budget = nullptr, SemCoverInfo* info = nullptr);

// True when some x in xs has its power occurring only inside PC atoms.
bool hasNiceVariable(const std::vector<Variable>& xs, const Formula& f);

// Rewrites every PC atom on 2^|x| (for x whose power occurs only in PC atoms)
// into linear constraints on |x|. Identity for the Sem fragment.
Formula linearise(const std::vector<Variable>& xs, const Formula& f, Fragment frag);
std::vector<WorkPair> linearise(std::vector<WorkPair> pairs, Fragment frag);

// The rewrite of one PC atom mentioning 2^|x|.
Formula linearisePCAtom(const Atom& a, Variable x);

}  // namespace expq
