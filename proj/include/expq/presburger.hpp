#pragma once

#include <unordered_set>
#include <vector>

#include "expq/budget.hpp"
#include "expq/formula.hpp"
#include "expq/fragment.hpp"

namespace expq {

// Finite set of formulas whose disjunction is equivalent to a given formula.
struct CoverSet {
  std::vector<Formula> members;
  std::unordered_set<Formula> index;

  void add(const Formula& f);
  Formula disjunction() const;
  std::size_t size() const { return members.size(); }
};

struct SimplifyInfo {
  Integer modulus = 1;           // lcm of the non-simple divisibility moduli
  std::size_t residueTerms = 0;  // number of variable occurrences enumerated
  std::size_t residueMaps = 0;   // maps visited
};

// Replaces non-simple divisibilities by a case split on residues modulo the
// lcm of their moduli. Members equivalent to false are dropped.
void simplify(const Formula& f, Fragment frag, const Emit& emit, Budget* budget = nullptr,
              SimplifyInfo* info = nullptr);
CoverSet simplify(const Formula& f, Fragment frag, Budget* budget = nullptr, SimplifyInfo* info = nullptr);

// Substitution candidate (a, t): x is replaced by (t + k) / a.
struct SubstitutionCandidate {
  Integer a;
  Term t;
  friend bool operator==(const SubstitutionCandidate&, const SubstitutionCandidate&) = default;
};

std::vector<SubstitutionCandidate> substitutionCandidates(const Formula& f, Variable x);

struct PresQEInfo {
  std::vector<Formula> coreInputs;  // inputs of the elimination proper (after |x| case split)
  std::vector<SubstitutionCandidate> candidates;
  Integer g = 1;
  Integer maxR = 0;
  std::size_t members = 0;
};

// Full: k ranges over [-r, r] with r = a(2c + g m). Windowed: only the k
// within a(m+1) of some inequality's threshold, a subset that still covers
// exists x. f (a witness can always be moved, in steps of m, next to the
// threshold bounding its region).
enum class PresQERange : unsigned char { Windowed, Full };

// Eliminates x, which occurs only linearly (possibly as |x|), from f. The
// members cover exists x. f, do not mention x and have simple divisibilities.
void presQE(Variable x, const std::vector<Variable>& xs, const Formula& f, const Emit& emit,
            Budget* budget = nullptr, PresQEInfo* info = nullptr, PresQERange range = PresQERange::Windowed);
CoverSet presQE(Variable x, const std::vector<Variable>& xs, const Formula& f, Budget* budget = nullptr,
                PresQEInfo* info = nullptr, PresQERange range = PresQERange::Windowed);

}  // namespace expq
