#pragma once

#include <optional>
#include <set>
#include <vector>

#include "efl/sat.hpp"
#include "efl/subst.hpp"

namespace efl {

// Replaces each generated variable by a guarded join of the top-level
// effect constants with fresh propositional guards, so that the remaining
// constraints mention constants only.
struct Closure {
  Subst theta;
  std::vector<Var> props;
};

Closure close_generated(const std::vector<Var>& generated, const std::vector<Var>& constants,
                        FreshSupply& fresh);

// Conjunction of omega[alpha] over the constants. Throws std::logic_error if
// omega mentions anything else.
Formula discharge_toplevel(const std::vector<Var>& constants, const ConstraintSet& omega);

// Heuristic cleanup that keeps satisfiability for every choice of the
// protected variables: drops trivially true constraints, merges constraints
// that differ only in the guard of their single left atom, and drops a
// constraint on an unprotected variable that occurs nowhere else.
ConstraintSet simplify_constraints(const ConstraintSet& omega, const std::set<Var>& protect);

// Applies simplify_constraints to a scheme, protecting variables of its body
// and its free variables, and drops bound variables that no longer occur.
Scheme simplify_scheme(const Scheme& scheme);

// Incremental satisfiability for interactive use. Pushing a formula either
// accepts it (the conjunction stays satisfiable) or reports a contradiction
// and leaves the state untouched. Variables forced to one value are fixed
// and substituted into the accumulated formula.
class SolverSession {
 public:
  enum class Verdict { kAccepted, kContradiction };

  Verdict push(const Formula& phi);

  const Formula& accumulated() const { return accumulated_; }
  const Valuation& fixed() const { return fixed_; }
  std::uint64_t generation() const { return generation_; }

  // A model of everything accepted so far, extended by `extra`.
  std::optional<Valuation> witness(const Formula& extra = Formula::top()) const;

 private:
  Formula accumulated_ = Formula::top();
  Valuation fixed_;
  std::uint64_t generation_ = 0;
};

}  // namespace efl
