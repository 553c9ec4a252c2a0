#pragma once

#include <map>
#include <set>
#include <string>

#include "efl/formula.hpp"
#include "efl/var.hpp"

namespace efl {

// Guarded-atom normal form: each effect variable maps to the formula under
// which it is included. Pure is the empty map. Joining merges guards of a
// repeated atom with disjunction.
class Effect {
 public:
  using Atoms = std::map<Var, Formula>;

  Effect() = default;

  static Effect pure() { return Effect(); }
  static Effect atom(const Var& v);
  static Effect guarded(const Var& v, const Formula& g);

  const Atoms& atoms() const { return atoms_; }
  bool is_pure() const { return atoms_.empty(); }
  bool mentions(const Var& v) const { return atoms_.count(v) != 0; }
  const Formula* guard_of(const Var& v) const;

  // Joins the single guarded atom v?g into this effect.
  void add(const Var& v, const Formula& g);

 private:
  Atoms atoms_;
};

Effect join(const Effect& a, const Effect& b);
Effect guard(const Effect& e, const Formula& g);

// Drops guards false under rho and replaces the rest by true.
Effect erase_guards(const Effect& e, const Valuation& rho);
std::set<Var> erased_atoms(const Effect& e, const Valuation& rho);
bool equal_under(const Effect& a, const Effect& b, const Valuation& rho);

// Formula that holds exactly when `alpha` belongs to the effect.
Formula to_formula(const Effect& e, const Var& alpha);

// Equality under every valuation.
bool effects_equal(const Effect& a, const Effect& b);

int compare(const Effect& a, const Effect& b);
inline bool operator==(const Effect& a, const Effect& b) { return compare(a, b) == 0; }
inline bool operator<(const Effect& a, const Effect& b) { return compare(a, b) < 0; }

void collect_vars(const Effect& e, std::set<Var>& out);
void collect_props(const Effect& e, std::set<Var>& out);

}  // namespace efl
