#pragma once

#include <map>
#include <set>

#include "efl/type.hpp"

namespace efl {

// Simultaneous substitution of effect variables, type variables and
// propositional variables. Application to types is capture avoiding: a
// binder is renamed only when the range would capture it.
class Subst {
 public:
  Subst& bind(const Var& v, Effect e);
  Subst& bind(const Var& v, Type t);
  Subst& bind_prop(const Var& p, Formula f);

  bool empty() const { return effects_.empty() && types_.empty() && props_.empty(); }
  const std::map<Var, Effect>& effects() const { return effects_; }
  const std::map<Var, Type>& types() const { return types_; }
  const std::map<Var, Formula>& props() const { return props_; }
  const std::set<Var>& range_vars() const { return range_vars_; }

  Formula apply(const Formula& f) const;
  Effect apply(const Effect& e) const;
  Type apply(const Type& t) const;
  Constraint apply(const Constraint& c) const;
  ConstraintSet apply(const ConstraintSet& omega) const;
  Scheme apply(const Scheme& s) const;

  // Removes `v` from the domain.
  Subst without(const Var& v) const;
  Subst without(const std::set<Var>& vars) const;

 private:
  std::map<Var, Effect> effects_;
  std::map<Var, Type> types_;
  std::map<Var, Formula> props_;
  std::set<Var> range_vars_;
};

// Substitutes pure for every variable in `vars` and drops constraints whose
// left side becomes pure.
ConstraintSet substitute_pure(const ConstraintSet& omega, const std::set<Var>& vars);

}  // namespace efl
