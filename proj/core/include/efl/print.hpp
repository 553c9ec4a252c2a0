#pragma once

#include <map>
#include <set>
#include <string>

#include "efl/type.hpp"

namespace efl {

// Renders internal terms. Bound variables are renamed to a, b, c, ... in
// order of first occurrence, skipping names of free variables.
class Printer {
 public:
  std::string effect(const Effect& e);       // [a \/ b ? p]
  std::string effect_body(const Effect& e);  // a \/ b ? p, or pure
  std::string type(const Type& t);
  std::string constraint(const Constraint& c);
  std::string constraints(const ConstraintSet& omega);
  std::string scheme(const Scheme& s);

 private:
  void reserve_free(const std::set<Var>& free);
  const std::string& bind(const Var& v);
  std::string name_of(const Var& v) const;
  void type_into(const Type& t, std::string& out, bool parenthesize);
  void order_vars(const Type& t, std::vector<Var>& order, std::set<Var>& seen) const;

  std::map<Var, std::string> bound_;
  std::set<std::string> taken_;
  std::size_t next_letter_ = 0;
};

std::string to_string(const Effect& e);
std::string to_string(const Type& t);
std::string to_string(const Constraint& c);
std::string to_string(const ConstraintSet& omega);
std::string to_string(const Scheme& s);

}  // namespace efl
