#pragma once

#include <memory>
#include <set>
#include <vector>

#include "efl/effect.hpp"

namespace efl {

// Internal types. A forall binder's kind says whether it ranges over types
// or effects.
class Type {
 public:
  enum class Tag : std::uint8_t { kVar, kArrow, kForall };
  struct Node;

  Type();  // placeholder type variable with id 0

  static Type var(const Var& v);
  static Type arrow(Type dom, Effect eff, Type cod);
  static Type forall(const Var& binder, Type body);

  Tag tag() const;
  bool is_var() const { return tag() == Tag::kVar; }
  bool is_arrow() const { return tag() == Tag::kArrow; }
  bool is_forall() const { return tag() == Tag::kForall; }

  const Var& var() const;     // kVar
  const Var& binder() const;  // kForall
  const Type& dom() const;    // kArrow
  const Effect& effect() const;
  const Type& cod() const;
  const Type& body() const;   // kForall

  const Node* identity() const { return node_.get(); }

 private:
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  Tag tag;
  Var var;
  std::vector<Type> kids;
  Effect eff;
};

int compare(const Type& a, const Type& b);
inline bool operator==(const Type& a, const Type& b) { return compare(a, b) == 0; }

// Free type and effect variables.
void collect_free_vars(const Type& t, std::set<Var>& out);
std::set<Var> free_vars(const Type& t);
void collect_props(const Type& t, std::set<Var>& out);
std::size_t arrow_count(const Type& t);
std::uint64_t max_var_id(const Type& t);

Type erase_guards(const Type& t, const Valuation& rho);

struct Constraint {
  Effect lhs;
  Effect rhs;
};

int compare(const Constraint& a, const Constraint& b);
inline bool operator<(const Constraint& a, const Constraint& b) { return compare(a, b) < 0; }
inline bool operator==(const Constraint& a, const Constraint& b) { return compare(a, b) == 0; }

using ConstraintSet = std::set<Constraint>;

// Conjunction over constraints of (lhs[alpha] => rhs[alpha]).
Formula omega_to_formula(const ConstraintSet& omega, const Var& alpha);
ConstraintSet erase_guards(const ConstraintSet& omega, const Valuation& rho);
void collect_vars(const ConstraintSet& omega, std::set<Var>& out);
void collect_props(const ConstraintSet& omega, std::set<Var>& out);
// Removes constraints whose left side is pure; they always hold.
ConstraintSet drop_trivial(ConstraintSet omega);

// forall bound <constraints> body
struct Scheme {
  std::vector<Var> bound;
  ConstraintSet constraints;
  Type body;

  static Scheme mono(Type t) { return Scheme{{}, {}, std::move(t)}; }
};

void collect_free_vars(const Scheme& s, std::set<Var>& out);

}  // namespace efl
