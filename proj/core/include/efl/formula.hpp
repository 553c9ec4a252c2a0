#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "efl/var.hpp"

namespace efl {

// Total truth assignment. Variables that were never set read as false.
class Valuation {
 public:
  void set(const Var& prop, bool value) { values_[prop] = value; }
  bool operator()(const Var& prop) const;
  bool contains(const Var& prop) const { return values_.count(prop) != 0; }
  const std::map<Var, bool>& entries() const { return values_; }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::map<Var, bool> values_;
};

// Immutable propositional formula. And/Or nodes are n-ary so that long
// conjunctions stay shallow.
class Formula {
 public:
  enum class Op : std::uint8_t { kVar, kTrue, kFalse, kAnd, kOr, kImplies };
  struct Node;

  Formula();  // top

  static Formula top();
  static Formula bottom();
  static Formula var(const Var& prop);
  // Raw constructors keep the operands exactly as given.
  static Formula make_and(std::vector<Formula> operands);
  static Formula make_or(std::vector<Formula> operands);
  static Formula make_implies(Formula lhs, Formula rhs);

  Op op() const;
  const Var& prop() const;
  const std::vector<Formula>& operands() const;
  bool is_top() const { return op() == Op::kTrue; }
  bool is_bottom() const { return op() == Op::kFalse; }
  const Node* identity() const { return node_.get(); }

  bool evaluate(const Valuation& rho) const;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  Var prop;
  std::vector<Formula> operands;
};

int compare(const Formula& a, const Formula& b);
inline bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

// Constant-folding constructors.
Formula conj(const Formula& a, const Formula& b);
Formula conj(std::vector<Formula> operands);
Formula disj(const Formula& a, const Formula& b);
Formula disj(std::vector<Formula> operands);
Formula implies(const Formula& a, const Formula& b);

// Rebuilds the formula with the folding constructors.
Formula fold_constants(const Formula& f);

void collect_props(const Formula& f, std::set<Var>& out);
std::set<Var> props_of(const Formula& f);

// Replaces propositional variables; the result is constant folded.
Formula substitute_props(const Formula& f, const std::map<Var, Formula>& sigma);
Formula restrict(const Formula& f, const Valuation& fixed);

std::string to_string(const Formula& f);

}  // namespace efl

namespace efl {

// Truth-table comparison; throws std::length_error above `max_props` variables.
bool equivalent_by_enumeration(const Formula& a, const Formula& b, std::size_t max_props = 22);

}  // namespace efl
