#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "efl/formula.hpp"

namespace efl {

namespace detail {
class Dpll;
}

// CNF (Tseitin) encoding of a formula, solved by DPLL with two watched
// literals and chronological backtracking. The encoding is built once and
// can be solved repeatedly under different assumptions. Copies share one
// search engine, so an instance must not be solved from two threads.
class SatInstance {
 public:
  explicit SatInstance(const Formula& phi);

  // A model of the formula extending `assumptions`, defined on every
  // variable of the formula and of the assumptions. Branching tries false
  // first unless `prefer_true`.
  std::optional<Valuation> solve(const Valuation& assumptions = {}, bool prefer_true = false) const;

  const std::vector<Var>& vars() const { return vars_; }
  std::size_t clause_count() const { return clauses_.size(); }

 private:
  int literal_of(const Var& v);
  int encode(const Formula& f);
  int fresh_aux();

  std::vector<Var> vars_;
  std::map<Var, int> index_;
  int num_vars_ = 0;
  bool trivially_false_ = false;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> order_;
  std::map<const Formula::Node*, int> memo_;
  mutable std::shared_ptr<detail::Dpll> engine_;
};

std::optional<Valuation> sat(const Formula& phi);

// Greedily flips true variables to false while the formula stays
// satisfiable, scanning variables in id order.
Valuation minimize_model(const SatInstance& instance, Valuation model);

}  // namespace efl
