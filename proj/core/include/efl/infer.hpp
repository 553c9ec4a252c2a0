#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efl/declarative.hpp"

namespace efl {

// Shape errors and resource limits found during inference.
class TypeError : public std::runtime_error {
 public:
  TypeError(Loc loc, const std::string& message);
  Loc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  Loc loc_;
  std::string detail_;
};

// Thrown by subtype() when the two types do not share a shape.
class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrEffect {
  std::vector<Var> vars;  // one per wildcard
  Effect effect;
};

struct TrType {
  std::vector<Var> props;
  std::vector<Var> vars;
  Type type;
};

struct SubtypeResult {
  ConstraintSet constraints;
  Formula formula;
};

// Output tuple (P; Delta'; type; effect; Omega; phi) plus the certificate.
struct InferResult {
  std::vector<Var> props;
  std::vector<Var> vars;
  Type type;
  Effect effect;
  ConstraintSet constraints;
  Formula formula;
  Cert cert;
};

struct LetBinding {
  Scheme scheme;
  std::vector<Var> props;
  std::vector<Var> vars;
  ConstraintSet propagated;
  Formula formula;
  Cert bound_cert;
};

struct InferOptions {
  GenMode mode = GenMode::kConstrained;
  // Upper bound on variables generalized by one constraint-free let.
  std::size_t max_generalized = std::size_t{1} << 16;
};

ConstraintSet normalize(const ConstraintSet& omega);

// Splits normalized constraints into those bounding a variable of `gen`
// and the rest, with `gen` replaced by pure in the rest.
std::pair<ConstraintSet, ConstraintSet> separate(const std::set<Var>& gen,
                                                  const ConstraintSet& omega);

class Inferencer {
 public:
  Inferencer(FreshSupply& fresh, InferOptions options) : fresh_(fresh), options_(options) {}

  TrEffect tr_effect(const SynEffect& s);
  TrType tr_type(const SynType& s);
  SubtypeResult subtype(const Type& lhs, const Type& rhs);

  // Each variable in `vars` becomes beta \/ gamma with fresh beta, gamma.
  Subst split_vars(const std::vector<Var>& vars, std::vector<Var>& betas,
                   std::vector<Var>& gammas);

  InferResult infer(const TypeEnv& gamma, const Expr& e);
  LetBinding bind(const TypeEnv& gamma, const Expr& bound);

  // Schemes of every let binder seen so far.
  const std::map<Var, Scheme>& let_schemes() const { return let_schemes_; }
  FreshSupply& fresh() { return fresh_; }
  const InferOptions& options() const { return options_; }

 private:
  LetBinding bind_constrained(InferResult r, const Expr& bound);
  LetBinding bind_constraint_free(InferResult r, const Expr& bound);

  FreshSupply& fresh_;
  InferOptions options_;
  std::map<Var, Scheme> let_schemes_;
};

// Inference over a whole program. The prelude's effects and types form the
// top-level scope; externs seed the environment.
struct ProgramInference {
  FreshSupply fresh;
  InferOptions options;
  Scope top;
  std::vector<Var> constants;  // prelude effects, in order
  TypeEnv gamma;
  Expr expr;
  InferResult result;
  std::vector<std::pair<Definition, Scheme>> definitions;
};

ProgramInference infer_program(const Program& program, InferOptions options);

// Environment and scope contributed by prelude declarations.
void declare(const Decl& decl, Inferencer& inferencer, Scope& top, std::vector<Var>& constants,
             TypeEnv& gamma);

}  // namespace efl
