#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "efl/certificate.hpp"

namespace efl {

using Scope = std::set<Var>;
using TypeEnv = std::map<Var, Scheme>;

enum class GenMode : std::uint8_t { kConstrained, kConstraintFree };

std::string_view mode_name(GenMode mode);

// Subeffecting, entailment and subtyping in a fixed (Omega, rho). Guards are
// erased once on construction.
class Judge {
 public:
  Judge(const ConstraintSet& omega, const Valuation& rho);

  const Valuation& rho() const { return rho_; }
  bool subeffect(const Effect& lhs, const Effect& rhs) const;
  bool subeffect(const std::set<Var>& lhs, const std::set<Var>& rhs) const;
  bool entails(const ConstraintSet& goal) const;
  bool subtype(const Type& lhs, const Type& rhs) const;

 private:
  Valuation rho_;
  std::vector<std::pair<std::set<Var>, std::set<Var>>> edges_;
};

bool subeffect_holds(const ConstraintSet& omega, const Valuation& rho, const Effect& lhs,
                     const Effect& rhs);
bool entails(const ConstraintSet& omega, const Valuation& rho, const ConstraintSet& goal);
bool subtype_holds(const ConstraintSet& omega, const Valuation& rho, const Type& lhs,
                   const Type& rhs);

// Equality after erasing guards, up to renaming of bound variables.
bool types_equal_under(const Valuation& rho, const Type& a, const Type& b);

bool well_scoped(const Scope& delta, const Effect& e);
bool well_scoped(const Scope& delta, const Type& t);
bool well_scoped(const Scope& delta, const ConstraintSet& omega);

// Does the annotation describe the internal term under rho? A wildcard
// matches any well-scoped extension of the named atoms.
bool match_effect(const Scope& delta, const Valuation& rho, const SynEffect& annotation,
                  const Effect& e);
bool match_type(const Scope& delta, const Valuation& rho, const SynType& annotation,
                const Type& t);

struct CheckContext {
  Scope delta;
  ConstraintSet omega;
  Valuation rho;
  TypeEnv gamma;
  GenMode mode = GenMode::kConstrained;
};

struct CheckResult {
  bool ok = true;
  std::string rule;  // rule of the first failing node
  std::string message;
  Loc loc;
};

// Validates `cert` as a derivation of  delta; omega |-rho e : type ! effect.
CheckResult check_certificate(const CheckContext& ctx, const Expr& e, const Cert& cert,
                              const Type& type, const Effect& effect);

}  // namespace efl
