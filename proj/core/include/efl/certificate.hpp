#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "efl/subst.hpp"
#include "efl/syntax.hpp"

namespace efl {

enum class Rule : std::uint8_t { kVar, kAbs, kApp, kTypeAbs, kEffAbs, kTypeApp, kEffApp, kLet, kSub };

std::string_view rule_name(Rule rule);

struct CertNode;
using Cert = std::shared_ptr<const CertNode>;

// Derivation tree that mirrors the expression. Sub nodes may be inserted
// anywhere and wrap the derivation of the same expression.
struct CertNode {
  Rule rule;
  Subst inst;                     // Var: scheme instantiation
  std::optional<Type> type;       // Abs: parameter; TypeApp: argument; Sub: target
  Effect effect;                  // EffApp: argument; Sub: target
  std::vector<Var> gen;           // Let: generalized variables
  ConstraintSet gen_constraints;  // Let: scheme constraints
  std::vector<Cert> premises;
};

Cert cert_var(Subst inst);
Cert cert_abs(Type param, Cert body);
Cert cert_app(Cert fn, Cert arg);
Cert cert_type_abs(Cert body);
Cert cert_eff_abs(Cert body);
Cert cert_type_app(Type arg, Cert fn);
Cert cert_eff_app(Effect arg, Cert fn);
Cert cert_let(std::vector<Var> gen, ConstraintSet constraints, Cert bound, Cert body);
Cert cert_sub(Cert inner, Type type, Effect effect);

Cert substitute(const Subst& theta, const Cert& cert);
Cert erase_guards(const Cert& cert, const Valuation& rho);
void collect_props(const Cert& cert, std::set<Var>& out);
std::size_t cert_size(const Cert& cert);

// Indented text rendering alongside the expression it derives.
std::string dump_certificate(const Expr& e, const Cert& cert);

}  // namespace efl
