#include "efl/declarative.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "efl/print.hpp"

namespace efl {

std::string_view mode_name(GenMode mode) {
  return mode == GenMode::kConstrained ? "constrained" : "constraint-free";
}

namespace {

bool subset(const std::set<Var>& a, const std::set<Var>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Subst rename_binder(const Var& from, const Var& to) {
  Subst s;
  if (from.kind == Kind::kEffect)
    s.bind(from, Effect::atom(to));
  else
    s.bind(from, Type::var(to));
  return s;
}

// Bodies of two foralls opened with a common binder.
std::pair<Type, Type> open_pair(const Type& a, const Type& b) {
  if (a.binder() == b.binder()) return {a.body(), b.body()};
  Var common = a.binder();
  common.id = std::max({kRenameBase, max_var_id(a), max_var_id(b)}) + 1;
  return {rename_binder(a.binder(), common).apply(a.body()),
          rename_binder(b.binder(), common).apply(b.body())};
}

}  // namespace

Judge::Judge(const ConstraintSet& omega, const Valuation& rho) : rho_(rho) {
  for (const auto& c : omega) {
    auto lhs = erased_atoms(c.lhs, rho);
    if (lhs.empty()) continue;
    edges_.emplace_back(std::move(lhs), erased_atoms(c.rhs, rho));
  }
}

bool Judge::subeffect(const Effect& lhs, const Effect& rhs) const {
  return subeffect(erased_atoms(lhs, rho_), erased_atoms(rhs, rho_));
}

// Least superset S of rhs closed under: (l <= r) in Omega and r within S
// puts l within S. lhs <= rhs is derivable exactly when lhs lies in S.
bool Judge::subeffect(const std::set<Var>& lhs, const std::set<Var>& rhs) const {
  if (subset(lhs, rhs)) return true;
  std::set<Var> closure = rhs;
  std::vector<bool> used(edges_.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (used[i] || !subset(edges_[i].second, closure)) continue;
      used[i] = true;
      closure.insert(edges_[i].first.begin(), edges_[i].first.end());
      changed = true;
    }
    if (subset(lhs, closure)) return true;
  }
  return false;
}

bool Judge::entails(const ConstraintSet& goal) const {
  return std::all_of(goal.begin(), goal.end(),
                     [&](const Constraint& c) { return subeffect(c.lhs, c.rhs); });
}

bool Judge::subtype(const Type& lhs, const Type& rhs) const {
  if (lhs.tag() != rhs.tag()) return false;
  switch (lhs.tag()) {
    case Type::Tag::kVar: return lhs.var() == rhs.var();
    case Type::Tag::kArrow:
      return subtype(rhs.dom(), lhs.dom()) && subtype(lhs.cod(), rhs.cod()) &&
             subeffect(lhs.effect(), rhs.effect());
    case Type::Tag::kForall: {
      if (lhs.binder().kind != rhs.binder().kind) return false;
      auto [a, b] = open_pair(lhs, rhs);
      return subtype(a, b);
    }
  }
  return false;
}

bool subeffect_holds(const ConstraintSet& omega, const Valuation& rho, const Effect& lhs,
                     const Effect& rhs) {
  return Judge(omega, rho).subeffect(lhs, rhs);
}

bool entails(const ConstraintSet& omega, const Valuation& rho, const ConstraintSet& goal) {
  return Judge(omega, rho).entails(goal);
}

bool subtype_holds(const ConstraintSet& omega, const Valuation& rho, const Type& lhs,
                   const Type& rhs) {
  return Judge(omega, rho).subtype(lhs, rhs);
}

bool types_equal_under(const Valuation& rho, const Type& a, const Type& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Type::Tag::kVar: return a.var() == b.var();
    case Type::Tag::kArrow:
      return types_equal_under(rho, a.dom(), b.dom()) && equal_under(a.effect(), b.effect(), rho) &&
             types_equal_under(rho, a.cod(), b.cod());
    case Type::Tag::kForall: {
      if (a.binder().kind != b.binder().kind) return false;
      auto [x, y] = open_pair(a, b);
      return types_equal_under(rho, x, y);
    }
  }
  return false;
}

bool well_scoped(const Scope& delta, const Effect& e) {
  return std::all_of(e.atoms().begin(), e.atoms().end(),
                     [&](const auto& atom) { return delta.count(atom.first) != 0; });
}

bool well_scoped(const Scope& delta, const Type& t) { return subset(free_vars(t), delta); }

bool well_scoped(const Scope& delta, const ConstraintSet& omega) {
  std::set<Var> vars;
  collect_vars(omega, vars);
  return subset(vars, delta);
}

namespace {

using Renaming = std::map<Var, Var>;

Var renamed(const Renaming& map, const Var& v) {
  auto it = map.find(v);
  return it == map.end() ? v : it->second;
}

void syntactic_atoms(const SynEffect& s, const Renaming& map, std::set<Var>& vars, bool& wild) {
  switch (s.tag()) {
    case SynEffect::Tag::kVar: vars.insert(renamed(map, s.var())); return;
    case SynEffect::Tag::kWild: wild = true; return;
    case SynEffect::Tag::kPure: return;
    case SynEffect::Tag::kJoin:
      syntactic_atoms(s.lhs(), map, vars, wild);
      syntactic_atoms(s.rhs(), map, vars, wild);
      return;
  }
}

bool match_effect_rec(const Scope& delta, const Valuation& rho, const SynEffect& s,
                      const Effect& e, const Renaming& map) {
  std::set<Var> named;
  bool wild = false;
  syntactic_atoms(s, map, named, wild);
  std::set<Var> actual = erased_atoms(e, rho);
  if (!subset(actual, delta) || !subset(named, delta)) return false;
  if (wild) return subset(named, actual);
  return named == actual;
}

bool match_type_rec(const Scope& delta, const Valuation& rho, const SynType& s, const Type& t,
                    Renaming& map) {
  switch (s.tag()) {
    case SynType::Tag::kVar: return t.is_var() && t.var() == renamed(map, s.var());
    case SynType::Tag::kArrow:
      return t.is_arrow() && match_type_rec(delta, rho, s.dom(), t.dom(), map) &&
             match_effect_rec(delta, rho, s.effect(), t.effect(), map) &&
             match_type_rec(delta, rho, s.cod(), t.cod(), map);
    case SynType::Tag::kForall: {
      if (!t.is_forall() || t.binder().kind != s.binder().kind) return false;
      Renaming inner = map;
      inner[s.binder()] = t.binder();
      Scope scope = delta;
      scope.insert(t.binder());
      return match_type_rec(scope, rho, s.body(), t.body(), inner);
    }
  }
  return false;
}

}  // namespace

bool match_effect(const Scope& delta, const Valuation& rho, const SynEffect& annotation,
                  const Effect& e) {
  return match_effect_rec(delta, rho, annotation, e, {});
}

bool match_type(const Scope& delta, const Valuation& rho, const SynType& annotation,
                const Type& t) {
  Renaming map;
  return match_type_rec(delta, rho, annotation, t, map);
}

// ---- certificate checking

namespace {

struct Judgement {
  Type type;
  Effect effect;
};

struct Env {
  Scope delta;
  ConstraintSet omega;
  std::shared_ptr<const Judge> judge;
  TypeEnv gamma;
};

class Checker {
 public:
  Checker(const Valuation& rho, GenMode mode) : rho_(rho), mode_(mode) {}

  std::optional<Judgement> synth(const Env& env, const Expr& e, const Cert& c) {
    switch (c->rule) {
      case Rule::kSub: return sub(env, e, c);
      case Rule::kVar: return var(env, e, c);
      case Rule::kAbs: return abs(env, e, c);
      case Rule::kApp: return app(env, e, c);
      case Rule::kTypeAbs:
      case Rule::kEffAbs: return gen_abs(env, e, c);
      case Rule::kTypeApp: return type_app(env, e, c);
      case Rule::kEffApp: return eff_app(env, e, c);
      case Rule::kLet: return let(env, e, c);
    }
    return fail(c, e, "unknown rule");
  }

  CheckResult result;

 private:
  std::nullopt_t fail(const Cert& c, const Expr& e, std::string message) {
    if (result.ok) {
      result.ok = false;
      result.rule = std::string(rule_name(c->rule));
      result.message = std::move(message);
      result.loc = e.loc();
    }
    return std::nullopt;
  }

  bool shape(const Expr& e, Expr::Tag tag, const Cert& c) {
    if (e.tag() == tag) return true;
    fail(c, e, "certificate does not follow the expression");
    return false;
  }

  std::optional<Judgement> sub(const Env& env, const Expr& e, const Cert& c) {
    auto inner = synth(env, e, c->premises.at(0));
    if (!inner) return std::nullopt;
    if (!well_scoped(env.delta, *c->type) || !well_scoped(env.delta, c->effect))
      return fail(c, e, "target type or effect is not well scoped");
    if (!env.judge->subtype(inner->type, *c->type))
      return fail(c, e, fmt::format("{} is not a subtype of {}", to_string(inner->type),
                                    to_string(*c->type)));
    if (!env.judge->subeffect(inner->effect, c->effect))
      return fail(c, e, fmt::format("{} is not a subeffect of {}", to_string(inner->effect),
                                    to_string(c->effect)));
    return Judgement{*c->type, c->effect};
  }

  std::optional<Judgement> var(const Env& env, const Expr& e, const Cert& c) {
    if (!shape(e, Expr::Tag::kVar, c)) return std::nullopt;
    auto it = env.gamma.find(e.var());
    if (it == env.gamma.end()) return fail(c, e, fmt::format("unbound variable '{}'", e.var().text()));
    const Scheme& scheme = it->second;
    const auto& inst = c->inst.effects();
    if (inst.size() != scheme.bound.size() || !c->inst.types().empty())
      return fail(c, e, "instantiation does not cover the scheme's variables");
    for (const auto& v : scheme.bound) {
      auto found = inst.find(v);
      if (found == inst.end()) return fail(c, e, "instantiation does not cover the scheme's variables");
      if (!well_scoped(env.delta, found->second))
        return fail(c, e, "instantiation is not well scoped");
    }
    if (!env.judge->entails(c->inst.apply(scheme.constraints)))
      return fail(c, e, "instantiated scheme constraints are not entailed");
    return Judgement{c->inst.apply(scheme.body), Effect::pure()};
  }

  std::optional<Judgement> abs(const Env& env, const Expr& e, const Cert& c) {
    if (!shape(e, Expr::Tag::kLam, c)) return std::nullopt;
    const Type& param = *c->type;
    if (!well_scoped(env.delta, param)) return fail(c, e, "parameter type is not well scoped");
    if (!match_type(env.delta, rho_, e.annotation(), param))
      return fail(c, e, fmt::format("parameter type {} does not match the annotation {}",
                                    to_string(param), to_source(e.annotation())));
    Env inner = env;
    inner.gamma.insert_or_assign(e.var(), Scheme::mono(param));
    auto body = synth(inner, e.body(), c->premises.at(0));
    if (!body) return std::nullopt;
    return Judgement{Type::arrow(param, body->effect, body->type), Effect::pure()};
  }

  std::optional<Judgement> app(const Env& env, const Expr& e, const Cert& c) {
    if (!shape(e, Expr::Tag::kApp, c)) return std::nullopt;
    auto fn = synth(env, e.fn(), c->premises.at(0));
    if (!fn) return std::nullopt;
    auto arg = synth(env, e.arg(), c->premises.at(1));
    if (!arg) return std::nullopt;
    if (!fn->type.is_arrow()) return fail(c, e, "function position does not have an arrow type");
    if (!types_equal_under(rho_, fn->type.dom(), arg->type))
      return fail(c, e, fmt::format("argument type {} differs from parameter type {}",
                                    to_string(arg->type), to_string(fn->type.dom())));
    const Effect& latent = fn->type.effect();
    if (!equal_under(latent, fn->effect, rho_) || !equal_under(latent, arg->effect, rho_))
      return fail(c, e, "premise effects differ from the latent effect");
    return Judgement{fn->type.cod(), latent};
  }

  std::optional<Judgement> gen_abs(const Env& env, const Expr& e, const Cert& c) {
    bool typ = c->rule == Rule::kTypeAbs;
    if (!shape(e, typ ? Expr::Tag::kTypeLam : Expr::Tag::kEffLam, c)) return std::nullopt;
    const Var& a = e.var();
    if (env.delta.count(a)) return fail(c, e, "bound variable is already in scope");
    Env inner = env;
    inner.delta.insert(a);
    auto body = synth(inner, e.body(), c->premises.at(0));
    if (!body) return std::nullopt;
    if (!erased_atoms(body->effect, rho_).empty())
      return fail(c, e, "body of a generalization is not pure");
    return Judgement{Type::forall(a, body->type), Effect::pure()};
  }

  std::optional<Judgement> type_app(const Env& env, const Expr& e, const Cert& c) {
    if (!shape(e, Expr::Tag::kTypeApp, c)) return std::nullopt;
    const Type& arg = *c->type;
    if (!well_scoped(env.delta, arg)) return fail(c, e, "type argument is not well scoped");
    if (!match_type(env.delta, rho_, e.type_arg(), arg))
      return fail(c, e, "type argument does not match the annotation");
    auto fn = synth(env, e.fn(), c->premises.at(0));
    if (!fn) return std::nullopt;
    if (!fn->type.is_forall() || fn->type.binder().kind != Kind::kType)
      return fail(c, e, "instantiated term is not type polymorphic");
    Subst s;
    s.bind(fn->type.binder(), arg);
    return Judgement{s.apply(fn->type.body()), fn->effect};
  }

  std::optional<Judgement> eff_app(const Env& env, const Expr& e, const Cert& c) {
    if (!shape(e, Expr::Tag::kEffApp, c)) return std::nullopt;
    const Effect& arg = c->effect;
    if (!well_scoped(env.delta, arg)) return fail(c, e, "effect argument is not well scoped");
    if (!match_effect(env.delta, rho_, e.effect_arg(), arg))
      return fail(c, e, "effect argument does not match the annotation");
    auto fn = synth(env, e.fn(), c->premises.at(0));
    if (!fn) return std::nullopt;
    if (!fn->type.is_forall() || fn->type.binder().kind != Kind::kEffect)
      return fail(c, e, "instantiated term is not effect polymorphic");
    Subst s;
    s.bind(fn->type.binder(), arg);
    return Judgement{s.apply(fn->type.body()), fn->effect};
  }

  std::optional<Judgement> let(const Env& env, const Expr& e, const Cert& c) {
    if (!shape(e, Expr::Tag::kLet, c)) return std::nullopt;
    Scope gen(c->gen.begin(), c->gen.end());
    if (gen.size() != c->gen.size()) return fail(c, e, "generalized variables repeat");
    for (const auto& v : gen)
      if (env.delta.count(v) || v.kind != Kind::kEffect)
        return fail(c, e, "generalized variable is not fresh");
    if (mode_ == GenMode::kConstraintFree && !c->gen_constraints.empty())
      return fail(c, e, "scheme carries constraints in constraint-free mode");
    for (const auto& k : c->gen_constraints) {
      auto lhs = erased_atoms(k.lhs, rho_);
      if (lhs.size() > 1 || !subset(lhs, gen))
        return fail(c, e, "scheme constraint does not bound a generalized variable");
    }
    Env inner = env;
    inner.delta.insert(gen.begin(), gen.end());
    if (!well_scoped(inner.delta, c->gen_constraints))
      return fail(c, e, "scheme constraints are not well scoped");
    if (!c->gen_constraints.empty()) {
      inner.omega.insert(c->gen_constraints.begin(), c->gen_constraints.end());
      inner.judge = std::make_shared<const Judge>(inner.omega, rho_);
    }
    auto bound = synth(inner, e.bound(), c->premises.at(0));
    if (!bound) return std::nullopt;
    if (!erased_atoms(bound->effect, rho_).empty())
      return fail(c, e, "let-bound expression is not pure");
    Env body_env = env;
    body_env.gamma.insert_or_assign(e.var(), Scheme{c->gen, c->gen_constraints, bound->type});
    return synth(body_env, e.body(), c->premises.at(1));
  }

  Valuation rho_;
  GenMode mode_;
};

}  // namespace

CheckResult check_certificate(const CheckContext& ctx, const Expr& e, const Cert& cert,
                              const Type& type, const Effect& effect) {
  Checker checker(ctx.rho, ctx.mode);
  Env env{ctx.delta, ctx.omega, std::make_shared<const Judge>(ctx.omega, ctx.rho), ctx.gamma};
  auto got = checker.synth(env, e, cert);
  if (!got) return checker.result;
  if (!types_equal_under(ctx.rho, got->type, type) || !equal_under(got->effect, effect, ctx.rho)) {
    CheckResult r;
    r.ok = false;
    r.rule = std::string(rule_name(cert->rule));
    r.message = fmt::format("derived {} ! {} but expected {} ! {}", to_string(got->type),
                            to_string(got->effect), to_string(type), to_string(effect));
    r.loc = e.loc();
    return r;
  }
  return {};
}

}  // namespace efl
