#include "efl/infer.hpp"

#include <fmt/format.h>

#include "efl/print.hpp"

namespace efl {

TypeError::TypeError(Loc loc, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", loc.line, loc.column, message)),
      loc_(loc),
      detail_(message) {}

ConstraintSet normalize(const ConstraintSet& omega) {
  ConstraintSet out;
  for (const auto& c : omega)
    for (const auto& [v, g] : c.lhs.atoms()) out.insert({Effect::guarded(v, g), c.rhs});
  return out;
}

std::pair<ConstraintSet, ConstraintSet> separate(const std::set<Var>& gen,
                                                  const ConstraintSet& omega) {
  Subst to_pure;
  for (const auto& v : gen) to_pure.bind(v, Effect::pure());
  ConstraintSet bounded, rest;
  for (const auto& c : normalize(omega)) {
    if (gen.count(c.lhs.atoms().begin()->first))
      bounded.insert(c);
    else
      rest.insert({c.lhs, to_pure.apply(c.rhs)});
  }
  return {std::move(bounded), std::move(rest)};
}

namespace {

template <typename T>
void append(std::vector<T>& to, const std::vector<T>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

ConstraintSet merge(ConstraintSet a, const ConstraintSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

}  // namespace

TrEffect Inferencer::tr_effect(const SynEffect& s) {
  switch (s.tag()) {
    case SynEffect::Tag::kVar: return {{}, Effect::atom(s.var())};
    case SynEffect::Tag::kPure: return {{}, Effect::pure()};
    case SynEffect::Tag::kWild: {
      Var v = fresh_.effect();
      return {{v}, Effect::atom(v)};
    }
    case SynEffect::Tag::kJoin: {
      TrEffect a = tr_effect(s.lhs());
      TrEffect b = tr_effect(s.rhs());
      append(a.vars, b.vars);
      return {std::move(a.vars), join(a.effect, b.effect)};
    }
  }
  return {};
}

TrType Inferencer::tr_type(const SynType& s) {
  switch (s.tag()) {
    case SynType::Tag::kVar: return {{}, {}, Type::var(s.var())};
    case SynType::Tag::kArrow: {
      TrType dom = tr_type(s.dom());
      TrEffect eff = tr_effect(s.effect());
      TrType cod = tr_type(s.cod());
      append(dom.props, cod.props);
      append(dom.vars, eff.vars);
      append(dom.vars, cod.vars);
      return {std::move(dom.props), std::move(dom.vars),
              Type::arrow(dom.type, eff.effect, cod.type)};
    }
    case SynType::Tag::kForall: {
      TrType body = tr_type(s.body());
      const Var& a = s.binder();
      if (a.kind == Kind::kType || body.vars.empty())
        return {std::move(body.props), std::move(body.vars), Type::forall(a, body.type)};
      // A wildcard under the quantifier may or may not mention it.
      Subst theta;
      std::vector<Var> vars;
      for (const auto& beta : body.vars) {
        Var p = fresh_.prop();
        Var g = fresh_.effect();
        Effect e = Effect::atom(g);
        e.add(a, Formula::var(p));
        theta.bind(beta, std::move(e));
        body.props.push_back(p);
        vars.push_back(g);
      }
      return {std::move(body.props), std::move(vars), Type::forall(a, theta.apply(body.type))};
    }
  }
  return {};
}

SubtypeResult Inferencer::subtype(const Type& lhs, const Type& rhs) {
  if (lhs.tag() != rhs.tag())
    throw ShapeMismatch(fmt::format("{} and {} have different shapes", to_string(lhs), to_string(rhs)));
  switch (lhs.tag()) {
    case Type::Tag::kVar:
      if (lhs.var() != rhs.var())
        throw ShapeMismatch(fmt::format("{} and {} differ", to_string(lhs), to_string(rhs)));
      return {{}, Formula::top()};
    case Type::Tag::kArrow: {
      SubtypeResult dom = subtype(rhs.dom(), lhs.dom());
      SubtypeResult cod = subtype(lhs.cod(), rhs.cod());
      ConstraintSet omega = merge(std::move(dom.constraints), cod.constraints);
      if (!lhs.effect().is_pure()) omega.insert({lhs.effect(), rhs.effect()});
      return {std::move(omega), conj(dom.formula, cod.formula)};
    }
    case Type::Tag::kForall: {
      const Var& a = lhs.binder();
      const Var& b = rhs.binder();
      if (a.kind != b.kind)
        throw ShapeMismatch(fmt::format("{} and {} quantify different kinds", to_string(lhs),
                                        to_string(rhs)));
      Var common = a;
      Type l = lhs.body();
      Type r = rhs.body();
      if (a != b) {
        common = a.kind == Kind::kEffect ? fresh_.effect() : fresh_.named(Kind::kType, a.text());
        Subst sl, sr;
        if (a.kind == Kind::kEffect) {
          sl.bind(a, Effect::atom(common));
          sr.bind(b, Effect::atom(common));
        } else {
          sl.bind(a, Type::var(common));
          sr.bind(b, Type::var(common));
        }
        l = sl.apply(l);
        r = sr.apply(r);
      }
      SubtypeResult inner = subtype(l, r);
      if (a.kind == Kind::kType) return inner;
      Formula phi = conj(inner.formula, omega_to_formula(inner.constraints, common));
      return {substitute_pure(inner.constraints, {common}), std::move(phi)};
    }
  }
  return {};
}

Subst Inferencer::split_vars(const std::vector<Var>& vars, std::vector<Var>& betas,
                             std::vector<Var>& gammas) {
  Subst theta;
  for (const auto& a : vars) {
    Var b = fresh_.effect();
    Var g = fresh_.effect();
    Effect e = Effect::atom(b);
    e.add(g, Formula::top());
    theta.bind(a, std::move(e));
    betas.push_back(b);
    gammas.push_back(g);
  }
  return theta;
}

InferResult Inferencer::infer(const TypeEnv& gamma, const Expr& e) {
  switch (e.tag()) {
    case Expr::Tag::kVar: {
      auto it = gamma.find(e.var());
      if (it == gamma.end())
        throw TypeError(e.loc(), fmt::format("unbound variable '{}'", e.var().text()));
      const Scheme& s = it->second;
      Subst theta;
      std::vector<Var> vars;
      for (const auto& v : s.bound) {
        Var w = fresh_.effect();
        theta.bind(v, Effect::atom(w));
        vars.push_back(w);
      }
      return {{}, std::move(vars), theta.apply(s.body), Effect::pure(),
              theta.apply(s.constraints), Formula::top(), cert_var(theta)};
    }
    case Expr::Tag::kLam: {
      TrType param = tr_type(e.annotation());
      TypeEnv inner = gamma;
      inner.insert_or_assign(e.var(), Scheme::mono(param.type));
      InferResult body = infer(inner, e.body());
      append(param.props, body.props);
      append(param.vars, body.vars);
      Type t = Type::arrow(param.type, body.effect, body.type);
      return {std::move(param.props), std::move(param.vars), std::move(t), Effect::pure(),
              std::move(body.constraints), std::move(body.formula),
              cert_abs(param.type, body.cert)};
    }
    case Expr::Tag::kApp: {
      InferResult fn = infer(gamma, e.fn());
      if (!fn.type.is_arrow())
        throw TypeError(e.fn().loc(),
                        fmt::format("expected a function, found {}", to_string(fn.type)));
      InferResult arg = infer(gamma, e.arg());
      const Type& dom = fn.type.dom();
      SubtypeResult sub;
      try {
        sub = subtype(arg.type, dom);
      } catch (const ShapeMismatch& mismatch) {
        throw TypeError(e.arg().loc(),
                        fmt::format("argument of type {} does not fit parameter type {}",
                                    to_string(arg.type), to_string(dom)));
      }
      Effect total = join(join(fn.effect, arg.effect), fn.type.effect());
      Cert cert = cert_app(cert_sub(fn.cert, Type::arrow(dom, total, fn.type.cod()), total),
                           cert_sub(arg.cert, dom, total));
      append(fn.props, arg.props);
      append(fn.vars, arg.vars);
      ConstraintSet omega = merge(merge(std::move(fn.constraints), arg.constraints), sub.constraints);
      return {std::move(fn.props), std::move(fn.vars), fn.type.cod(), std::move(total),
              std::move(omega), conj({fn.formula, arg.formula, sub.formula}), std::move(cert)};
    }
    case Expr::Tag::kTypeLam: {
      InferResult body = infer(gamma, e.body());
      if (!body.effect.is_pure()) body.constraints.insert({body.effect, Effect::pure()});
      Cert cert = cert_type_abs(cert_sub(body.cert, body.type, Effect::pure()));
      return {std::move(body.props), std::move(body.vars), Type::forall(e.var(), body.type),
              Effect::pure(), std::move(body.constraints), std::move(body.formula), std::move(cert)};
    }
    case Expr::Tag::kEffLam: {
      const Var& a = e.var();
      InferResult body = infer(gamma, e.body());
      Subst theta;
      std::vector<Var> vars;
      for (const auto& beta : body.vars) {
        Var p = fresh_.prop();
        Var g = fresh_.effect();
        Effect eff = Effect::atom(g);
        eff.add(a, Formula::var(p));
        theta.bind(beta, std::move(eff));
        body.props.push_back(p);
        vars.push_back(g);
      }
      if (!body.effect.is_pure()) body.constraints.insert({body.effect, Effect::pure()});
      ConstraintSet omega = theta.apply(body.constraints);
      Formula phi = conj(body.formula, omega_to_formula(omega, a));
      Type t = theta.apply(body.type);
      Cert cert = cert_eff_abs(cert_sub(substitute(theta, body.cert), t, Effect::pure()));
      return {std::move(body.props), std::move(vars), Type::forall(a, t), Effect::pure(),
              substitute_pure(omega, {a}), std::move(phi), std::move(cert)};
    }
    case Expr::Tag::kTypeApp: {
      InferResult fn = infer(gamma, e.fn());
      if (!fn.type.is_forall() || fn.type.binder().kind != Kind::kType)
        throw TypeError(e.loc(), fmt::format("type application to a term of type {}",
                                             to_string(fn.type)));
      TrType arg = tr_type(e.type_arg());
      Subst s;
      s.bind(fn.type.binder(), arg.type);
      append(fn.props, arg.props);
      append(fn.vars, arg.vars);
      return {std::move(fn.props), std::move(fn.vars), s.apply(fn.type.body()), fn.effect,
              std::move(fn.constraints), std::move(fn.formula), cert_type_app(arg.type, fn.cert)};
    }
    case Expr::Tag::kEffApp: {
      InferResult fn = infer(gamma, e.fn());
      if (!fn.type.is_forall() || fn.type.binder().kind != Kind::kEffect)
        throw TypeError(e.loc(), fmt::format("effect application to a term of type {}",
                                             to_string(fn.type)));
      TrEffect arg = tr_effect(e.effect_arg());
      Subst s;
      s.bind(fn.type.binder(), arg.effect);
      append(fn.vars, arg.vars);
      return {std::move(fn.props), std::move(fn.vars), s.apply(fn.type.body()), fn.effect,
              std::move(fn.constraints), std::move(fn.formula), cert_eff_app(arg.effect, fn.cert)};
    }
    case Expr::Tag::kLet: {
      LetBinding lb = bind(gamma, e.bound());
      let_schemes_.insert_or_assign(e.var(), lb.scheme);
      TypeEnv inner = gamma;
      inner.insert_or_assign(e.var(), lb.scheme);
      InferResult body = infer(inner, e.body());
      append(lb.props, body.props);
      append(lb.vars, body.vars);
      Cert cert = cert_let(lb.scheme.bound, lb.scheme.constraints, lb.bound_cert, body.cert);
      return {std::move(lb.props), std::move(lb.vars), std::move(body.type),
              std::move(body.effect), merge(std::move(lb.propagated), body.constraints),
              conj(lb.formula, body.formula), std::move(cert)};
    }
  }
  throw TypeError(e.loc(), "unknown expression form");
}

LetBinding Inferencer::bind(const TypeEnv& gamma, const Expr& bound) {
  InferResult r = infer(gamma, bound);
  if (options_.mode == GenMode::kConstrained) return bind_constrained(std::move(r), bound);
  return bind_constraint_free(std::move(r), bound);
}

LetBinding Inferencer::bind_constrained(InferResult r, const Expr&) {
  std::vector<Var> betas, gammas;
  Subst theta = split_vars(r.vars, betas, gammas);
  if (!r.effect.is_pure()) r.constraints.insert({r.effect, Effect::pure()});
  auto [bounded, rest] = separate({gammas.begin(), gammas.end()}, theta.apply(r.constraints));
  Type t = theta.apply(r.type);
  Cert cert = cert_sub(substitute(theta, r.cert), t, Effect::pure());
  return {Scheme{std::move(gammas), std::move(bounded), std::move(t)}, std::move(r.props),
          std::move(betas), std::move(rest), std::move(r.formula), std::move(cert)};
}

LetBinding Inferencer::bind_constraint_free(InferResult r, const Expr& bound) {
  std::size_t arrows = arrow_count(r.type);
  if (arrows >= 63 || (std::size_t{1} << arrows) > options_.max_generalized)
    throw TypeError(bound.loc(),
                    fmt::format("generalizing a type with {} arrows exceeds the bound of {} variables",
                                arrows, options_.max_generalized));
  std::vector<Var> gammas;
  for (std::size_t i = 0; i < (std::size_t{1} << arrows); ++i) gammas.push_back(fresh_.effect());
  Subst theta;
  std::vector<Var> betas;
  for (const auto& a : r.vars) {
    Var b = fresh_.effect();
    Effect e = Effect::atom(b);
    for (const auto& g : gammas) {
      Var p = fresh_.prop();
      e.add(g, Formula::var(p));
      r.props.push_back(p);
    }
    theta.bind(a, std::move(e));
    betas.push_back(b);
  }
  if (!r.effect.is_pure()) r.constraints.insert({r.effect, Effect::pure()});
  ConstraintSet omega = theta.apply(r.constraints);
  std::vector<Formula> parts{r.formula};
  for (const auto& g : gammas) parts.push_back(omega_to_formula(omega, g));
  Type t = theta.apply(r.type);
  Cert cert = cert_sub(substitute(theta, r.cert), t, Effect::pure());
  return {Scheme{gammas, {}, std::move(t)}, std::move(r.props), std::move(betas),
          substitute_pure(omega, {gammas.begin(), gammas.end()}), conj(std::move(parts)),
          std::move(cert)};
}

void declare(const Decl& decl, Inferencer& inferencer, Scope& top, std::vector<Var>& constants,
             TypeEnv& gamma) {
  switch (decl.kind) {
    case Decl::Kind::kEffect:
      top.insert(decl.name);
      constants.push_back(decl.name);
      return;
    case Decl::Kind::kType: top.insert(decl.name); return;
    case Decl::Kind::kExtern: {
      TrType t = inferencer.tr_type(*decl.type);
      gamma.insert_or_assign(decl.name, Scheme::mono(t.type));
      return;
    }
  }
}

ProgramInference infer_program(const Program& program, InferOptions options) {
  ProgramInference out{FreshSupply(program.next_id), options, {}, {}, {}, program.desugar(), {}, {}};
  Inferencer inferencer(out.fresh, options);
  for (const auto& d : program.prelude) declare(d, inferencer, out.top, out.constants, out.gamma);
  out.result = inferencer.infer(out.gamma, out.expr);
  for (const auto& d : program.definitions)
    out.definitions.emplace_back(d, inferencer.let_schemes().at(d.name));
  return out;
}

}  // namespace efl
