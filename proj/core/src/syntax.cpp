#include "efl/syntax.hpp"

#include <fmt/format.h>

namespace efl {

SyntaxError::SyntaxError(Loc loc, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", loc.line, loc.column, message)),
      loc_(loc),
      detail_(message) {}

// ---- effects

SynEffect SynEffect::var(const Var& v) {
  return SynEffect(std::make_shared<const Node>(Node{Tag::kVar, v, {}}));
}
SynEffect SynEffect::pure() { return SynEffect(std::make_shared<const Node>(Node{Tag::kPure, {}, {}})); }
SynEffect SynEffect::wild() { return SynEffect(std::make_shared<const Node>(Node{Tag::kWild, {}, {}})); }
SynEffect SynEffect::join(SynEffect a, SynEffect b) {
  return SynEffect(
      std::make_shared<const Node>(Node{Tag::kJoin, {}, {std::move(a), std::move(b)}}));
}

SynEffect::Tag SynEffect::tag() const { return node_->tag; }
const Var& SynEffect::var() const { return node_->var; }
const SynEffect& SynEffect::lhs() const { return node_->kids.at(0); }
const SynEffect& SynEffect::rhs() const { return node_->kids.at(1); }

// ---- types

SynType SynType::var(const Var& v) {
  return SynType(std::make_shared<const Node>(Node{Tag::kVar, v, {}, {}}));
}
SynType SynType::arrow(SynType dom, SynEffect eff, SynType cod) {
  return SynType(std::make_shared<const Node>(
      Node{Tag::kArrow, {}, {std::move(dom), std::move(cod)}, {std::move(eff)}}));
}
SynType SynType::forall(const Var& binder, SynType body) {
  return SynType(std::make_shared<const Node>(Node{Tag::kForall, binder, {std::move(body)}, {}}));
}

SynType::Tag SynType::tag() const { return node_->tag; }
const Var& SynType::var() const { return node_->var; }
const Var& SynType::binder() const { return node_->var; }
const SynType& SynType::dom() const { return node_->kids.at(0); }
const SynEffect& SynType::effect() const { return node_->eff.at(0); }
const SynType& SynType::cod() const { return node_->kids.at(1); }
const SynType& SynType::body() const { return node_->kids.at(0); }

bool has_wildcard(const SynEffect& e) {
  switch (e.tag()) {
    case SynEffect::Tag::kWild: return true;
    case SynEffect::Tag::kJoin: return has_wildcard(e.lhs()) || has_wildcard(e.rhs());
    default: return false;
  }
}

bool has_wildcard(const SynType& t) {
  switch (t.tag()) {
    case SynType::Tag::kVar: return false;
    case SynType::Tag::kArrow:
      return has_wildcard(t.dom()) || has_wildcard(t.effect()) || has_wildcard(t.cod());
    case SynType::Tag::kForall: return has_wildcard(t.body());
  }
  return false;
}

// ---- expressions

Expr Expr::var(Loc loc, const Var& x) {
  return Expr(std::make_shared<const Node>(Node{Tag::kVar, loc, x, {}, {}, {}}));
}
Expr Expr::lam(Loc loc, const Var& x, SynType ann, Expr body) {
  return Expr(std::make_shared<const Node>(
      Node{Tag::kLam, loc, x, {std::move(body)}, {std::move(ann)}, {}}));
}
Expr Expr::app(Loc loc, Expr fn, Expr arg) {
  return Expr(std::make_shared<const Node>(
      Node{Tag::kApp, loc, {}, {std::move(fn), std::move(arg)}, {}, {}}));
}
Expr Expr::let(Loc loc, const Var& x, Expr bound, Expr body) {
  return Expr(std::make_shared<const Node>(
      Node{Tag::kLet, loc, x, {std::move(bound), std::move(body)}, {}, {}}));
}
Expr Expr::type_lam(Loc loc, const Var& a, Expr body) {
  return Expr(std::make_shared<const Node>(Node{Tag::kTypeLam, loc, a, {std::move(body)}, {}, {}}));
}
Expr Expr::eff_lam(Loc loc, const Var& a, Expr body) {
  return Expr(std::make_shared<const Node>(Node{Tag::kEffLam, loc, a, {std::move(body)}, {}, {}}));
}
Expr Expr::type_app(Loc loc, Expr fn, SynType arg) {
  return Expr(std::make_shared<const Node>(
      Node{Tag::kTypeApp, loc, {}, {std::move(fn)}, {std::move(arg)}, {}}));
}
Expr Expr::eff_app(Loc loc, Expr fn, SynEffect arg) {
  return Expr(std::make_shared<const Node>(
      Node{Tag::kEffApp, loc, {}, {std::move(fn)}, {}, {std::move(arg)}}));
}

Expr::Tag Expr::tag() const { return node_->tag; }
Loc Expr::loc() const { return node_->loc; }
const Var& Expr::var() const { return node_->var; }
const SynType& Expr::annotation() const { return node_->types.at(0); }
const SynType& Expr::type_arg() const { return node_->types.at(0); }
const SynEffect& Expr::effect_arg() const { return node_->effects.at(0); }
const Expr& Expr::fn() const { return node_->kids.at(0); }
const Expr& Expr::arg() const { return node_->kids.at(1); }
const Expr& Expr::bound() const { return node_->kids.at(0); }
const Expr& Expr::body() const {
  return node_->tag == Tag::kLet ? node_->kids.at(1) : node_->kids.at(0);
}

Expr Program::desugar() const {
  if (definitions.empty() && !result) throw SyntaxError({1, 1}, "program has no definitions or expression");
  Expr tail = result ? *result
                     : Expr::var(definitions.back().loc, definitions.back().name);
  for (auto it = definitions.rbegin(); it != definitions.rend(); ++it)
    tail = Expr::let(it->loc, it->name, it->body, tail);
  return tail;
}

// ---- free variables

namespace {

void fv_effect(const SynEffect& e, const std::set<Var>& bound, std::set<Var>& out) {
  switch (e.tag()) {
    case SynEffect::Tag::kVar:
      if (!bound.count(e.var())) out.insert(e.var());
      return;
    case SynEffect::Tag::kJoin:
      fv_effect(e.lhs(), bound, out);
      fv_effect(e.rhs(), bound, out);
      return;
    default: return;
  }
}

void fv_type(const SynType& t, std::set<Var>& bound, std::set<Var>& out) {
  switch (t.tag()) {
    case SynType::Tag::kVar:
      if (!bound.count(t.var())) out.insert(t.var());
      return;
    case SynType::Tag::kArrow:
      fv_type(t.dom(), bound, out);
      fv_effect(t.effect(), bound, out);
      fv_type(t.cod(), bound, out);
      return;
    case SynType::Tag::kForall: {
      bool added = bound.insert(t.binder()).second;
      fv_type(t.body(), bound, out);
      if (added) bound.erase(t.binder());
      return;
    }
  }
}

void fv_expr(const Expr& e, std::set<Var>& bound, std::set<Var>& out) {
  auto under = [&](const Var& x, const Expr& body) {
    bool added = bound.insert(x).second;
    fv_expr(body, bound, out);
    if (added) bound.erase(x);
  };
  switch (e.tag()) {
    case Expr::Tag::kVar:
      if (!bound.count(e.var())) out.insert(e.var());
      return;
    case Expr::Tag::kLam:
      fv_type(e.annotation(), bound, out);
      under(e.var(), e.body());
      return;
    case Expr::Tag::kApp:
      fv_expr(e.fn(), bound, out);
      fv_expr(e.arg(), bound, out);
      return;
    case Expr::Tag::kLet:
      fv_expr(e.bound(), bound, out);
      under(e.var(), e.body());
      return;
    case Expr::Tag::kTypeLam:
    case Expr::Tag::kEffLam: under(e.var(), e.body()); return;
    case Expr::Tag::kTypeApp:
      fv_expr(e.fn(), bound, out);
      fv_type(e.type_arg(), bound, out);
      return;
    case Expr::Tag::kEffApp:
      fv_expr(e.fn(), bound, out);
      fv_effect(e.effect_arg(), bound, out);
      return;
  }
}

}  // namespace

std::set<Var> free_vars(const Expr& e) {
  std::set<Var> bound, out;
  fv_expr(e, bound, out);
  return out;
}

std::set<Var> free_vars(const SynType& t) {
  std::set<Var> bound, out;
  fv_type(t, bound, out);
  return out;
}

std::set<Var> free_vars(const SynEffect& e) {
  std::set<Var> out;
  fv_effect(e, {}, out);
  return out;
}

// ---- printing

std::string to_source(const SynEffect& e) {
  switch (e.tag()) {
    case SynEffect::Tag::kVar: return std::string(e.var().text());
    case SynEffect::Tag::kPure: return "pure";
    case SynEffect::Tag::kWild: return "_";
    case SynEffect::Tag::kJoin: return to_source(e.lhs()) + " \\/ " + to_source(e.rhs());
  }
  return "";
}

namespace {

void type_src(const SynType& t, std::string& out, bool parenthesize) {
  switch (t.tag()) {
    case SynType::Tag::kVar: out += t.var().text(); return;
    case SynType::Tag::kArrow:
      if (parenthesize) out += '(';
      type_src(t.dom(), out, true);
      if (t.effect().tag() == SynEffect::Tag::kPure)
        out += " -> ";
      else
        out += " ->[" + to_source(t.effect()) + "] ";
      type_src(t.cod(), out, false);
      if (parenthesize) out += ')';
      return;
    case SynType::Tag::kForall:
      if (parenthesize) out += '(';
      out += fmt::format("forall {} {}. ", kind_name(t.binder().kind), t.binder().text());
      type_src(t.body(), out, false);
      if (parenthesize) out += ')';
      return;
  }
}

// Levels: 0 binder forms, 1 application, 2 postfix, 3 atom.
void expr_src(const Expr& e, std::string& out, int level) {
  auto open = [&](int own) {
    if (level > own) out += '(';
  };
  auto close = [&](int own) {
    if (level > own) out += ')';
  };
  switch (e.tag()) {
    case Expr::Tag::kVar: out += e.var().text(); return;
    case Expr::Tag::kLam:
      open(0);
      out += fmt::format("fn ({} : {}) => ", e.var().text(), to_source(e.annotation()));
      expr_src(e.body(), out, 0);
      close(0);
      return;
    case Expr::Tag::kLet:
      open(0);
      out += fmt::format("let {} = ", e.var().text());
      expr_src(e.bound(), out, 0);
      out += " in ";
      expr_src(e.body(), out, 0);
      close(0);
      return;
    case Expr::Tag::kTypeLam:
    case Expr::Tag::kEffLam:
      open(0);
      out += fmt::format("{} {} => ", e.tag() == Expr::Tag::kTypeLam ? "tfun" : "efun",
                         e.var().text());
      expr_src(e.body(), out, 0);
      close(0);
      return;
    case Expr::Tag::kApp:
      open(1);
      expr_src(e.fn(), out, 1);
      out += ' ';
      expr_src(e.arg(), out, 2);
      close(1);
      return;
    case Expr::Tag::kTypeApp:
      open(2);
      expr_src(e.fn(), out, 2);
      out += " [type " + to_source(e.type_arg()) + "]";
      close(2);
      return;
    case Expr::Tag::kEffApp:
      open(2);
      expr_src(e.fn(), out, 2);
      out += " [eff " + to_source(e.effect_arg()) + "]";
      close(2);
      return;
  }
}

}  // namespace

std::string to_source(const SynType& t) {
  std::string out;
  type_src(t, out, false);
  return out;
}

std::string to_source(const Expr& e) {
  std::string out;
  expr_src(e, out, 0);
  return out;
}

std::string to_source(const Program& p) {
  std::string out;
  for (const auto& d : p.prelude) {
    switch (d.kind) {
      case Decl::Kind::kEffect: out += fmt::format("effect {}\n", d.name.text()); break;
      case Decl::Kind::kType: out += fmt::format("type {}\n", d.name.text()); break;
      case Decl::Kind::kExtern:
        out += fmt::format("extern {} : {}\n", d.name.text(), to_source(*d.type));
        break;
    }
  }
  for (const auto& d : p.definitions)
    out += fmt::format("let {} = {}\n", d.name.text(), to_source(d.body));
  if (p.result) out += to_source(*p.result) + "\n";
  return out;
}

std::size_t node_count(const Expr& e) {
  switch (e.tag()) {
    case Expr::Tag::kVar: return 1;
    case Expr::Tag::kApp: return 1 + node_count(e.fn()) + node_count(e.arg());
    case Expr::Tag::kLet: return 1 + node_count(e.bound()) + node_count(e.body());
    case Expr::Tag::kTypeApp:
    case Expr::Tag::kEffApp: return 1 + node_count(e.fn());
    default: return 1 + node_count(e.body());
  }
}

}  // namespace efl
