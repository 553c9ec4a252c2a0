#include "efl/type.hpp"

#include <algorithm>
#include <stdexcept>

namespace efl {

Type::Type() : Type(var(Var{0, Kind::kType, nullptr})) {}

Type Type::var(const Var& v) {
  return Type(std::make_shared<const Node>(Node{Tag::kVar, v, {}, {}}));
}

Type Type::arrow(Type dom, Effect eff, Type cod) {
  return Type(std::make_shared<const Node>(
      Node{Tag::kArrow, {}, {std::move(dom), std::move(cod)}, std::move(eff)}));
}

Type Type::forall(const Var& binder, Type body) {
  return Type(std::make_shared<const Node>(Node{Tag::kForall, binder, {std::move(body)}, {}}));
}

Type::Tag Type::tag() const { return node_->tag; }

const Var& Type::var() const {
  if (node_->tag != Tag::kVar) throw std::logic_error("Type::var on non-variable");
  return node_->var;
}

const Var& Type::binder() const {
  if (node_->tag != Tag::kForall) throw std::logic_error("Type::binder on non-forall");
  return node_->var;
}

const Type& Type::dom() const {
  if (node_->tag != Tag::kArrow) throw std::logic_error("Type::dom on non-arrow");
  return node_->kids[0];
}

const Effect& Type::effect() const {
  if (node_->tag != Tag::kArrow) throw std::logic_error("Type::effect on non-arrow");
  return node_->eff;
}

const Type& Type::cod() const {
  if (node_->tag != Tag::kArrow) throw std::logic_error("Type::cod on non-arrow");
  return node_->kids[1];
}

const Type& Type::body() const {
  if (node_->tag != Tag::kForall) throw std::logic_error("Type::body on non-forall");
  return node_->kids[0];
}

int compare(const Type& a, const Type& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
  switch (a.tag()) {
    case Type::Tag::kVar:
      if (a.var() == b.var()) return 0;
      return a.var() < b.var() ? -1 : 1;
    case Type::Tag::kArrow: {
      if (int c = compare(a.dom(), b.dom()); c != 0) return c;
      if (int c = compare(a.effect(), b.effect()); c != 0) return c;
      return compare(a.cod(), b.cod());
    }
    case Type::Tag::kForall:
      if (a.binder() != b.binder()) return a.binder() < b.binder() ? -1 : 1;
      return compare(a.body(), b.body());
  }
  return 0;
}

namespace {

void free_vars_rec(const Type& t, std::set<Var>& bound, std::set<Var>& out) {
  switch (t.tag()) {
    case Type::Tag::kVar:
      if (!bound.count(t.var())) out.insert(t.var());
      return;
    case Type::Tag::kArrow:
      free_vars_rec(t.dom(), bound, out);
      for (const auto& [v, g] : t.effect().atoms())
        if (!bound.count(v)) out.insert(v);
      free_vars_rec(t.cod(), bound, out);
      return;
    case Type::Tag::kForall: {
      bool fresh = bound.insert(t.binder()).second;
      free_vars_rec(t.body(), bound, out);
      if (fresh) bound.erase(t.binder());
      return;
    }
  }
}

}  // namespace

void collect_free_vars(const Type& t, std::set<Var>& out) {
  std::set<Var> bound;
  free_vars_rec(t, bound, out);
}

std::set<Var> free_vars(const Type& t) {
  std::set<Var> out;
  collect_free_vars(t, out);
  return out;
}

void collect_props(const Type& t, std::set<Var>& out) {
  switch (t.tag()) {
    case Type::Tag::kVar: return;
    case Type::Tag::kArrow:
      collect_props(t.dom(), out);
      collect_props(t.effect(), out);
      collect_props(t.cod(), out);
      return;
    case Type::Tag::kForall: collect_props(t.body(), out); return;
  }
}

std::size_t arrow_count(const Type& t) {
  switch (t.tag()) {
    case Type::Tag::kVar: return 0;
    case Type::Tag::kArrow: return 1 + arrow_count(t.dom()) + arrow_count(t.cod());
    case Type::Tag::kForall: return arrow_count(t.body());
  }
  return 0;
}

std::uint64_t max_var_id(const Type& t) {
  switch (t.tag()) {
    case Type::Tag::kVar: return t.var().id;
    case Type::Tag::kArrow: {
      std::uint64_t m = std::max(max_var_id(t.dom()), max_var_id(t.cod()));
      if (!t.effect().is_pure()) m = std::max(m, t.effect().atoms().rbegin()->first.id);
      return m;
    }
    case Type::Tag::kForall: return std::max(t.binder().id, max_var_id(t.body()));
  }
  return 0;
}

Type erase_guards(const Type& t, const Valuation& rho) {
  switch (t.tag()) {
    case Type::Tag::kVar: return t;
    case Type::Tag::kArrow:
      return Type::arrow(erase_guards(t.dom(), rho), erase_guards(t.effect(), rho),
                         erase_guards(t.cod(), rho));
    case Type::Tag::kForall: return Type::forall(t.binder(), erase_guards(t.body(), rho));
  }
  return t;
}

int compare(const Constraint& a, const Constraint& b) {
  if (int c = compare(a.lhs, b.lhs); c != 0) return c;
  return compare(a.rhs, b.rhs);
}

Formula omega_to_formula(const ConstraintSet& omega, const Var& alpha) {
  std::vector<Formula> parts;
  for (const auto& c : omega) {
    const Formula* l = c.lhs.guard_of(alpha);
    if (l == nullptr) continue;
    parts.push_back(implies(*l, to_formula(c.rhs, alpha)));
  }
  return conj(std::move(parts));
}

ConstraintSet erase_guards(const ConstraintSet& omega, const Valuation& rho) {
  ConstraintSet out;
  for (const auto& c : omega) out.insert({erase_guards(c.lhs, rho), erase_guards(c.rhs, rho)});
  return out;
}

void collect_vars(const ConstraintSet& omega, std::set<Var>& out) {
  for (const auto& c : omega) {
    collect_vars(c.lhs, out);
    collect_vars(c.rhs, out);
  }
}

void collect_props(const ConstraintSet& omega, std::set<Var>& out) {
  for (const auto& c : omega) {
    collect_props(c.lhs, out);
    collect_props(c.rhs, out);
  }
}

ConstraintSet drop_trivial(ConstraintSet omega) {
  for (auto it = omega.begin(); it != omega.end();) {
    if (it->lhs.is_pure())
      it = omega.erase(it);
    else
      ++it;
  }
  return omega;
}

void collect_free_vars(const Scheme& s, std::set<Var>& out) {
  std::set<Var> inner;
  collect_free_vars(s.body, inner);
  collect_vars(s.constraints, inner);
  for (const auto& v : s.bound) inner.erase(v);
  out.insert(inner.begin(), inner.end());
}

}  // namespace efl
