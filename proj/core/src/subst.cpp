#include "efl/subst.hpp"

#include <algorithm>

namespace efl {

Subst& Subst::bind(const Var& v, Effect e) {
  collect_vars(e, range_vars_);
  effects_[v] = std::move(e);
  return *this;
}

Subst& Subst::bind(const Var& v, Type t) {
  collect_free_vars(t, range_vars_);
  types_.insert_or_assign(v, std::move(t));
  return *this;
}

Subst& Subst::bind_prop(const Var& p, Formula f) {
  props_[p] = std::move(f);
  return *this;
}

Formula Subst::apply(const Formula& f) const { return substitute_props(f, props_); }

Effect Subst::apply(const Effect& e) const {
  if (effects_.empty() && props_.empty()) return e;
  Effect out;
  for (const auto& [v, g] : e.atoms()) {
    Formula g2 = apply(g);
    auto it = effects_.find(v);
    if (it == effects_.end()) {
      out.add(v, g2);
    } else {
      for (const auto& [w, h] : it->second.atoms()) out.add(w, conj(h, g2));
    }
  }
  return out;
}

Type Subst::apply(const Type& t) const {
  if (empty()) return t;
  switch (t.tag()) {
    case Type::Tag::kVar: {
      auto it = types_.find(t.var());
      return it == types_.end() ? t : it->second;
    }
    case Type::Tag::kArrow:
      return Type::arrow(apply(t.dom()), apply(t.effect()), apply(t.cod()));
    case Type::Tag::kForall: {
      const Var& b = t.binder();
      bool captured = range_vars_.count(b) != 0;
      bool shadowed = effects_.count(b) != 0 || types_.count(b) != 0;
      if (!captured && !shadowed) return Type::forall(b, apply(t.body()));
      Subst inner = without(b);
      Var renamed = b;
      if (captured) {
        std::uint64_t top = std::max(kRenameBase, max_var_id(t.body()));
        if (!range_vars_.empty()) top = std::max(top, range_vars_.rbegin()->id);
        renamed.id = top + 1;
        if (b.kind == Kind::kEffect)
          inner.bind(b, Effect::atom(renamed));
        else
          inner.bind(b, Type::var(renamed));
      }
      return Type::forall(renamed, inner.apply(t.body()));
    }
  }
  return t;
}

Constraint Subst::apply(const Constraint& c) const { return {apply(c.lhs), apply(c.rhs)}; }

ConstraintSet Subst::apply(const ConstraintSet& omega) const {
  if (empty()) return omega;
  ConstraintSet out;
  for (const auto& c : omega) out.insert(apply(c));
  return out;
}

Scheme Subst::apply(const Scheme& s) const {
  if (empty()) return s;
  Subst inner = without(std::set<Var>(s.bound.begin(), s.bound.end()));
  std::vector<Var> bound;
  bound.reserve(s.bound.size());
  std::uint64_t top = 0;
  for (const auto& v : s.bound) {
    if (range_vars_.count(v) == 0) {
      bound.push_back(v);
      continue;
    }
    if (top == 0) {
      std::set<Var> mentioned;
      collect_vars(s.constraints, mentioned);
      top = std::max(kRenameBase, max_var_id(s.body));
      if (!mentioned.empty()) top = std::max(top, mentioned.rbegin()->id);
      if (!range_vars_.empty()) top = std::max(top, range_vars_.rbegin()->id);
      for (const auto& w : s.bound) top = std::max(top, w.id);
    }
    Var renamed = v;
    renamed.id = ++top;
    bound.push_back(renamed);
    if (v.kind == Kind::kEffect)
      inner.bind(v, Effect::atom(renamed));
    else
      inner.bind(v, Type::var(renamed));
  }
  return Scheme{std::move(bound), inner.apply(s.constraints), inner.apply(s.body)};
}

Subst Subst::without(const Var& v) const {
  if (effects_.count(v) == 0 && types_.count(v) == 0) return *this;
  return without(std::set<Var>{v});
}

Subst Subst::without(const std::set<Var>& vars) const {
  bool hit = std::any_of(vars.begin(), vars.end(), [&](const Var& v) {
    return effects_.count(v) != 0 || types_.count(v) != 0;
  });
  if (!hit) return *this;
  Subst out;
  for (const auto& [w, e] : effects_)
    if (vars.count(w) == 0) out.bind(w, e);
  for (const auto& [w, t] : types_)
    if (vars.count(w) == 0) out.bind(w, t);
  out.props_ = props_;
  return out;
}

ConstraintSet substitute_pure(const ConstraintSet& omega, const std::set<Var>& vars) {
  if (vars.empty()) return omega;
  Subst theta;
  for (const auto& v : vars) theta.bind(v, Effect::pure());
  return drop_trivial(theta.apply(omega));
}

}  // namespace efl
