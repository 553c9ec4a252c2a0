#include "efl/effect.hpp"

namespace efl {

Effect Effect::atom(const Var& v) { return guarded(v, Formula::top()); }

Effect Effect::guarded(const Var& v, const Formula& g) {
  Effect e;
  e.add(v, g);
  return e;
}

const Formula* Effect::guard_of(const Var& v) const {
  auto it = atoms_.find(v);
  return it == atoms_.end() ? nullptr : &it->second;
}

void Effect::add(const Var& v, const Formula& g) {
  if (g.is_bottom()) return;
  auto [it, inserted] = atoms_.emplace(v, g);
  if (!inserted) it->second = disj(it->second, g);
}

Effect join(const Effect& a, const Effect& b) {
  if (a.is_pure()) return b;
  if (b.is_pure()) return a;
  Effect out = a;
  for (const auto& [v, g] : b.atoms()) out.add(v, g);
  return out;
}

Effect guard(const Effect& e, const Formula& g) {
  if (g.is_top()) return e;
  Effect out;
  for (const auto& [v, h] : e.atoms()) out.add(v, conj(h, g));
  return out;
}

Effect erase_guards(const Effect& e, const Valuation& rho) {
  Effect out;
  for (const auto& [v, g] : e.atoms())
    if (g.evaluate(rho)) out.add(v, Formula::top());
  return out;
}

std::set<Var> erased_atoms(const Effect& e, const Valuation& rho) {
  std::set<Var> out;
  for (const auto& [v, g] : e.atoms())
    if (g.evaluate(rho)) out.insert(v);
  return out;
}

bool equal_under(const Effect& a, const Effect& b, const Valuation& rho) {
  return erased_atoms(a, rho) == erased_atoms(b, rho);
}

Formula to_formula(const Effect& e, const Var& alpha) {
  const Formula* g = e.guard_of(alpha);
  return g == nullptr ? Formula::bottom() : *g;
}

bool effects_equal(const Effect& a, const Effect& b) {
  std::set<Var> vars;
  collect_vars(a, vars);
  collect_vars(b, vars);
  for (const auto& v : vars)
    if (!equivalent_by_enumeration(to_formula(a, v), to_formula(b, v))) return false;
  return true;
}

int compare(const Effect& a, const Effect& b) {
  auto x = a.atoms().begin();
  auto y = b.atoms().begin();
  for (; x != a.atoms().end() && y != b.atoms().end(); ++x, ++y) {
    if (x->first != y->first) return x->first < y->first ? -1 : 1;
    int c = compare(x->second, y->second);
    if (c != 0) return c;
  }
  if (a.atoms().size() == b.atoms().size()) return 0;
  return a.atoms().size() < b.atoms().size() ? -1 : 1;
}

void collect_vars(const Effect& e, std::set<Var>& out) {
  for (const auto& [v, g] : e.atoms()) out.insert(v);
}

void collect_props(const Effect& e, std::set<Var>& out) {
  for (const auto& [v, g] : e.atoms()) collect_props(g, out);
}

}  // namespace efl
