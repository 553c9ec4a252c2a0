#include "efl/solver.hpp"

#include <fmt/format.h>

#include "efl/print.hpp"

namespace efl {

Closure close_generated(const std::vector<Var>& generated, const std::vector<Var>& constants,
                        FreshSupply& fresh) {
  Closure out;
  for (const auto& beta : generated) {
    Effect e;
    for (const auto& c : constants) {
      Var p = fresh.prop();
      e.add(c, Formula::var(p));
      out.props.push_back(p);
    }
    out.theta.bind(beta, std::move(e));
  }
  return out;
}

Formula discharge_toplevel(const std::vector<Var>& constants, const ConstraintSet& omega) {
  std::set<Var> mentioned;
  collect_vars(omega, mentioned);
  for (const auto& c : constants) mentioned.erase(c);
  if (!mentioned.empty())
    throw std::logic_error(fmt::format("top-level constraints mention non-constant variable {}",
                                       mentioned.begin()->text()));
  std::vector<Formula> parts;
  for (const auto& c : constants) parts.push_back(omega_to_formula(omega, c));
  return conj(std::move(parts));
}

namespace {

bool trivially_holds(const Constraint& c) {
  for (const auto& [v, g] : c.lhs.atoms()) {
    const Formula* h = c.rhs.guard_of(v);
    if (h == nullptr) return false;
    if (!h->is_top() && compare(*h, g) != 0) return false;
  }
  return true;
}

std::size_t occurrences(const ConstraintSet& omega, const Var& v) {
  std::size_t n = 0;
  for (const auto& c : omega) n += c.lhs.mentions(v) + c.rhs.mentions(v);
  return n;
}

}  // namespace

ConstraintSet simplify_constraints(const ConstraintSet& omega, const std::set<Var>& protect) {
  ConstraintSet current;
  for (const auto& c : omega)
    if (!c.lhs.is_pure() && !trivially_holds(c)) current.insert(c);

  bool changed = true;
  while (changed) {
    changed = false;
    // Merge  a?f <= r  and  a?g <= r  into  a?(f | g) <= r.
    std::map<std::pair<Var, Effect>, Formula> merged;
    ConstraintSet next;
    for (const auto& c : current) {
      if (c.lhs.atoms().size() != 1) {
        next.insert(c);
        continue;
      }
      const auto& [v, g] = *c.lhs.atoms().begin();
      auto key = std::make_pair(v, c.rhs);
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(key, g);
      } else {
        it->second = disj(it->second, g);
        changed = true;
      }
    }
    for (const auto& [key, g] : merged) next.insert({Effect::guarded(key.first, g), key.second});
    current = std::move(next);

    for (auto it = current.begin(); it != current.end();) {
      if (it->lhs.atoms().size() == 1) {
        const Var& v = it->lhs.atoms().begin()->first;
        if (!protect.count(v) && occurrences(current, v) == 1) {
          it = current.erase(it);
          changed = true;
          continue;
        }
      }
      ++it;
    }
  }
  return current;
}

Scheme simplify_scheme(const Scheme& scheme) {
  std::set<Var> protect = free_vars(scheme.body);
  std::set<Var> bound(scheme.bound.begin(), scheme.bound.end());
  std::set<Var> mentioned;
  collect_vars(scheme.constraints, mentioned);
  for (const auto& v : mentioned)
    if (!bound.count(v)) protect.insert(v);
  Scheme out{{}, simplify_constraints(scheme.constraints, protect), scheme.body};
  std::set<Var> used = free_vars(out.body);
  collect_vars(out.constraints, used);
  for (const auto& v : scheme.bound)
    if (used.count(v)) out.bound.push_back(v);
  return out;
}

SolverSession::Verdict SolverSession::push(const Formula& phi) {
  Formula restricted = restrict(phi, fixed_);
  Formula candidate = conj(accumulated_, restricted);
  SatInstance instance(candidate);
  auto model = instance.solve();
  if (!model) return Verdict::kContradiction;
  // Every unfixed variable is probed: a new obligation can force old ones.
  // Only the value opposite to the first model needs testing, and any model
  // found on the way shows every variable it flips to be free. A model
  // built with the opposite branching phase frees most variables up front.
  std::set<Var> open;
  collect_props(candidate, open);
  std::set<Var> free;
  auto mark_free = [&](const Valuation& other) {
    auto it = model->entries().begin();
    for (const auto& [q, value] : other.entries()) {
      while (it != model->entries().end() && it->first < q) ++it;
      if (it != model->entries().end() && it->first == q && it->second != value) free.insert(q);
    }
  };
  mark_free(*instance.solve({}, true));
  for (const auto& p : open) {
    if (free.count(p)) continue;
    Valuation flip;
    flip.set(p, !(*model)(p));
    if (auto other = instance.solve(flip)) {
      mark_free(*other);
    } else {
      fixed_.set(p, (*model)(p));
    }
  }
  accumulated_ = restrict(candidate, fixed_);
  ++generation_;
  return Verdict::kAccepted;
}

std::optional<Valuation> SolverSession::witness(const Formula& extra) const {
  SatInstance instance(conj(accumulated_, restrict(extra, fixed_)));
  auto model = instance.solve();
  if (!model) return std::nullopt;
  Valuation out = minimize_model(instance, *model);
  for (const auto& [v, value] : fixed_.entries()) out.set(v, value);
  return out;
}

}  // namespace efl
