#include "oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

#include "efl/print.hpp"

namespace efl::oracle {

bool eval(const Formula& f, const Valuation& rho) {
  const auto& ops = f.operands();
  switch (f.op()) {
    case Formula::Op::kTrue: return true;
    case Formula::Op::kFalse: return false;
    case Formula::Op::kVar: {
      auto it = rho.entries().find(f.prop());
      return it != rho.entries().end() && it->second;
    }
    case Formula::Op::kAnd:
      for (const auto& g : ops)
        if (!eval(g, rho)) return false;
      return true;
    case Formula::Op::kOr:
      for (const auto& g : ops)
        if (eval(g, rho)) return true;
      return false;
    case Formula::Op::kImplies: return !eval(ops[0], rho) || eval(ops[1], rho);
  }
  return false;
}

std::vector<Valuation> all_valuations(const std::vector<Var>& props) {
  if (props.size() > 24) throw std::length_error("too many propositional variables");
  std::vector<Valuation> out;
  const std::uint64_t n = std::uint64_t{1} << props.size();
  out.reserve(n);
  for (std::uint64_t bits = 0; bits < n; ++bits) {
    Valuation rho;
    for (std::size_t i = 0; i < props.size(); ++i) rho.set(props[i], ((bits >> i) & 1U) != 0);
    out.push_back(std::move(rho));
  }
  return out;
}

std::optional<Valuation> truth_table_sat(const Formula& f, std::size_t max_props) {
  std::set<Var> props = props_of(f);
  if (props.size() > max_props) throw std::length_error("formula has too many variables");
  std::vector<Var> order(props.begin(), props.end());
  for (auto& rho : all_valuations(order))
    if (eval(f, rho)) return rho;
  return std::nullopt;
}

std::set<Var> present_atoms(const Effect& e, const Valuation& rho) {
  std::set<Var> out;
  for (const auto& [v, g] : e.atoms())
    if (eval(g, rho)) out.insert(v);
  return out;
}

// ---- derivation search

DerivationSearch::DerivationSearch(std::vector<Component> components, const ConstraintSet& omega,
                                   const Valuation& rho)
    : components_(std::move(components)) {
  if (components_.size() > kMaxComponents) throw std::length_error("too many components");
  masks_ = std::uint32_t{1} << components_.size();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    guard_true_.push_back(eval(c.guard, rho));
    if (!c.guard.is_top()) guarded_.emplace_back(i, index_of(c.atom, Formula::top()));
  }
  for (const auto& c : omega) axioms_.emplace_back(mask_of(c.lhs), mask_of(c.rhs));
  table_.assign(masks_, Row{});
}

std::vector<DerivationSearch::Component> DerivationSearch::components_of(
    const ConstraintSet& omega, const std::vector<Effect>& effects) {
  std::vector<Component> out;
  auto add = [&](const Var& v, const Formula& g) {
    for (const auto& c : out)
      if (c.atom == v && c.guard == g) return;
    out.push_back({v, g});
  };
  auto visit = [&](const Effect& e) {
    for (const auto& [v, g] : e.atoms()) {
      add(v, g);
      if (!g.is_top()) add(v, Formula::top());
    }
  };
  for (const auto& c : omega) {
    visit(c.lhs);
    visit(c.rhs);
  }
  for (const auto& e : effects) visit(e);
  return out;
}

std::size_t DerivationSearch::index_of(const Var& atom, const Formula& guard) const {
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (components_[i].atom == atom && components_[i].guard == guard) return i;
  throw std::out_of_range(fmt::format("no component {} ? {}", atom.text(), to_string(guard)));
}

std::uint32_t DerivationSearch::mask_of(const Effect& e) const {
  std::uint32_t m = 0;
  for (const auto& [v, g] : e.atoms()) m |= std::uint32_t{1} << index_of(v, g);
  return m;
}

Effect DerivationSearch::effect_of(std::uint32_t mask) const {
  Effect e;
  for (std::size_t i = 0; i < components_.size(); ++i)
    if ((mask >> i) & 1U) e.add(components_[i].atom, components_[i].guard);
  return e;
}

void DerivationSearch::step() {
  const std::vector<Row> old = table_;
  std::vector<Row>& next = table_;
  Row all;
  for (std::uint32_t m = 0; m < masks_; ++m) all.set(m);

  for (std::uint32_t e = 0; e < masks_; ++e) next[e].set(e);
  next[0] = all;
  for (const auto& [l, r] : axioms_) next[l].set(r);
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (!guard_true_[i]) next[std::uint32_t{1} << i] = all;

  // join on the left
  for (std::uint32_t e1 = 1; e1 < masks_; ++e1) {
    if (old[e1].none()) continue;
    for (std::uint32_t e2 = e1 + 1; e2 < masks_; ++e2) next[e1 | e2] |= old[e1] & old[e2];
  }
  // join on the right, then transitivity
  for (std::uint32_t e = 0; e < masks_; ++e) {
    Row up = old[e];
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      for (std::uint32_t g = 0; g < masks_; ++g)
        if ((g & bit) != 0 && up[g & ~bit]) up.set(g);
    }
    next[e] |= up;
    for (std::uint32_t f = 0; f < masks_; ++f)
      if (old[e][f]) next[e] |= old[f];
  }
  // guards
  for (const auto& [c, b] : guarded_) {
    next[std::uint32_t{1} << c] |= old[std::uint32_t{1} << b];
    if (guard_true_[c])
      for (std::uint32_t e = 0; e < masks_; ++e)
        if (old[e][std::uint32_t{1} << b]) next[e].set(std::uint32_t{1} << c);
  }
}

bool DerivationSearch::run(int depth) {
  table_.assign(masks_, Row{});
  bool saturated = false;
  for (int k = 0; k < depth; ++k) {
    std::vector<Row> before = table_;
    step();
    saturated = before == table_;
  }
  return saturated;
}

bool derivation_search_subeffect(const ConstraintSet& omega, const Valuation& rho,
                                 const Effect& lhs, const Effect& rhs, int depth) {
  DerivationSearch search(DerivationSearch::components_of(omega, {lhs, rhs}), omega, rho);
  search.run(depth);
  return search.holds(search.mask_of(lhs), search.mask_of(rhs));
}

GridReport run_subeffect_grid(int depth, std::size_t max_constraints) {
  FreshSupply fresh;
  Var a = fresh.named(Kind::kEffect, "a");
  Var b = fresh.named(Kind::kEffect, "b");
  Var c = fresh.named(Kind::kEffect, "c");
  Var p = fresh.named(Kind::kProp, "p");
  Var q = fresh.named(Kind::kProp, "q");

  std::vector<DerivationSearch::Component> comps{{a, Formula::top()},
                                                 {b, Formula::top()},
                                                 {c, Formula::top()},
                                                 {a, Formula::var(p)},
                                                 {b, Formula::var(q)}};
  auto eff = [&](std::initializer_list<int> idx) {
    Effect e;
    for (int i : idx) e.add(comps[i].atom, comps[i].guard);
    return e;
  };
  const std::vector<Effect> lefts{eff({0}), eff({1}), eff({2}), eff({3}), eff({4}), eff({0, 1})};
  const std::vector<Effect> rights{eff({}), eff({0}), eff({1}), eff({2}), eff({0, 1}), eff({1, 2}),
                                   eff({4})};
  std::vector<Constraint> candidates;
  for (const auto& l : lefts)
    for (const auto& r : rights)
      if (!(l == r)) candidates.push_back({l, r});

  std::vector<ConstraintSet> omegas;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> subsets = [&](std::size_t from) {
    ConstraintSet omega;
    for (std::size_t k : chosen) omega.insert(candidates[k]);
    omegas.push_back(std::move(omega));
    if (chosen.size() == max_constraints) return;
    for (std::size_t k = from; k < candidates.size(); ++k) {
      chosen.push_back(k);
      subsets(k + 1);
      chosen.pop_back();
    }
  };
  subsets(0);

  std::vector<std::uint32_t> queries;
  for (std::uint32_t m = 0; m < 32; ++m)
    if (std::popcount(m) <= 2) queries.push_back(m);

  GridReport report;
  for (const auto& rho : all_valuations({p, q})) {
    for (const auto& omega : omegas) {
      DerivationSearch search(comps, omega, rho);
      search.run(depth - 1);
      std::vector<DerivationSearch::Row> shallower = search.table();
      search.run(depth);
      if (shallower != search.table()) ++report.unsaturated;
      Judge judge(omega, rho);
      for (std::uint32_t l : queries) {
        for (std::uint32_t r : queries) {
          ++report.judgements;
          const Effect lhs = search.effect_of(l);
          const Effect rhs = search.effect_of(r);
          const bool expected = search.holds(l, r);
          if (judge.subeffect(lhs, rhs) == expected) continue;
          if (report.disagreements++ == 0)
            report.first_disagreement =
                fmt::format("omega {} rho(p,q)=({},{}) {} <= {}: oracle says {}", to_string(omega),
                            rho(p), rho(q), to_string(lhs), to_string(rhs), expected);
        }
      }
    }
  }
  return report;
}

// ---- schemes

bool scheme_instance(const Scheme& general, const Scheme& specific, const std::vector<Var>& universe) {
  std::vector<Var> atoms = universe;
  for (const auto& v : specific.bound)
    if (v.kind == Kind::kEffect && std::find(atoms.begin(), atoms.end(), v) == atoms.end())
      atoms.push_back(v);
  std::vector<Var> vars;
  for (const auto& v : general.bound)
    if (v.kind == Kind::kEffect) vars.push_back(v);
  if (atoms.size() * vars.size() > 20) throw std::length_error("instance search too large");

  const std::uint64_t per_var = std::uint64_t{1} << atoms.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= per_var;
  const Valuation none;
  for (std::uint64_t code = 0; code < total; ++code) {
    Subst theta;
    std::uint64_t rest = code;
    for (const auto& v : vars) {
      std::uint64_t choice = rest % per_var;
      rest /= per_var;
      Effect e;
      for (std::size_t k = 0; k < atoms.size(); ++k)
        if ((choice >> k) & 1U) e.add(atoms[k], Formula::top());
      theta.bind(v, std::move(e));
    }
    if (!entails(specific.constraints, none, theta.apply(general.constraints))) continue;
    if (subtype_holds(specific.constraints, none, theta.apply(general.body), specific.body))
      return true;
  }
  return false;
}

// ---- random terms

TermPool make_pool(FreshSupply& fresh, std::size_t effects, std::size_t props, std::size_t types) {
  TermPool pool;
  for (std::size_t i = 0; i < effects; ++i)
    pool.effects.push_back(fresh.named(Kind::kEffect, fmt::format("e{}", i)));
  for (std::size_t i = 0; i < props; ++i)
    pool.props.push_back(fresh.named(Kind::kProp, fmt::format("p{}", i)));
  for (std::size_t i = 0; i < types; ++i)
    pool.types.push_back(fresh.named(Kind::kType, fmt::format("T{}", i)));
  return pool;
}

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& from) {
  return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

Formula random_formula(std::mt19937_64& rng, const std::vector<Var>& props, int depth) {
  if (depth <= 0 || chance(rng, 0.25)) {
    if (props.empty() || chance(rng, 0.08)) return chance(rng, 0.5) ? Formula::top() : Formula::bottom();
    return Formula::var(pick(rng, props));
  }
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
    case 1: {
      std::vector<Formula> ops;
      const int n = std::uniform_int_distribution<int>(2, 3)(rng);
      for (int i = 0; i < n; ++i) ops.push_back(random_formula(rng, props, depth - 1));
      return chance(rng, 0.5) ? Formula::make_and(std::move(ops)) : Formula::make_or(std::move(ops));
    }
    default:
      return Formula::make_implies(random_formula(rng, props, depth - 1),
                                   random_formula(rng, props, depth - 1));
  }
}

Effect random_effect(std::mt19937_64& rng, const TermPool& pool, std::size_t max_atoms,
                     double guard_probability) {
  Effect e;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_atoms)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Formula g = chance(rng, guard_probability) ? random_formula(rng, pool.props, 1) : Formula::top();
    e.add(pick(rng, pool.effects), g);
  }
  return e;
}

std::pair<Type, Type> random_type_pair(std::mt19937_64& rng, TermPool pool, FreshSupply& fresh,
                                       int depth) {
  if (depth <= 0 || chance(rng, 0.2)) {
    Type t = Type::var(pick(rng, pool.types));
    return {t, t};
  }
  if (chance(rng, 0.25)) {
    Var a = fresh.named(Kind::kEffect, "a");
    Var b = chance(rng, 0.5) ? a : fresh.named(Kind::kEffect, "b");
    TermPool inner = pool;
    inner.effects.push_back(a);
    auto [l, r] = random_type_pair(rng, inner, fresh, depth - 1);
    if (!(a == b)) r = Subst().bind(a, Effect::atom(b)).apply(r);
    return {Type::forall(a, l), Type::forall(b, r)};
  }
  auto [dl, dr] = random_type_pair(rng, pool, fresh, depth - 1);
  auto [cl, cr] = random_type_pair(rng, pool, fresh, depth - 1);
  return {Type::arrow(dl, random_effect(rng, pool, 3, 0.5), cl),
          Type::arrow(dr, random_effect(rng, pool, 3, 0.5), cr)};
}

namespace {

SynEffect random_syn_effect(std::mt19937_64& rng, const TermPool& pool) {
  std::vector<SynEffect> parts;
  const int n = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < n; ++i) parts.push_back(SynEffect::var(pick(rng, pool.effects)));
  if (chance(rng, 0.5)) parts.push_back(SynEffect::wild());
  if (parts.empty()) return SynEffect::pure();
  SynEffect out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = SynEffect::join(out, parts[i]);
  return out;
}

}  // namespace

SynType random_syn_type(std::mt19937_64& rng, TermPool pool, FreshSupply& fresh, int depth) {
  if (depth <= 0 || chance(rng, 0.2)) return SynType::var(pick(rng, pool.types));
  if (chance(rng, 0.3)) {
    Var a = fresh.named(Kind::kEffect, "a");
    pool.effects.push_back(a);
    return SynType::forall(a, random_syn_type(rng, pool, fresh, depth - 1));
  }
  SynType dom = random_syn_type(rng, pool, fresh, depth - 1);
  SynType cod = random_syn_type(rng, pool, fresh, depth - 1);
  return SynType::arrow(dom, random_syn_effect(rng, pool), cod);
}

// ---- soundness

SoundnessOutcome end_to_end_soundness(std::string_view source, GenMode mode) {
  Program program;
  try {
    program = parse_program(source);
  } catch (const SyntaxError& e) {
    return {Verdict::kSyntaxError, e.what()};
  }
  CheckOptions options;
  options.mode = mode;
  std::optional<Analysis> analysis;
  try {
    analysis.emplace(analyze(program, options));
  } catch (const TypeError& e) {
    return {Verdict::kInferFailed, e.what()};
  }
  if (!analysis->model) return {Verdict::kUnsat, ""};
  if (!oracle::eval(analysis->total, *analysis->model))
    return {Verdict::kRejected, "witness does not satisfy the formula"};
  CheckResult r = verify(*analysis);
  if (!r.ok) return {Verdict::kRejected, fmt::format("{}: {}", r.rule, r.message)};
  return {Verdict::kChecked, ""};
}

}  // namespace efl::oracle
