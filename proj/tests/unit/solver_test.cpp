#include <gtest/gtest.h>

#include <random>

#include "efl/declarative.hpp"
#include "efl/print.hpp"
#include "efl/solver.hpp"
#include "oracles.hpp"

namespace efl {
namespace {

class SolverTest : public ::testing::Test {
 protected:
  FreshSupply fresh;
  Var io = fresh.named(Kind::kEffect, "IO");
  Var db = fresh.named(Kind::kEffect, "DB");
  Var a = fresh.named(Kind::kEffect, "a");
  Var p = fresh.named(Kind::kProp, "p");
  Var q = fresh.named(Kind::kProp, "q");
  Formula P = Formula::var(p);
  Formula Q = Formula::var(q);
  Formula notP = implies(Formula::var(p), Formula::bottom());

  Effect E(std::initializer_list<Var> vars) {
    Effect e;
    for (const auto& v : vars) e.add(v, Formula::top());
    return e;
  }
};

TEST_F(SolverTest, SatExamples) {
  auto top = sat(Formula::top());
  ASSERT_TRUE(top.has_value());
  EXPECT_TRUE(top->entries().empty());
  EXPECT_FALSE(sat(Formula::make_and({P, Formula::make_implies(P, Formula::bottom())})).has_value());
  auto m = sat(conj(implies(P, Q), P));
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE((*m)(p));
  EXPECT_TRUE((*m)(q));
}

TEST_F(SolverTest, SolveUnderAssumptions) {
  SatInstance inst(disj(P, Q));
  Valuation no_p;
  no_p.set(p, false);
  auto m = inst.solve(no_p);
  ASSERT_TRUE(m.has_value());
  EXPECT_FALSE((*m)(p));
  EXPECT_TRUE((*m)(q));
  no_p.set(q, false);
  EXPECT_FALSE(inst.solve(no_p).has_value());
}

TEST_F(SolverTest, MinimizedModelsStaySatisfying) {
  std::mt19937_64 rng(3);
  std::vector<Var> props;
  for (int i = 0; i < 6; ++i) props.push_back(fresh.prop());
  for (int i = 0; i < 200; ++i) {
    Formula f = oracle::random_formula(rng, props, 4);
    SatInstance inst(f);
    auto m = inst.solve();
    if (!m) continue;
    Valuation small = minimize_model(inst, *m);
    EXPECT_TRUE(oracle::eval(f, small));
  }
}

TEST_F(SolverTest, DischargeExamples) {
  Formula bad = discharge_toplevel({io}, {{E({io}), E({})}});
  EXPECT_FALSE(sat(bad).has_value());
  EXPECT_TRUE(discharge_toplevel({io, db}, {}).is_top());
  Formula fine = discharge_toplevel({io, db}, {{E({io}), E({io, db})}});
  EXPECT_TRUE(equivalent_by_enumeration(fine, Formula::top()));
  EXPECT_THROW(discharge_toplevel({io}, {{E({a}), E({io})}}), std::logic_error);
}

TEST_F(SolverTest, DischargeBridge) {
  std::mt19937_64 rng(17);
  oracle::TermPool pool{{io, db, fresh.named(Kind::kEffect, "NET")}, {}, {}};
  std::vector<Var> constants = pool.effects;
  for (int i = 0; i < 300; ++i) {
    ConstraintSet omega;
    const int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < n; ++k)
      omega.insert({oracle::random_effect(rng, pool, 2, 0), oracle::random_effect(rng, pool, 2, 0)});
    bool by_sat = sat(discharge_toplevel(constants, omega)).has_value();
    bool by_sets = true;
    for (const auto& c : omega)
      for (const auto& [v, g] : c.lhs.atoms()) by_sets = by_sets && c.rhs.mentions(v);
    ASSERT_EQ(by_sat, by_sets) << to_string(omega);
    ASSERT_EQ(by_sat, entails({}, Valuation{}, omega)) << to_string(omega);
  }
}

TEST_F(SolverTest, SimplifyExamples) {
  EXPECT_TRUE(simplify_constraints({{E({}), E({io})}}, {}).empty());
  ConstraintSet dup{{E({a}), E({io})}, {E({a}), E({io})}};
  EXPECT_EQ(dup.size(), 1u);
  EXPECT_EQ(simplify_constraints(dup, {a}), dup);
  EXPECT_TRUE(simplify_constraints({{E({a}), E({io})}}, {}).empty());
  // Guard-differing duplicates merge.
  ConstraintSet two{{Effect::guarded(a, P), E({io})}, {Effect::guarded(a, Q), E({io})}};
  ConstraintSet merged = simplify_constraints(two, {a});
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_TRUE(equivalent_by_enumeration(*merged.begin()->lhs.guard_of(a), disj(P, Q)));
}

TEST_F(SolverTest, SimplifyPreservesEntailmentWhenAllProtected) {
  std::mt19937_64 rng(23);
  Var b = fresh.named(Kind::kEffect, "b");
  oracle::TermPool pool{{io, a, b}, {p, q}, {}};
  for (int i = 0; i < 300; ++i) {
    ConstraintSet omega;
    for (int k = 0; k < 3; ++k)
      omega.insert({oracle::random_effect(rng, pool, 1, 0.5), oracle::random_effect(rng, pool, 2, 0.5)});
    ConstraintSet s = simplify_constraints(omega, {io, a, b});
    for (const auto& rho : oracle::all_valuations(pool.props)) {
      ASSERT_TRUE(entails(omega, rho, s)) << to_string(omega);
      ASSERT_TRUE(entails(s, rho, omega)) << to_string(omega);
    }
    // Dropping unprotected variables keeps discharge satisfiability.
    ConstraintSet loose = simplify_constraints(omega, {io});
    Closure cl = close_generated({a, b}, {io}, fresh);
    bool before = sat(discharge_toplevel({io}, cl.theta.apply(omega))).has_value();
    bool after = sat(discharge_toplevel({io}, cl.theta.apply(loose))).has_value();
    ASSERT_EQ(before, after) << to_string(omega);
  }
}

TEST_F(SolverTest, SessionExamples) {
  SolverSession s;
  EXPECT_EQ(s.push(Formula::top()), SolverSession::Verdict::kAccepted);
  EXPECT_TRUE(s.fixed().entries().empty());

  SolverSession t;
  EXPECT_EQ(t.push(P), SolverSession::Verdict::kAccepted);
  std::uint64_t gen = t.generation();
  Formula acc = t.accumulated();
  EXPECT_EQ(t.push(notP), SolverSession::Verdict::kContradiction);
  EXPECT_EQ(t.generation(), gen);
  EXPECT_EQ(t.accumulated(), acc);

  SolverSession u;
  EXPECT_EQ(u.push(disj(P, Q)), SolverSession::Verdict::kAccepted);
  EXPECT_TRUE(u.fixed().entries().empty());
  EXPECT_EQ(u.push(notP), SolverSession::Verdict::kAccepted);
  ASSERT_TRUE(u.fixed().contains(p));
  ASSERT_TRUE(u.fixed().contains(q));
  EXPECT_FALSE(u.fixed()(p));
  EXPECT_TRUE(u.fixed()(q));
  auto w = u.witness();
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE((*w)(q));
}

TEST_F(SolverTest, SessionReplayAgreesWithBatch) {
  std::mt19937_64 rng(41);
  std::vector<Var> props;
  for (int i = 0; i < 6; ++i) props.push_back(fresh.prop());
  for (int run = 0; run < 60; ++run) {
    SolverSession s;
    std::vector<Formula> accepted;
    for (int step = 0; step < 6; ++step) {
      Formula f = oracle::random_formula(rng, props, 2);
      std::vector<Formula> trial = accepted;
      trial.push_back(f);
      bool batch = oracle::truth_table_sat(conj(trial)).has_value();
      bool incremental = s.push(f) == SolverSession::Verdict::kAccepted;
      ASSERT_EQ(batch, incremental);
      if (incremental) accepted.push_back(f);
      for (const auto& [v, value] : s.fixed().entries()) {
        Valuation flip;
        flip.set(v, !value);
        EXPECT_FALSE(SatInstance(conj(accepted)).solve(flip).has_value());
      }
    }
  }
}

}  // namespace
}  // namespace efl
