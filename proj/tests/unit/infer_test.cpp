#include <gtest/gtest.h>

#include <random>

#include "efl/driver.hpp"
#include "efl/print.hpp"
#include "oracles.hpp"
#include "world.hpp"

namespace efl {
namespace {

class InferTest : public ::testing::Test {
 protected:
  test::World w{"effect IO DB\ntype Int Unit"};
  Inferencer inf{w.fresh, {}};
  Var io = w.var("IO"), db = w.var("DB");
  Type int_t = Type::var(w.var("Int"));
  Valuation none;

  Effect E(std::initializer_list<Var> vars) {
    Effect e;
    for (const auto& v : vars) e.add(v, Formula::top());
    return e;
  }
};

TEST_F(InferTest, TrEffect) {
  TrEffect pure = inf.tr_effect(SynEffect::pure());
  EXPECT_TRUE(pure.vars.empty());
  EXPECT_TRUE(pure.effect.is_pure());

  TrEffect wild = inf.tr_effect(SynEffect::wild());
  ASSERT_EQ(wild.vars.size(), 1u);
  EXPECT_EQ(wild.effect, Effect::atom(wild.vars[0]));

  TrEffect mixed = inf.tr_effect(SynEffect::join(SynEffect::var(io), SynEffect::wild()));
  ASSERT_EQ(mixed.vars.size(), 1u);
  EXPECT_EQ(mixed.effect, E({io, mixed.vars[0]}));
}

TEST_F(InferTest, TrTypeUnderEffectQuantifier) {
  TrType t = inf.tr_type(w.syn("forall eff a. Int ->[_] Int"));
  ASSERT_EQ(t.props.size(), 1u);
  ASSERT_EQ(t.vars.size(), 1u);
  ASSERT_TRUE(t.type.is_forall());
  const Var& a = t.type.binder();
  Effect want = Effect::atom(t.vars[0]);
  want.add(a, Formula::var(t.props[0]));
  EXPECT_EQ(t.type.body().effect(), want);

  TrType plain = inf.tr_type(w.syn("Int ->[IO] Int"));
  EXPECT_TRUE(plain.props.empty());
  EXPECT_TRUE(plain.vars.empty());
  EXPECT_EQ(plain.type, Type::arrow(int_t, E({io}), int_t));

  TrType two = inf.tr_type(w.syn("forall eff a. (Int ->[_] Int) ->[_] Int"));
  EXPECT_EQ(two.props.size(), 2u);
  EXPECT_EQ(two.vars.size(), 2u);
}

TEST_F(InferTest, TrTypeCompletenessOnExample) {
  // Some valuation and instantiation recovers  forall a. Int ->[a] Int.
  TrType t = inf.tr_type(w.syn("forall eff a. Int ->[_] Int"));
  Type target = w.type("forall eff a. Int ->[a] Int");
  bool found = false;
  for (const auto& rho : oracle::all_valuations(t.props)) {
    for (const Effect& choice : {E({}), E({io}), E({db})}) {
      Type inst = Subst().bind(t.vars[0], choice).apply(t.type);
      if (subtype_holds({}, rho, inst, target) && subtype_holds({}, rho, target, inst)) found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(InferTest, SubtypeCases) {
  Var e1 = w.fresh.effect(), e2 = w.fresh.effect();
  SubtypeResult arrow = inf.subtype(Type::arrow(int_t, E({e1}), int_t), Type::arrow(int_t, E({e2}), int_t));
  EXPECT_EQ(arrow.constraints, (ConstraintSet{{E({e1}), E({e2})}}));
  EXPECT_TRUE(arrow.formula.is_top());

  Var a = w.fresh.named(Kind::kEffect, "a");
  Var p = w.fresh.prop(), q = w.fresh.prop();
  Type lp = Type::forall(a, Type::arrow(int_t, Effect::guarded(a, Formula::var(p)), int_t));
  Type lq = Type::forall(a, Type::arrow(int_t, Effect::guarded(a, Formula::var(q)), int_t));
  SubtypeResult quant = inf.subtype(lp, lq);
  EXPECT_TRUE(quant.constraints.empty());
  EXPECT_TRUE(equivalent_by_enumeration(quant.formula, implies(Formula::var(p), Formula::var(q))));

  SubtypeResult same = inf.subtype(int_t, int_t);
  EXPECT_TRUE(same.constraints.empty());
  EXPECT_TRUE(same.formula.is_top());

  EXPECT_THROW(inf.subtype(int_t, Type::arrow(int_t, {}, int_t)), ShapeMismatch);
  EXPECT_THROW(inf.subtype(int_t, Type::var(w.var("Unit"))), ShapeMismatch);
}

TEST_F(InferTest, Normalize) {
  Var a = w.fresh.effect(), b = w.fresh.effect(), g = w.fresh.effect();
  Var q = w.fresh.prop();
  EXPECT_EQ(normalize({{E({a}), E({g})}}), (ConstraintSet{{E({a}), E({g})}}));
  EXPECT_TRUE(normalize({{E({}), E({g})}}).empty());
  ConstraintSet joined = normalize({{guard(E({a, b}), Formula::var(q)), E({g})}});
  EXPECT_EQ(joined, (ConstraintSet{{Effect::guarded(a, Formula::var(q)), E({g})},
                                   {Effect::guarded(b, Formula::var(q)), E({g})}}));
}

TEST_F(InferTest, SeparateAndSplit) {
  std::vector<Var> betas, gammas;
  Var alpha = w.fresh.effect();
  Subst theta = inf.split_vars({alpha}, betas, gammas);
  ASSERT_EQ(betas.size(), 1u);
  ASSERT_EQ(gammas.size(), 1u);
  EXPECT_EQ(theta.apply(E({alpha})), E({betas[0], gammas[0]}));

  ConstraintSet split = theta.apply(ConstraintSet{{E({io}), E({alpha})}});
  auto [gen, prop] = separate({gammas[0]}, split);
  EXPECT_TRUE(gen.empty());
  EXPECT_EQ(prop, (ConstraintSet{{E({io}), E({betas[0]})}}));

  auto [gen2, prop2] = separate({gammas[0]}, {{E({gammas[0]}), E({io})}});
  EXPECT_EQ(gen2, (ConstraintSet{{E({gammas[0]}), E({io})}}));
  EXPECT_TRUE(prop2.empty());

  ConstraintSet omega{{E({io}), E({alpha})}};
  auto [gen3, prop3] = separate({}, omega);
  EXPECT_TRUE(gen3.empty());
  EXPECT_EQ(prop3, normalize(omega));

  std::vector<Var> none_b, none_g;
  EXPECT_TRUE(inf.split_vars({}, none_b, none_g).empty());
}

TEST_F(InferTest, VarCaseOpensScheme) {
  Var x = w.fresh.named(Kind::kExpr, "x");
  Var a = w.fresh.named(Kind::kEffect, "a");
  Scheme s{{a}, {{E({a}), E({io})}}, Type::arrow(int_t, E({a}), int_t)};
  InferResult r = inf.infer({{x, s}}, Expr::var({}, x));
  ASSERT_EQ(r.vars.size(), 1u);
  EXPECT_TRUE(r.props.empty());
  EXPECT_EQ(r.type, Type::arrow(int_t, E({r.vars[0]}), int_t));
  EXPECT_TRUE(r.effect.is_pure());
  EXPECT_EQ(r.constraints, (ConstraintSet{{E({r.vars[0]}), E({io})}}));
  EXPECT_TRUE(r.formula.is_top());
}

TEST_F(InferTest, IdentityIsPure) {
  InferResult r = inf.infer({}, w.expr("fn (x : Int) => x"));
  EXPECT_TRUE(r.vars.empty());
  EXPECT_TRUE(r.props.empty());
  EXPECT_EQ(r.type, Type::arrow(int_t, {}, int_t));
  EXPECT_TRUE(r.effect.is_pure());
  EXPECT_TRUE(r.constraints.empty());
  EXPECT_TRUE(r.formula.is_top());
}

TEST_F(InferTest, ShapeErrors) {
  test::World v{"type Int\nextern zero : Int"};
  Inferencer i2(v.fresh, {});
  TypeEnv gamma{{v.value("zero"), Scheme::mono(Type::var(v.var("Int")))}};
  EXPECT_THROW(i2.infer(gamma, v.expr("zero zero")), TypeError);
  EXPECT_THROW(i2.infer(gamma, v.expr("zero [eff pure]")), TypeError);
}

// Does the expression check with a satisfiable formula under gamma?
bool accepted(Inferencer& inf, const TypeEnv& gamma, const Expr& e, const std::vector<Var>& constants) {
  InferResult r = inf.infer(gamma, e);
  Closure cl = close_generated(r.vars, constants, inf.fresh());
  Formula phi = conj(r.formula, discharge_toplevel(constants, cl.theta.apply(r.constraints)));
  return sat(phi).has_value();
}

TEST_F(InferTest, ConstraintFreeSchemeEquivalence) {
  test::World v{
      "effect IO DB\ntype Int Unit\n"
      "extern useIO : (Int ->[IO] Int) -> Unit\nextern useDB : (Int ->[DB] Int) -> Unit\n"
      "extern usePure : (Int -> Int) -> Unit\nextern pair : Unit -> Unit -> Unit"};
  Inferencer i2(v.fresh, {GenMode::kConstraintFree});
  Var x = v.fresh.named(Kind::kExpr, "x");
  v.scope.push_value(x);
  Type t = Type::var(v.var("Int"));
  Var beta = v.fresh.effect(), gamma = v.fresh.effect();
  Scheme one{{beta}, {}, Type::arrow(t, Effect::atom(beta), t)};
  Scheme two{{beta, gamma}, {}, Type::arrow(t, join(Effect::atom(beta), Effect::atom(gamma)), t)};
  TypeEnv base;
  auto extern_type = [&](const char* text) { return Scheme::mono(v.type(text)); };
  base[v.value("useIO")] = extern_type("(Int ->[IO] Int) -> Unit");
  base[v.value("useDB")] = extern_type("(Int ->[DB] Int) -> Unit");
  base[v.value("usePure")] = extern_type("(Int -> Int) -> Unit");
  base[v.value("pair")] = extern_type("Unit -> Unit -> Unit");
  const std::vector<Var> constants{v.var("IO"), v.var("DB")};
  for (const char* use : {"useIO x", "useDB x", "usePure x", "pair (useIO x) (useDB x)",
                          "pair (usePure x) (useIO x)"}) {
    Expr e = v.expr(use);
    TypeEnv g1 = base, g2 = base;
    g1[x] = one;
    g2[x] = two;
    EXPECT_TRUE(accepted(i2, g1, e, constants)) << use;
    EXPECT_EQ(accepted(i2, g1, e, constants), accepted(i2, g2, e, constants)) << use;
  }
}

TEST_F(InferTest, LetSplittingAvoidsContradiction) {
  // The bound variable's constraint IO <= alpha is propagated as IO <= beta.
  Program p = parse_program(
      "effect IO\ntype Int\nextern k : Int ->[IO] Int\n"
      "let h = fn (g : Int ->[_] Int) => g\nlet r = h k\n");
  Analysis a = analyze(p, {});
  EXPECT_TRUE(a.model.has_value());
}

TEST_F(InferTest, GeneratedProgramsAreWellScoped) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Program p = parse_program(oracle::gen_program(seed, 15));
    for (GenMode mode : {GenMode::kConstrained, GenMode::kConstraintFree}) {
      ProgramInference pi = infer_program(p, {mode});
      const auto& r = pi.result;
      for (const auto& v : r.vars) ASSERT_FALSE(pi.top.count(v));
      Scope delta = pi.top;
      delta.insert(r.vars.begin(), r.vars.end());
      EXPECT_TRUE(well_scoped(delta, r.type)) << seed;
      EXPECT_TRUE(well_scoped(delta, r.effect)) << seed;
      EXPECT_TRUE(well_scoped(delta, r.constraints)) << seed;
      std::set<Var> props = props_of(r.formula);
      std::set<Var> gen(r.props.begin(), r.props.end());
      for (const auto& q : props) EXPECT_TRUE(gen.count(q)) << seed;
    }
  }
}

TEST_F(InferTest, NormalizePreservesEntailment) {
  std::mt19937_64 rng(5);
  Var a = w.fresh.effect(), b = w.fresh.effect();
  oracle::TermPool pool{{a, b, io}, {w.fresh.prop(), w.fresh.prop()}, {}};
  for (int i = 0; i < 200; ++i) {
    ConstraintSet omega;
    for (int k = 0; k < 2; ++k)
      omega.insert({oracle::random_effect(rng, pool, 3, 0.5), oracle::random_effect(rng, pool, 2, 0.5)});
    ConstraintSet n = normalize(omega);
    for (const auto& c : n) EXPECT_LE(c.lhs.atoms().size(), 1u);
    for (const auto& rho : oracle::all_valuations(pool.props)) {
      ASSERT_TRUE(entails(omega, rho, n)) << to_string(omega);
      ASSERT_TRUE(entails(n, rho, omega)) << to_string(omega);
    }
    auto [gen, rest] = separate({a}, omega);
    for (const auto& c : rest) EXPECT_FALSE(c.lhs.mentions(a) || c.rhs.mentions(a));
    ConstraintSet both = gen;
    both.insert(rest.begin(), rest.end());
    for (const auto& rho : oracle::all_valuations(pool.props)) ASSERT_TRUE(entails(both, rho, n));
  }
}

}  // namespace
}  // namespace efl
