#include <gtest/gtest.h>

#include "efl/parser.hpp"
#include "efl/syntax.hpp"

namespace efl {
namespace {

std::set<std::string> names(const std::set<Var>& vars) {
  std::set<std::string> out;
  for (const auto& v : vars) out.insert(std::string(v.text()));
  return out;
}

std::string error_of(std::string_view src) {
  try {
    parse_program(src);
  } catch (const SyntaxError& e) {
    return e.detail();
  }
  return "";
}

TEST(Parser, MinimalProgram) {
  Program p = parse_program("effect IO\ntype Int\nlet id = fn (x : Int) => x in id");
  ASSERT_EQ(p.prelude.size(), 2u);
  EXPECT_TRUE(p.definitions.empty());
  ASSERT_TRUE(p.result.has_value());
  ASSERT_EQ(p.result->tag(), Expr::Tag::kLet);
  const Expr& bound = p.result->bound();
  ASSERT_EQ(bound.tag(), Expr::Tag::kLam);
  EXPECT_EQ(bound.annotation().tag(), SynType::Tag::kVar);
  EXPECT_EQ(bound.body().var(), bound.var());
}

TEST(Parser, UnboundVariable) {
  EXPECT_NE(error_of("type Int\nlet z = fn (x : Int) => y").find("unbound"), std::string::npos);
}

TEST(Parser, RankTwoAnnotationWithWildcard) {
  Program p = parse_program(
      "effect IO DB\ntype Int\nextern f : (Int ->[IO] Int) ->[DB] Int\n"
      "let g = fn (h : forall eff a. Int ->[_] Int) => h [eff _] (f (h [eff _])) in g");
  const Expr& lam = p.result->bound();
  const SynType& ann = lam.annotation();
  ASSERT_EQ(ann.tag(), SynType::Tag::kForall);
  EXPECT_EQ(ann.binder().kind, Kind::kEffect);
  EXPECT_TRUE(has_wildcard(ann.body()));
  EXPECT_EQ(ann.body().effect().tag(), SynEffect::Tag::kWild);
}

TEST(Parser, Definitions) {
  Program p = parse_program("type Int\nextern zero : Int\nlet a = zero\nlet b = a\n");
  ASSERT_EQ(p.definitions.size(), 2u);
  EXPECT_FALSE(p.result.has_value());
  Expr e = p.desugar();
  ASSERT_EQ(e.tag(), Expr::Tag::kLet);
  EXPECT_EQ(e.body().tag(), Expr::Tag::kLet);
  EXPECT_EQ(e.body().body().var(), p.definitions[1].name);
}

TEST(Parser, LayoutContinuationLines) {
  Program p = parse_program("type Int\nextern inc : Int -> Int\nlet a = fn (x : Int) =>\n  inc x\nlet b = a\n");
  EXPECT_EQ(p.definitions.size(), 2u);
}

TEST(Parser, Errors) {
  EXPECT_NE(error_of("effect IO\ntype Int\nextern bad : Int ->[_] Int\nlet x = bad").find("wildcard"),
            std::string::npos);
  EXPECT_NE(error_of("effect IO\ntype Int\nlet x = fn (y : IO) => y").find("kind mismatch"),
            std::string::npos);
  EXPECT_NE(error_of("type Int\ntype Int\nextern z : Int\nlet x = z").find("duplicate"),
            std::string::npos);
  EXPECT_NE(error_of("effect IO\n").find("no definitions"), std::string::npos);
  EXPECT_FALSE(error_of("type Int\nlet x = fn (y : Int) => (y").empty());
}

TEST(Parser, ErrorLocations) {
  try {
    parse_program("type Int\nlet x = fn (y : Int) => z");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.loc().line, 2);
    EXPECT_EQ(e.loc().column, 25);
  }
}

TEST(Parser, Comments) {
  Program p = parse_program("-- prelude\ntype Int\nextern zero : Int -- a constant\nzero\n");
  EXPECT_TRUE(p.result.has_value());
}

TEST(FreeVars, Examples) {
  ScopeEnv scope;
  FreshSupply fresh;
  parse_chunk("effect a\ntype b Int\nextern y : Int", scope, fresh);
  SynEffect eff = SynEffect::join(SynEffect::var(*scope.find_type_level("a")), SynEffect::pure());
  EXPECT_EQ(names(free_vars(eff)), (std::set<std::string>{"a"}));

  Var bound = fresh.named(Kind::kEffect, "c");
  Var beta = *scope.find_type_level("b");
  SynType t = SynType::forall(bound, SynType::arrow(SynType::var(beta), SynEffect::var(bound),
                                                    SynType::var(beta)));
  EXPECT_EQ(names(free_vars(t)), (std::set<std::string>{"b"}));

  Expr lam = parse_expression("fn (x : Int) => y", scope, fresh);
  EXPECT_EQ(names(free_vars(lam)), (std::set<std::string>{"y", "Int"}));
}

TEST(Source, RoundTrip) {
  const char* src =
      "effect IO DB\n"
      "type Int\n"
      "extern apply : forall eff e. (Int ->[e] Int) -> Int ->[e] Int\n"
      "extern idT : forall typ t. t -> t\n"
      "let k = efun r => fn (h : forall eff a. Int ->[a \\/ _] Int) => apply [eff r \\/ IO] (h [eff DB])\n"
      "let m = tfun t => idT [type t -> t]\n"
      "let n = let z = k in z\n";
  Program p = parse_program(src);
  std::string once = to_source(p);
  Program q = parse_program(once);
  EXPECT_EQ(to_source(q), once);
  EXPECT_EQ(node_count(p.definitions[0].body), node_count(q.definitions[0].body));
  EXPECT_EQ(node_count(p.definitions[0].body), 7u);
}

}  // namespace
}  // namespace efl
