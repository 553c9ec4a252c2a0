#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "efl/var.hpp"

namespace efl {

struct Loc {
  int line = 0;
  int column = 0;
};

// Parse and scope errors.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Loc loc, const std::string& message);
  Loc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  Loc loc_;
  std::string detail_;
};

class SynEffect {
 public:
  enum class Tag : std::uint8_t { kVar, kPure, kJoin, kWild };
  struct Node;

  static SynEffect var(const Var& v);
  static SynEffect pure();
  static SynEffect wild();
  static SynEffect join(SynEffect a, SynEffect b);

  Tag tag() const;
  const Var& var() const;
  const SynEffect& lhs() const;
  const SynEffect& rhs() const;

 private:
  explicit SynEffect(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct SynEffect::Node {
  Tag tag;
  Var var;
  std::vector<SynEffect> kids;
};

class SynType {
 public:
  enum class Tag : std::uint8_t { kVar, kArrow, kForall };
  struct Node;

  static SynType var(const Var& v);
  static SynType arrow(SynType dom, SynEffect eff, SynType cod);
  static SynType forall(const Var& binder, SynType body);

  Tag tag() const;
  const Var& var() const;
  const Var& binder() const;
  const SynType& dom() const;
  const SynEffect& effect() const;
  const SynType& cod() const;
  const SynType& body() const;

 private:
  explicit SynType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct SynType::Node {
  Tag tag;
  Var var;
  std::vector<SynType> kids;
  std::vector<SynEffect> eff;
};

bool has_wildcard(const SynEffect& e);
bool has_wildcard(const SynType& t);

class Expr {
 public:
  enum class Tag : std::uint8_t { kVar, kLam, kApp, kLet, kTypeLam, kEffLam, kTypeApp, kEffApp };
  struct Node;

  static Expr var(Loc loc, const Var& x);
  static Expr lam(Loc loc, const Var& x, SynType ann, Expr body);
  static Expr app(Loc loc, Expr fn, Expr arg);
  static Expr let(Loc loc, const Var& x, Expr bound, Expr body);
  static Expr type_lam(Loc loc, const Var& a, Expr body);
  static Expr eff_lam(Loc loc, const Var& a, Expr body);
  static Expr type_app(Loc loc, Expr fn, SynType arg);
  static Expr eff_app(Loc loc, Expr fn, SynEffect arg);

  Tag tag() const;
  Loc loc() const;
  const Var& var() const;  // variable, or the binder of lam/let/type_lam/eff_lam
  const SynType& annotation() const;
  const SynType& type_arg() const;
  const SynEffect& effect_arg() const;
  const Expr& fn() const;    // app, type_app, eff_app
  const Expr& arg() const;   // app
  const Expr& bound() const; // let
  const Expr& body() const;  // lam, let, type_lam, eff_lam

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Tag tag;
  Loc loc;
  Var var;
  std::vector<Expr> kids;
  std::vector<SynType> types;
  std::vector<SynEffect> effects;
};

struct Decl {
  enum class Kind : std::uint8_t { kEffect, kType, kExtern };
  Kind kind;
  Var name;
  std::optional<SynType> type;  // externs only
  Loc loc;
};

struct Definition {
  Var name;
  Expr body;
  Loc loc;
};

struct Program {
  std::vector<Decl> prelude;
  std::vector<Definition> definitions;
  std::optional<Expr> result;
  std::uint64_t next_id = 1;

  // Nested lets ending in the result, or in the last definition's variable.
  Expr desugar() const;
};

// Free variables of every kind, including type and effect names used in
// annotations.
std::set<Var> free_vars(const Expr& e);
std::set<Var> free_vars(const SynType& t);
std::set<Var> free_vars(const SynEffect& e);

std::string to_source(const SynEffect& e);
std::string to_source(const SynType& t);
std::string to_source(const Expr& e);
std::string to_source(const Program& p);

std::size_t node_count(const Expr& e);

}  // namespace efl
