#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efl/syntax.hpp"

namespace efl {

// Names in scope. Type and effect names share one namespace; expression
// variables live in another.
class ScopeEnv {
 public:
  const Var* find_type_level(std::string_view name) const;
  const Var* find_value(std::string_view name) const;
  void push_type_level(const Var& v) { type_level_.emplace_back(std::string(v.text()), v); }
  void push_value(const Var& v) { values_.emplace_back(std::string(v.text()), v); }
  std::size_t type_level_depth() const { return type_level_.size(); }
  std::size_t value_depth() const { return values_.size(); }
  void truncate(std::size_t type_level_depth, std::size_t value_depth);

 private:
  std::vector<std::pair<std::string, Var>> type_level_;
  std::vector<std::pair<std::string, Var>> values_;
};

// One top-level chunk of source: declarations, definitions and an optional
// trailing expression, in source order.
struct ParsedChunk {
  std::vector<Decl> decls;
  std::vector<Definition> definitions;
  std::optional<Expr> result;
};

// Parses a chunk against `scope`, extending it with the declarations and
// definitions it introduces. Top-level items start in column 1; a
// definition's body continues on indented lines.
ParsedChunk parse_chunk(std::string_view text, ScopeEnv& scope, FreshSupply& fresh);

// Parses a single expression in `scope` without extending it.
Expr parse_expression(std::string_view text, const ScopeEnv& scope, FreshSupply& fresh);

Program parse_program(std::string_view text);

}  // namespace efl
