#include "efl/parser.hpp"

#include <fmt/format.h>

#include <cctype>
#include <set>

namespace efl {

const Var* ScopeEnv::find_type_level(std::string_view name) const {
  for (auto it = type_level_.rbegin(); it != type_level_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

const Var* ScopeEnv::find_value(std::string_view name) const {
  for (auto it = values_.rbegin(); it != values_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

void ScopeEnv::truncate(std::size_t type_level_depth, std::size_t value_depth) {
  type_level_.resize(type_level_depth);
  values_.resize(value_depth);
}

namespace {

enum class Tok : std::uint8_t {
  kIdent, kLParen, kRParen, kLBracket, kRBracket, kColon, kEquals,
  kFatArrow, kArrow, kJoin, kUnderscore, kDot, kEof,
};

struct Token {
  Tok kind;
  std::string text;
  Loc loc;
};

const std::set<std::string_view>& keywords() {
  static const std::set<std::string_view> words = {
      "effect", "type", "extern", "let", "in", "fn", "tfun", "efun", "forall", "typ", "eff", "pure"};
  return words;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Loc loc{line, col};
    auto sym = [&](Tok kind, std::size_t len) {
      out.push_back({kind, std::string(src.substr(i, len)), loc});
      advance(len);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || (c == '_' && i + 1 < src.size() &&
                                                          (std::isalnum(static_cast<unsigned char>(src[i + 1])) || src[i + 1] == '_'))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      sym(Tok::kIdent, j - i);
      continue;
    }
    if (src.substr(i, 2) == "=>") { sym(Tok::kFatArrow, 2); continue; }
    if (src.substr(i, 2) == "->") { sym(Tok::kArrow, 2); continue; }
    if (src.substr(i, 2) == "\\/") { sym(Tok::kJoin, 2); continue; }
    switch (c) {
      case '(': sym(Tok::kLParen, 1); continue;
      case ')': sym(Tok::kRParen, 1); continue;
      case '[': sym(Tok::kLBracket, 1); continue;
      case ']': sym(Tok::kRBracket, 1); continue;
      case ':': sym(Tok::kColon, 1); continue;
      case '=': sym(Tok::kEquals, 1); continue;
      case '_': sym(Tok::kUnderscore, 1); continue;
      case '.': sym(Tok::kDot, 1); continue;
      default: throw SyntaxError(loc, fmt::format("unexpected character '{}'", c));
    }
  }
  out.push_back({Tok::kEof, "", {line, col}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, ScopeEnv& scope, FreshSupply& fresh, bool toplevel)
      : toks_(lex(text)), scope_(scope), fresh_(fresh), toplevel_(toplevel) {}

  ParsedChunk chunk() {
    ParsedChunk out;
    std::set<std::string> prelude_names;
    while (peek().kind != Tok::kEof) {
      item_start_ = pos_;
      if (out.result) throw error("unexpected input after the final expression");
      if (is_kw("effect") || is_kw("type")) {
        bool effect = is_kw("effect");
        Loc loc = next().loc;
        if (!at_ident()) throw error("expected a name");
        while (at_ident() && !at_boundary()) {
          Token name = next();
          check_prelude_name(name, prelude_names);
          Var v = fresh_.named(effect ? Kind::kEffect : Kind::kType, name.text);
          scope_.push_type_level(v);
          out.decls.push_back({effect ? Decl::Kind::kEffect : Decl::Kind::kType, v, std::nullopt, loc});
        }
      } else if (is_kw("extern")) {
        Loc loc = next().loc;
        Token name = expect_ident("extern name");
        check_prelude_name(name, prelude_names);
        expect(Tok::kColon, "':'");
        SynType t = type();
        if (has_wildcard(t)) throw SyntaxError(loc, "wildcard not allowed in extern signature");
        Var v = fresh_.named(Kind::kExpr, name.text);
        scope_.push_value(v);
        out.decls.push_back({Decl::Kind::kExtern, v, t, loc});
      } else if (is_kw("let")) {
        Loc loc = next().loc;
        Token name = expect_ident("variable name");
        expect(Tok::kEquals, "'='");
        Expr bound = expr();
        Var x = fresh_.named(Kind::kExpr, name.text);
        if (is_kw("in")) {
          next();
          std::size_t depth = scope_.value_depth();
          scope_.push_value(x);
          Expr body = expr();
          scope_.truncate(scope_.type_level_depth(), depth);
          out.result = Expr::let(loc, x, bound, body);
        } else {
          scope_.push_value(x);
          out.definitions.push_back({x, bound, loc});
        }
      } else {
        out.result = expr();
      }
      if (peek().kind != Tok::kEof && !at_boundary())
        throw error(fmt::format("unexpected '{}'", peek().text));
    }
    return out;
  }

  Expr single_expression() {
    Expr e = expr();
    if (peek().kind != Tok::kEof) throw error(fmt::format("unexpected '{}'", peek().text));
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool is_kw(std::string_view w) const { return peek().kind == Tok::kIdent && peek().text == w; }
  bool at_ident() const { return peek().kind == Tok::kIdent && !keywords().count(peek().text); }
  bool at_boundary() const { return toplevel_ && pos_ > item_start_ && peek().loc.column == 1; }

  SyntaxError error(const std::string& message) const { return SyntaxError(peek().loc, message); }

  void expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) throw error(fmt::format("expected {}", what));
    next();
  }

  Token expect_ident(std::string_view what) {
    if (!at_ident()) throw error(fmt::format("expected {}", what));
    return next();
  }

  void expect_kw(std::string_view w) {
    if (!is_kw(w)) throw error(fmt::format("expected '{}'", w));
    next();
  }

  void check_prelude_name(const Token& name, std::set<std::string>& seen) {
    if (!seen.insert(name.text).second)
      throw SyntaxError(name.loc, fmt::format("duplicate prelude name '{}'", name.text));
  }

  // ---- types and effects

  SynType type() {
    if (is_kw("forall")) {
      next();
      Kind kind;
      if (is_kw("typ")) {
        kind = Kind::kType;
      } else if (is_kw("eff")) {
        kind = Kind::kEffect;
      } else {
        throw error("expected 'typ' or 'eff' after 'forall'");
      }
      next();
      std::vector<Var> binders;
      do {
        Token name = expect_ident("a bound variable");
        binders.push_back(fresh_.named(kind, name.text));
      } while (at_ident());
      expect(Tok::kDot, "'.'");
      std::size_t depth = scope_.type_level_depth();
      for (const auto& b : binders) scope_.push_type_level(b);
      SynType body = type();
      scope_.truncate(depth, scope_.value_depth());
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = SynType::forall(*it, body);
      return body;
    }
    SynType dom = base_type();
    if (peek().kind != Tok::kArrow) return dom;
    next();
    SynEffect eff = SynEffect::pure();
    if (peek().kind == Tok::kLBracket) eff = bracket_effect();
    SynType cod = type();
    return SynType::arrow(dom, eff, cod);
  }

  SynType base_type() {
    if (peek().kind == Tok::kLParen) {
      next();
      SynType t = type();
      expect(Tok::kRParen, "')'");
      return t;
    }
    Token name = expect_ident("a type");
    return SynType::var(resolve_type_level(name, Kind::kType));
  }

  const Var& resolve_type_level(const Token& name, Kind kind) {
    const Var* v = scope_.find_type_level(name.text);
    if (v == nullptr)
      throw SyntaxError(name.loc, fmt::format("unbound {} variable '{}'",
                                              kind == Kind::kType ? "type" : "effect", name.text));
    if (v->kind != kind)
      throw SyntaxError(name.loc, fmt::format("kind mismatch: '{}' is {}, expected {}", name.text,
                                              v->kind == Kind::kType ? "a type" : "an effect",
                                              kind == Kind::kType ? "a type" : "an effect"));
    return *v;
  }

  SynEffect bracket_effect() {
    expect(Tok::kLBracket, "'['");
    if (peek().kind == Tok::kRBracket) {
      next();
      return SynEffect::pure();
    }
    SynEffect e = effect();
    expect(Tok::kRBracket, "']'");
    return e;
  }

  SynEffect effect() {
    SynEffect e = effect_term();
    while (peek().kind == Tok::kJoin) {
      next();
      e = SynEffect::join(e, effect_term());
    }
    return e;
  }

  SynEffect effect_term() {
    if (peek().kind == Tok::kUnderscore) {
      next();
      return SynEffect::wild();
    }
    if (is_kw("pure")) {
      next();
      return SynEffect::pure();
    }
    if (peek().kind == Tok::kLParen) {
      next();
      SynEffect e = effect();
      expect(Tok::kRParen, "')'");
      return e;
    }
    Token name = expect_ident("an effect");
    return SynEffect::var(resolve_type_level(name, Kind::kEffect));
  }

  // ---- expressions

  Expr expr() {
    if (at_boundary()) throw error("expected an expression");
    Loc loc = peek().loc;
    if (is_kw("fn")) {
      next();
      expect(Tok::kLParen, "'('");
      Token name = expect_ident("a parameter name");
      expect(Tok::kColon, "':'");
      SynType ann = type();
      expect(Tok::kRParen, "')'");
      expect(Tok::kFatArrow, "'=>'");
      Var x = fresh_.named(Kind::kExpr, name.text);
      std::size_t depth = scope_.value_depth();
      scope_.push_value(x);
      Expr body = expr();
      scope_.truncate(scope_.type_level_depth(), depth);
      return Expr::lam(loc, x, ann, body);
    }
    if (is_kw("let")) {
      next();
      Token name = expect_ident("variable name");
      expect(Tok::kEquals, "'='");
      Expr bound = expr();
      expect_kw("in");
      Var x = fresh_.named(Kind::kExpr, name.text);
      std::size_t depth = scope_.value_depth();
      scope_.push_value(x);
      Expr body = expr();
      scope_.truncate(scope_.type_level_depth(), depth);
      return Expr::let(loc, x, bound, body);
    }
    if (is_kw("tfun") || is_kw("efun")) {
      bool typ = is_kw("tfun");
      next();
      Token name = expect_ident("a bound variable");
      expect(Tok::kFatArrow, "'=>'");
      Var a = fresh_.named(typ ? Kind::kType : Kind::kEffect, name.text);
      std::size_t depth = scope_.type_level_depth();
      scope_.push_type_level(a);
      Expr body = expr();
      scope_.truncate(depth, scope_.value_depth());
      return typ ? Expr::type_lam(loc, a, body) : Expr::eff_lam(loc, a, body);
    }
    Expr e = postfix();
    while (!at_boundary() && (at_ident() || peek().kind == Tok::kLParen)) {
      Expr arg = postfix();
      e = Expr::app(loc, e, arg);
    }
    return e;
  }

  Expr postfix() {
    Loc loc = peek().loc;
    Expr e = atom();
    while (!at_boundary() && peek().kind == Tok::kLBracket) {
      next();
      if (is_kw("type")) {
        next();
        SynType t = type();
        expect(Tok::kRBracket, "']'");
        e = Expr::type_app(loc, e, t);
      } else if (is_kw("eff")) {
        next();
        SynEffect eff = peek().kind == Tok::kRBracket ? SynEffect::pure() : effect();
        expect(Tok::kRBracket, "']'");
        e = Expr::eff_app(loc, e, eff);
      } else {
        throw error("expected 'type' or 'eff' in instantiation");
      }
    }
    return e;
  }

  Expr atom() {
    if (peek().kind == Tok::kLParen) {
      next();
      Expr e = expr();
      expect(Tok::kRParen, "')'");
      return e;
    }
    if (!at_ident()) {
      if (peek().kind == Tok::kEof) throw error("unexpected end of input");
      throw error(fmt::format("unexpected '{}'", peek().text));
    }
    Token name = next();
    const Var* v = scope_.find_value(name.text);
    if (v == nullptr) {
      if (scope_.find_type_level(name.text) != nullptr)
        throw SyntaxError(name.loc, fmt::format("'{}' is not an expression variable", name.text));
      throw SyntaxError(name.loc, fmt::format("unbound variable '{}'", name.text));
    }
    return Expr::var(name.loc, *v);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t item_start_ = 0;
  ScopeEnv& scope_;
  FreshSupply& fresh_;
  bool toplevel_;
};

}  // namespace

ParsedChunk parse_chunk(std::string_view text, ScopeEnv& scope, FreshSupply& fresh) {
  return Parser(text, scope, fresh, true).chunk();
}

Expr parse_expression(std::string_view text, const ScopeEnv& scope, FreshSupply& fresh) {
  ScopeEnv copy = scope;
  return Parser(text, copy, fresh, false).single_expression();
}

Program parse_program(std::string_view text) {
  ScopeEnv scope;
  FreshSupply fresh;
  ParsedChunk chunk = parse_chunk(text, scope, fresh);
  Program p;
  p.prelude = std::move(chunk.decls);
  p.definitions = std::move(chunk.definitions);
  p.result = std::move(chunk.result);
  p.next_id = fresh.peek();
  if (p.definitions.empty() && !p.result)
    throw SyntaxError({1, 1}, "program has no definitions or expression");
  return p;
}

}  // namespace efl
