#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace efl {

enum class Kind : std::uint8_t { kType, kEffect, kExpr, kProp };

std::string_view kind_name(Kind kind);

// Returns a pointer that stays valid for the lifetime of the process.
const std::string* intern_name(std::string_view text);

// Identity is the id alone; the name is a display hint.
struct Var {
  std::uint64_t id = 0;
  Kind kind = Kind::kEffect;
  const std::string* name = nullptr;

  std::string_view text() const;

  friend bool operator==(const Var& a, const Var& b) { return a.id == b.id; }
  friend std::strong_ordering operator<=>(const Var& a, const Var& b) {
    return a.id <=> b.id;
  }
};

// Ids at or above this bound are reserved for binders renamed during
// capture-avoiding substitution. Supplies never reach it.
inline constexpr std::uint64_t kRenameBase = std::uint64_t{1} << 40;

// Monotone id source. One supply per run keeps output deterministic.
class FreshSupply {
 public:
  explicit FreshSupply(std::uint64_t first = 1) : next_(first) {}

  Var named(Kind kind, std::string_view name);
  Var effect();
  Var prop();
  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

}  // namespace efl
