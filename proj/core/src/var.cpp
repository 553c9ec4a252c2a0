#include "efl/var.hpp"

#include <fmt/format.h>

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace efl {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kType: return "typ";
    case Kind::kEffect: return "eff";
    case Kind::kExpr: return "expr";
    case Kind::kProp: return "prop";
  }
  return "?";
}

const std::string* intern_name(std::string_view text) {
  static std::mutex mutex;
  static std::unordered_map<std::string_view, std::unique_ptr<std::string>> pool;
  std::lock_guard lock(mutex);
  auto it = pool.find(text);
  if (it != pool.end()) return it->second.get();
  auto owned = std::make_unique<std::string>(text);
  const std::string* result = owned.get();
  pool.emplace(*result, std::move(owned));
  return result;
}

std::string_view Var::text() const {
  if (name != nullptr) return *name;
  return "?";
}

Var FreshSupply::named(Kind kind, std::string_view name) {
  if (next_ >= kRenameBase) throw std::length_error("fresh name supply exhausted");
  return Var{next_++, kind, intern_name(name)};
}

Var FreshSupply::effect() {
  std::uint64_t id = next_;
  return named(Kind::kEffect, fmt::format("'e{}", id));
}

Var FreshSupply::prop() {
  std::uint64_t id = next_;
  return named(Kind::kProp, fmt::format("p{}", id));
}

}  // namespace efl
