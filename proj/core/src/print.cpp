#include "efl/print.hpp"

#include <fmt/format.h>

namespace efl {

void Printer::reserve_free(const std::set<Var>& free) {
  for (const auto& v : free)
    if (!bound_.count(v)) taken_.insert(std::string(v.text()));
}

const std::string& Printer::bind(const Var& v) {
  auto it = bound_.find(v);
  if (it != bound_.end()) return it->second;
  std::string name;
  do {
    std::size_t n = next_letter_++;
    name = std::string(1, static_cast<char>('a' + n % 26));
    if (n >= 26) name += std::to_string(n / 26);
  } while (taken_.count(name));
  taken_.insert(name);
  return bound_.emplace(v, name).first->second;
}

std::string Printer::name_of(const Var& v) const {
  auto it = bound_.find(v);
  return it == bound_.end() ? std::string(v.text()) : it->second;
}

std::string Printer::effect_body(const Effect& e) {
  if (e.is_pure()) return "pure";
  std::string out;
  bool first = true;
  for (const auto& [v, g] : e.atoms()) {
    if (!first) out += " \\/ ";
    first = false;
    out += name_of(v);
    if (!g.is_top()) {
      out += " ? ";
      out += to_string(g);
    }
  }
  return out;
}

std::string Printer::effect(const Effect& e) {
  if (e.is_pure()) return "[]";
  return "[" + effect_body(e) + "]";
}

void Printer::type_into(const Type& t, std::string& out, bool parenthesize) {
  switch (t.tag()) {
    case Type::Tag::kVar: out += name_of(t.var()); return;
    case Type::Tag::kArrow:
      if (parenthesize) out += '(';
      type_into(t.dom(), out, true);
      out += t.effect().is_pure() ? " -> " : " ->" + effect(t.effect()) + " ";
      type_into(t.cod(), out, false);
      if (parenthesize) out += ')';
      return;
    case Type::Tag::kForall: {
      if (parenthesize) out += '(';
      const std::string& name = bind(t.binder());
      out += fmt::format("forall {} {}. ", kind_name(t.binder().kind), name);
      type_into(t.body(), out, false);
      if (parenthesize) out += ')';
      return;
    }
  }
}

std::string Printer::type(const Type& t) {
  reserve_free(free_vars(t));
  std::string out;
  type_into(t, out, false);
  return out;
}

std::string Printer::constraint(const Constraint& c) {
  return effect_body(c.lhs) + " <= " + effect_body(c.rhs);
}

std::string Printer::constraints(const ConstraintSet& omega) {
  std::string out;
  bool first = true;
  for (const auto& c : omega) {
    if (!first) out += ", ";
    first = false;
    out += constraint(c);
  }
  return out;
}

void Printer::order_vars(const Type& t, std::vector<Var>& order, std::set<Var>& seen) const {
  switch (t.tag()) {
    case Type::Tag::kVar:
      if (seen.insert(t.var()).second) order.push_back(t.var());
      return;
    case Type::Tag::kArrow:
      order_vars(t.dom(), order, seen);
      for (const auto& [v, g] : t.effect().atoms())
        if (seen.insert(v).second) order.push_back(v);
      order_vars(t.cod(), order, seen);
      return;
    case Type::Tag::kForall: order_vars(t.body(), order, seen); return;
  }
}

std::string Printer::scheme(const Scheme& s) {
  std::set<Var> free;
  collect_free_vars(s, free);
  reserve_free(free);
  std::set<Var> bound(s.bound.begin(), s.bound.end());
  std::vector<Var> order;
  std::set<Var> seen;
  order_vars(s.body, order, seen);
  for (const auto& c : s.constraints) {
    for (const auto& [v, g] : c.lhs.atoms())
      if (seen.insert(v).second) order.push_back(v);
    for (const auto& [v, g] : c.rhs.atoms())
      if (seen.insert(v).second) order.push_back(v);
  }
  for (const auto& v : s.bound)
    if (seen.insert(v).second) order.push_back(v);
  std::vector<std::string> names;
  for (const auto& v : order)
    if (bound.count(v)) names.push_back(bind(v));

  std::string out;
  if (!names.empty() || !s.constraints.empty()) {
    out += "forall";
    for (const auto& n : names) out += " " + n;
    if (!s.constraints.empty()) out += " [" + constraints(s.constraints) + "]";
    out += " => ";
  }
  type_into(s.body, out, false);
  return out;
}

std::string to_string(const Effect& e) { return Printer().effect(e); }
std::string to_string(const Type& t) { return Printer().type(t); }
std::string to_string(const Constraint& c) { return Printer().constraint(c); }
std::string to_string(const ConstraintSet& omega) { return Printer().constraints(omega); }
std::string to_string(const Scheme& s) { return Printer().scheme(s); }

}  // namespace efl
