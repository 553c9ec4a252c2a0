#include "efl/certificate.hpp"

#include <fmt/format.h>

#include "efl/print.hpp"

namespace efl {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kVar: return "Var";
    case Rule::kAbs: return "Abs";
    case Rule::kApp: return "App";
    case Rule::kTypeAbs: return "TAbs";
    case Rule::kEffAbs: return "EAbs";
    case Rule::kTypeApp: return "TApp";
    case Rule::kEffApp: return "EApp";
    case Rule::kLet: return "Let";
    case Rule::kSub: return "Sub";
  }
  return "?";
}

namespace {

Cert make(CertNode node) { return std::make_shared<const CertNode>(std::move(node)); }

}  // namespace

Cert cert_var(Subst inst) { return make({Rule::kVar, std::move(inst), {}, {}, {}, {}, {}}); }
Cert cert_abs(Type param, Cert body) {
  return make({Rule::kAbs, {}, std::move(param), {}, {}, {}, {std::move(body)}});
}
Cert cert_app(Cert fn, Cert arg) {
  return make({Rule::kApp, {}, {}, {}, {}, {}, {std::move(fn), std::move(arg)}});
}
Cert cert_type_abs(Cert body) { return make({Rule::kTypeAbs, {}, {}, {}, {}, {}, {std::move(body)}}); }
Cert cert_eff_abs(Cert body) { return make({Rule::kEffAbs, {}, {}, {}, {}, {}, {std::move(body)}}); }
Cert cert_type_app(Type arg, Cert fn) {
  return make({Rule::kTypeApp, {}, std::move(arg), {}, {}, {}, {std::move(fn)}});
}
Cert cert_eff_app(Effect arg, Cert fn) {
  return make({Rule::kEffApp, {}, {}, std::move(arg), {}, {}, {std::move(fn)}});
}
Cert cert_let(std::vector<Var> gen, ConstraintSet constraints, Cert bound, Cert body) {
  return make({Rule::kLet, {}, {}, {}, std::move(gen), std::move(constraints),
               {std::move(bound), std::move(body)}});
}
Cert cert_sub(Cert inner, Type type, Effect effect) {
  return make({Rule::kSub, {}, std::move(type), std::move(effect), {}, {}, {std::move(inner)}});
}

namespace {

template <typename EffectFn, typename TypeFn, typename OmegaFn>
Cert map_cert(const Cert& cert, const EffectFn& on_effect, const TypeFn& on_type,
              const OmegaFn& on_omega) {
  CertNode node = *cert;
  if (node.rule == Rule::kVar) {
    Subst inst;
    for (const auto& [v, e] : cert->inst.effects()) inst.bind(v, on_effect(e));
    for (const auto& [v, t] : cert->inst.types()) inst.bind(v, on_type(t));
    node.inst = std::move(inst);
  }
  if (node.type) node.type = on_type(*node.type);
  node.effect = on_effect(node.effect);
  node.gen_constraints = on_omega(node.gen_constraints);
  for (auto& p : node.premises) p = map_cert(p, on_effect, on_type, on_omega);
  return make(std::move(node));
}

}  // namespace

Cert substitute(const Subst& theta, const Cert& cert) {
  if (theta.empty()) return cert;
  return map_cert(
      cert, [&](const Effect& e) { return theta.apply(e); },
      [&](const Type& t) { return theta.apply(t); },
      [&](const ConstraintSet& o) { return theta.apply(o); });
}

Cert erase_guards(const Cert& cert, const Valuation& rho) {
  return map_cert(
      cert, [&](const Effect& e) { return erase_guards(e, rho); },
      [&](const Type& t) { return erase_guards(t, rho); },
      [&](const ConstraintSet& o) { return erase_guards(o, rho); });
}

void collect_props(const Cert& cert, std::set<Var>& out) {
  for (const auto& [v, e] : cert->inst.effects()) collect_props(e, out);
  if (cert->type) collect_props(*cert->type, out);
  collect_props(cert->effect, out);
  collect_props(cert->gen_constraints, out);
  for (const auto& p : cert->premises) collect_props(p, out);
}

std::size_t cert_size(const Cert& cert) {
  std::size_t n = 1;
  for (const auto& p : cert->premises) n += cert_size(p);
  return n;
}

namespace {

void dump_rec(const Expr& e, const Cert& c, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (c->rule) {
    case Rule::kSub:
      out += fmt::format("{}Sub : {} ! {}\n", pad, to_string(*c->type), to_string(c->effect));
      dump_rec(e, c->premises[0], depth + 1, out);
      return;
    case Rule::kVar: {
      std::string inst;
      for (const auto& [v, eff] : c->inst.effects()) {
        if (!inst.empty()) inst += ", ";
        inst += fmt::format("{} := {}", v.text(), to_string(eff));
      }
      out += fmt::format("{}Var {} {{{}}}\n", pad, e.var().text(), inst);
      return;
    }
    case Rule::kAbs:
      out += fmt::format("{}Abs {} : {}\n", pad, e.var().text(), to_string(*c->type));
      dump_rec(e.body(), c->premises[0], depth + 1, out);
      return;
    case Rule::kApp:
      out += fmt::format("{}App\n", pad);
      dump_rec(e.fn(), c->premises[0], depth + 1, out);
      dump_rec(e.arg(), c->premises[1], depth + 1, out);
      return;
    case Rule::kTypeAbs:
    case Rule::kEffAbs:
      out += fmt::format("{}{} {}\n", pad, rule_name(c->rule), e.var().text());
      dump_rec(e.body(), c->premises[0], depth + 1, out);
      return;
    case Rule::kTypeApp:
      out += fmt::format("{}TApp {}\n", pad, to_string(*c->type));
      dump_rec(e.fn(), c->premises[0], depth + 1, out);
      return;
    case Rule::kEffApp:
      out += fmt::format("{}EApp {}\n", pad, to_string(c->effect));
      dump_rec(e.fn(), c->premises[0], depth + 1, out);
      return;
    case Rule::kLet: {
      std::string gen;
      for (const auto& v : c->gen) gen += fmt::format("{}{}", gen.empty() ? "" : " ", v.text());
      out += fmt::format("{}Let {} gen {{{}}} [{}]\n", pad, e.var().text(), gen,
                         to_string(c->gen_constraints));
      dump_rec(e.bound(), c->premises[0], depth + 1, out);
      dump_rec(e.body(), c->premises[1], depth + 1, out);
      return;
    }
  }
}

}  // namespace

std::string dump_certificate(const Expr& e, const Cert& cert) {
  std::string out;
  dump_rec(e, cert, 0, out);
  return out;
}

}  // namespace efl
