#include "efl/driver.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "efl/print.hpp"

namespace efl {

Analysis analyze(const Program& program, const CheckOptions& options) {
  Analysis a{infer_program(program, InferOptions{options.mode, options.max_generalized}),
             {}, {}, Formula::top(), Formula::top(), std::nullopt};
  const auto& inf = a.inference;
  a.closure = close_generated(inf.result.vars, inf.constants, a.inference.fresh);
  ConstraintSet closed = a.closure.theta.apply(inf.result.constraints);
  if (options.simplify)
    closed = simplify_constraints(closed, {inf.constants.begin(), inf.constants.end()});
  a.closed_constraints = closed;
  a.discharged = discharge_toplevel(inf.constants, closed);
  a.total = conj(inf.result.formula, a.discharged);
  SatInstance instance(a.total);
  if (auto model = instance.solve()) a.model = minimize_model(instance, *model);
  return a;
}

CheckResult verify(const Analysis& a) {
  if (!a.model) return {false, "", "no witness to verify against", {}};
  const auto& inf = a.inference;
  const auto& r = inf.result;
  const Valuation& rho = *a.model;

  CheckContext raw{inf.top, r.constraints, rho, inf.gamma, inf.options.mode};
  raw.delta.insert(r.vars.begin(), r.vars.end());
  CheckResult first = check_certificate(raw, inf.expr, r.cert, r.type, r.effect);
  if (!first.ok) {
    first.message = "inferred derivation: " + first.message;
    return first;
  }

  const Subst& theta = a.closure.theta;
  Cert closed = substitute(theta, r.cert);
  Type closed_type = theta.apply(r.type);
  Effect closed_effect = theta.apply(r.effect);
  CheckContext top{inf.top, {}, rho, inf.gamma, inf.options.mode};
  CheckResult second = check_certificate(top, inf.expr, closed, closed_type, closed_effect);
  if (!second.ok) {
    second.message = "closed derivation: " + second.message;
    return second;
  }

  CheckContext plain{inf.top, {}, Valuation{}, inf.gamma, inf.options.mode};
  CheckResult third = check_certificate(plain, inf.expr, erase_guards(closed, rho),
                                        erase_guards(closed_type, rho),
                                        erase_guards(closed_effect, rho));
  if (!third.ok) third.message = "guard-free derivation: " + third.message;
  return third;
}

Scheme display_scheme(const Scheme& scheme, const Subst& closure, const Valuation& rho,
                      bool simplify) {
  Scheme s = closure.apply(scheme);
  Scheme erased{s.bound, drop_trivial(erase_guards(s.constraints, rho)), erase_guards(s.body, rho)};
  return simplify ? simplify_scheme(erased) : erased;
}

int CheckReport::exit_code() const {
  switch (status) {
    case Status::kOk: return 0;
    case Status::kTypeError:
    case Status::kUnsat: return 1;
    case Status::kSyntaxError: return 2;
    case Status::kVerifyFailed: return 3;
  }
  return 1;
}

std::string CheckReport::render() const {
  std::string out;
  for (const auto& d : definitions) out += fmt::format("{} : {}\n", d.name, d.scheme);
  if (result) out += fmt::format("it : {}\n", *result);
  switch (status) {
    case Status::kOk: out += "status: ok\n"; break;
    case Status::kTypeError: out += "status: type error\n"; break;
    case Status::kUnsat: out += fmt::format("status: unsatisfiable in {}\n", failing_definition); break;
    case Status::kSyntaxError: out += "status: syntax error\n"; break;
    case Status::kVerifyFailed: out += "status: certificate rejected\n"; break;
  }
  if (!witness.empty()) out += fmt::format("witness: {}\n", witness);
  if (!formula.empty()) out += fmt::format("formula: {}\n", formula);
  if (!certificate.empty()) out += "certificate:\n" + certificate;
  return out;
}

namespace {

std::string diagnostic(std::string_view file, Loc loc, std::string_view message) {
  return fmt::format("{}:{}:{}: error: {}", file, loc.line, loc.column, message);
}

}  // namespace

CheckReport check_source(std::string_view text, const CheckOptions& options,
                         std::string_view filename) {
  CheckReport report;
  Program program;
  try {
    program = parse_program(text);
  } catch (const SyntaxError& e) {
    report.status = Status::kSyntaxError;
    report.diagnostics.push_back(diagnostic(filename, e.loc(), e.detail()));
    return report;
  }

  std::optional<Analysis> analysis;
  try {
    analysis.emplace(analyze(program, options));
  } catch (const TypeError& e) {
    report.status = Status::kTypeError;
    report.diagnostics.push_back(diagnostic(filename, e.loc(), e.detail()));
    return report;
  }
  const Analysis& a = *analysis;

  if (options.dump_formula) report.formula = to_string(a.total);

  if (!a.model) {
    report.status = Status::kUnsat;
    Loc loc = program.result ? program.result->loc() : Loc{1, 1};
    report.failing_definition = "the final expression";
    for (std::size_t k = 1; k <= program.definitions.size(); ++k) {
      Program prefix = program;
      prefix.definitions.erase(prefix.definitions.begin() + static_cast<std::ptrdiff_t>(k), prefix.definitions.end());
      prefix.result.reset();
      if (!analyze(prefix, options).model) {
        const auto& d = program.definitions[k - 1];
        report.failing_definition = fmt::format("definition '{}'", d.name.text());
        loc = d.loc;
        break;
      }
    }
    report.diagnostics.push_back(diagnostic(
        filename, loc, fmt::format("effect constraints of {} are unsatisfiable", report.failing_definition)));
    return report;
  }

  const Valuation& rho = *a.model;
  const Subst& theta = a.closure.theta;
  for (const auto& [def, scheme] : a.inference.definitions) {
    Scheme shown = display_scheme(scheme, theta, rho, options.simplify);
    report.definitions.push_back({std::string(def.name.text()), Printer().scheme(shown)});
  }
  if (program.result) {
    const auto& r = a.inference.result;
    report.result = fmt::format("{} ! {}", to_string(erase_guards(theta.apply(r.type), rho)),
                                to_string(erase_guards(theta.apply(r.effect), rho)));
  }
  if (options.dump_formula) {
    std::string w;
    for (const auto& [v, value] : rho.entries())
      if (value) w += fmt::format("{}{}", w.empty() ? "" : " ", v.text());
    report.witness = w.empty() ? "(all false)" : w;
  }
  if (options.dump_cert)
    report.certificate =
        dump_certificate(a.inference.expr, erase_guards(substitute(theta, a.inference.result.cert), rho));
  if (options.verify) {
    CheckResult r = verify(a);
    if (!r.ok) {
      report.status = Status::kVerifyFailed;
      report.diagnostics.push_back(
          diagnostic(filename, r.loc, fmt::format("{} rule rejected: {}", r.rule, r.message)));
    }
  }
  return report;
}

CheckReport cmd_check(const std::string& path, const CheckOptions& options) {
  std::ifstream in(path);
  if (!in) {
    CheckReport report;
    report.status = Status::kSyntaxError;
    report.diagnostics.push_back(fmt::format("{}: error: cannot read file", path));
    return report;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return check_source(buffer.str(), options, path);
}

// ---- REPL

ReplSession::ReplSession(CheckOptions options)
    : options_(options), inferencer_(fresh_, InferOptions{options.mode, options.max_generalized}) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ReplSession::Reply ReplSession::handle(std::string_view input) {
  input = trim(input);
  if (input.empty()) return {};
  if (input.front() == ':') return command(input);
  return chunk(input);
}

std::string ReplSession::show_scheme(const Scheme& scheme, const Valuation& rho) const {
  return Printer().scheme(display_scheme(scheme, Subst{}, rho, options_.simplify));
}

ReplSession::Reply ReplSession::command(std::string_view input) {
  std::string_view name = input.substr(0, input.find(' '));
  std::string_view rest = trim(input.substr(name.size()));
  if (name == ":quit" || name == ":q") {
    finished_ = true;
    return {};
  }
  if (name == ":constraints") {
    std::string out;
    for (const auto& c : live_) out += to_string(c) + "\n";
    if (live_.empty()) out += "(no constraints)\n";
    std::string fixed;
    for (const auto& [v, value] : solver_.fixed().entries())
      fixed += fmt::format(" {}={}", v.text(), value ? 1 : 0);
    if (!fixed.empty()) out += "fixed:" + fixed + "\n";
    return {true, out};
  }
  if (name == ":type") {
    FreshSupply backup = fresh_;
    Reply reply;
    try {
      Expr e = parse_expression(rest, scope_, fresh_);
      LetBinding lb = inferencer_.bind(gamma_, e);
      Closure cl = close_generated(lb.vars, constants_, fresh_);
      Formula phi = conj(lb.formula, discharge_toplevel(constants_, cl.theta.apply(lb.propagated)));
      if (auto w = solver_.witness(phi)) {
        reply = {true, show_scheme(cl.theta.apply(lb.scheme), *w) + "\n"};
      } else {
        reply = {false, "error: effect constraints are unsatisfiable\n"};
      }
    } catch (const SyntaxError& e) {
      reply = {false, fmt::format("error: {}\n", e.what())};
    } catch (const TypeError& e) {
      reply = {false, fmt::format("error: {}\n", e.what())};
    }
    fresh_ = backup;
    return reply;
  }
  return {false, fmt::format("error: unknown command {}\n", name)};
}

ReplSession::Reply ReplSession::chunk(std::string_view input) {
  const std::size_t type_depth = scope_.type_level_depth();
  const std::size_t value_depth = scope_.value_depth();
  ParsedChunk pc;
  try {
    pc = parse_chunk(input, scope_, fresh_);
  } catch (const SyntaxError& e) {
    scope_.truncate(type_depth, value_depth);
    return {false, fmt::format("error: {}\n", e.what())};
  }

  for (const auto& d : pc.decls) declare(d, inferencer_, top_, constants_, gamma_);

  std::string out;
  std::vector<Var> accepted;
  auto fail = [&](const std::string& message) {
    scope_.truncate(type_depth, value_depth);
    for (const auto& d : pc.decls) {
      if (d.kind == Decl::Kind::kExtern)
        scope_.push_value(d.name);
      else
        scope_.push_type_level(d.name);
    }
    for (const auto& v : accepted) scope_.push_value(v);
    return Reply{false, out + "error: " + message + "\n"};
  };

  for (const auto& def : pc.definitions) {
    LetBinding lb;
    try {
      lb = inferencer_.bind(gamma_, def.body);
    } catch (const TypeError& e) {
      return fail(e.what());
    }
    Closure cl = close_generated(lb.vars, constants_, fresh_);
    ConstraintSet closed = cl.theta.apply(lb.propagated);
    Formula phi = conj(lb.formula, discharge_toplevel(constants_, closed));
    if (solver_.push(phi) == SolverSession::Verdict::kContradiction)
      return fail(fmt::format("effect constraints of '{}' are unsatisfiable", def.name.text()));
    Scheme scheme = cl.theta.apply(lb.scheme);
    gamma_.insert_or_assign(def.name, scheme);
    live_.insert(closed.begin(), closed.end());
    accepted.push_back(def.name);
    out += fmt::format("{} : {}\n", def.name.text(), show_scheme(scheme, *solver_.witness()));
  }

  if (pc.result) {
    InferResult r;
    try {
      r = inferencer_.infer(gamma_, *pc.result);
    } catch (const TypeError& e) {
      return fail(e.what());
    }
    Closure cl = close_generated(r.vars, constants_, fresh_);
    ConstraintSet closed = cl.theta.apply(r.constraints);
    Formula phi = conj(r.formula, discharge_toplevel(constants_, closed));
    if (solver_.push(phi) == SolverSession::Verdict::kContradiction)
      return fail("effect constraints of the expression are unsatisfiable");
    live_.insert(closed.begin(), closed.end());
    Valuation w = *solver_.witness();
    out += fmt::format("- : {} ! {}\n", to_string(erase_guards(cl.theta.apply(r.type), w)),
                       to_string(erase_guards(cl.theta.apply(r.effect), w)));
  }
  if (pc.decls.empty() && pc.definitions.empty() && !pc.result) return {true, ""};
  return {true, out};
}

}  // namespace efl
