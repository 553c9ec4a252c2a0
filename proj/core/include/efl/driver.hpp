#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efl/infer.hpp"
#include "efl/parser.hpp"
#include "efl/solver.hpp"

namespace efl {

struct CheckOptions {
  GenMode mode = GenMode::kConstrained;
  bool verify = false;
  bool dump_cert = false;
  bool dump_formula = false;
  bool simplify = true;
  std::size_t max_generalized = std::size_t{1} << 16;
};

// Everything computed for one program: inference, closure of generated
// variables, the discharged formula and a witness if one exists.
struct Analysis {
  ProgramInference inference;
  Closure closure;
  ConstraintSet closed_constraints;
  Formula discharged;  // phi_Omega
  Formula total;       // phi and phi_Omega
  std::optional<Valuation> model;
};

Analysis analyze(const Program& program, const CheckOptions& options);

// The derivation checked three ways: as inferred under the returned
// constraints, closed under no constraints, and with guards erased.
CheckResult verify(const Analysis& analysis);

// A scheme closed, erased under the witness and prepared for display.
Scheme display_scheme(const Scheme& scheme, const Subst& closure, const Valuation& rho,
                      bool simplify);

enum class Status { kOk, kTypeError, kUnsat, kSyntaxError, kVerifyFailed };

struct DefinitionReport {
  std::string name;
  std::string scheme;
};

struct CheckReport {
  Status status = Status::kOk;
  std::vector<DefinitionReport> definitions;
  std::optional<std::string> result;  // "type ! effect" of a trailing expression
  std::string failing_definition;
  std::vector<std::string> diagnostics;
  std::string formula;
  std::string witness;
  std::string certificate;

  // 0 ok, 1 type error or unsatisfiable, 2 syntax or scope error,
  // 3 certificate verification failure.
  int exit_code() const;
  std::string render() const;
};

CheckReport check_source(std::string_view text, const CheckOptions& options,
                         std::string_view filename = "<input>");
CheckReport cmd_check(const std::string& path, const CheckOptions& options);

// Interactive session: declarations, definitions and expressions are
// checked one input at a time against an incremental solver.
class ReplSession {
 public:
  explicit ReplSession(CheckOptions options);

  struct Reply {
    bool ok = true;
    std::string text;
  };

  Reply handle(std::string_view input);
  bool finished() const { return finished_; }

 private:
  Reply command(std::string_view input);
  Reply chunk(std::string_view input);
  std::string show_scheme(const Scheme& scheme, const Valuation& rho) const;

  CheckOptions options_;
  FreshSupply fresh_;
  Inferencer inferencer_;
  ScopeEnv scope_;
  Scope top_;
  std::vector<Var> constants_;
  TypeEnv gamma_;
  SolverSession solver_;
  ConstraintSet live_;
  bool finished_ = false;
};

}  // namespace efl
