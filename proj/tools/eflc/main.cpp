#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "efl/driver.hpp"

namespace {

void add_common(CLI::App& cmd, efl::CheckOptions& options, std::string& mode) {
  cmd.add_option("--mode", mode, "Generalization mode")
      ->check(CLI::IsMember({"constrained", "constraint-free"}))
      ->default_val("constrained");
  cmd.add_flag("--no-simplify", "Skip heuristic constraint simplification")
      ->each([&](const std::string&) { options.simplify = false; });
  cmd.add_option("--max-generalized", options.max_generalized,
                 "Bound on variables generalized by a constraint-free let");
}

efl::GenMode parse_mode(const std::string& mode) {
  return mode == "constraint-free" ? efl::GenMode::kConstraintFree : efl::GenMode::kConstrained;
}

int run_repl(const efl::CheckOptions& options) {
  efl::ReplSession session(options);
  std::string line;
  std::cout << "> " << std::flush;
  std::string pending;
  while (!session.finished() && std::getline(std::cin, line)) {
    // A trailing backslash continues the input on the next line.
    if (!line.empty() && line.back() == '\\') {
      line.pop_back();
      pending += line + "\n  ";
      std::cout << "| " << std::flush;
      continue;
    }
    auto reply = session.handle(pending + line);
    pending.clear();
    (reply.ok ? std::cout : std::cerr) << reply.text;
    if (session.finished()) break;
    std::cout << "> " << std::flush;
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type and effect checker with guarded effect polymorphism"};
  app.require_subcommand(1);

  efl::CheckOptions check_options;
  std::string check_mode = "constrained";
  std::string path;
  auto* check = app.add_subcommand("check", "Check a program file");
  check->add_option("file", path, "Program to check")->required();
  add_common(*check, check_options, check_mode);
  check->add_flag("--verify", check_options.verify,
                  "Re-check the derivation with the declarative checker");
  check->add_flag("--dump-cert", check_options.dump_cert, "Print the derivation");
  check->add_flag("--dump-formula", check_options.dump_formula,
                  "Print the final formula and its witness");

  efl::CheckOptions repl_options;
  std::string repl_mode = "constrained";
  auto* repl = app.add_subcommand("repl", "Interactive session");
  add_common(*repl, repl_options, repl_mode);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    check_options.mode = parse_mode(check_mode);
    efl::CheckReport report = efl::cmd_check(path, check_options);
    std::cout << report.render();
    for (const auto& d : report.diagnostics) std::cerr << d << "\n";
    return report.exit_code();
  }
  repl_options.mode = parse_mode(repl_mode);
  return run_repl(repl_options);
}
