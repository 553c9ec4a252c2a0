#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "efl/driver.hpp"

namespace {

std::string read_corpus(const char* name) {
  std::ifstream in(std::filesystem::path(EFL_CORPUS_DIR) / name);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Chain of random three-literal clauses over n variables at ratio 4.
efl::Formula random_cnf(std::size_t n, std::uint64_t seed) {
  efl::FreshSupply fresh;
  std::vector<efl::Var> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back(fresh.prop());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<efl::Formula> clauses;
  for (std::size_t c = 0; c < 4 * n; ++c) {
    std::vector<efl::Formula> lits;
    for (int k = 0; k < 3; ++k) {
      efl::Formula v = efl::Formula::var(vars[pick(rng)]);
      lits.push_back(rng() & 1 ? v : efl::implies(v, efl::Formula::bottom()));
    }
    clauses.push_back(efl::disj(lits));
  }
  return efl::conj(clauses);
}

void BM_Sat(benchmark::State& state) {
  efl::Formula f = random_cnf(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(efl::sat(f));
}
BENCHMARK(BM_Sat)->Arg(20)->Arg(50)->Arg(100);

void BM_Check(benchmark::State& state, const char* file, efl::GenMode mode) {
  std::string text = read_corpus(file);
  efl::CheckOptions opts;
  opts.mode = mode;
  for (auto _ : state) benchmark::DoNotOptimize(efl::check_source(text, opts));
}
BENCHMARK_CAPTURE(BM_Check, g_example, "g_example.efl", efl::GenMode::kConstrained);
BENCHMARK_CAPTURE(BM_Check, g_example_cf, "g_example.efl", efl::GenMode::kConstraintFree);
BENCHMARK_CAPTURE(BM_Check, call_now_or_later, "call_now_or_later.efl", efl::GenMode::kConstrained);
BENCHMARK_CAPTURE(BM_Check, polymorphism, "polymorphism.efl", efl::GenMode::kConstrained);
BENCHMARK_CAPTURE(BM_Check, tie_join, "tie_join.efl", efl::GenMode::kConstraintFree);

}  // namespace

BENCHMARK_MAIN();
