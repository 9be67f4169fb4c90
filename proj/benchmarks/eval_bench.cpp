#include <benchmark/benchmark.h>

#include <vector>

#include "dft/eval.hpp"
#include "dft/model.hpp"
#include "dft/random.hpp"

namespace {

void BM_EvalTree(benchmark::State& state) {
  const dft::DftModel m = dft::cas_model();
  const dft::Expr top = m.top_expr();
  dft::Assignment a;
  dft::RandomStream rng(1, 0);
  for (const std::string& v : m.variables()) {
    a.set(v, dft::ExtTime::Finite(1000 * rng.uniform()));
  }
  for (auto _ : state) benchmark::DoNotOptimize(dft::eval(top, a));
}
BENCHMARK(BM_EvalTree);

void BM_EvalCompiled(benchmark::State& state) {
  const dft::DftModel m = dft::cas_model();
  const std::vector<std::string> vars = m.variables();
  const dft::CompiledExpr top(m.top_expr(), vars);
  std::vector<double> x(vars.size());
  dft::RandomStream rng(1, 0);
  for (double& v : x) v = 1000 * rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(top(x));
}
BENCHMARK(BM_EvalCompiled);

}  // namespace
