// Compares the serial reference assembly against the OpenMP-parallel path.
// Run with --benchmark_time_unit=ms or rely on the per-benchmark unit below.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dgfem/assembly.hpp"
#include "dgfem/mesh.hpp"
#include "dgfem/nonlinear.hpp"
#include "dgfem/problems.hpp"
#include "dgfem/reference.hpp"

using namespace dgfem;

namespace {

Mesh refined_mesh(int level) {
  Mesh mesh = unit_square_mesh();
  for (int l = 0; l < level; ++l) {
    mesh = uniform_refine(mesh);
  }
  return mesh;
}

Execution execution_for(int threads) {
  return threads <= 1 ? Execution::serial() : Execution::parallel(threads);
}

// Full system assembly: diffusion + convection + reaction + load.
void bm_assemble_all(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const int degree = static_cast<int>(state.range(1));
  const int threads = static_cast<int>(state.range(2));

  const Mesh mesh = refined_mesh(level);
  const ReferenceElement ref = build_reference(degree);
  const ProblemSpec problem = registry_get("paper-boundary-layer");
  const DgParameters params = set_parameters(DgMethod::SIPG, degree);
  const Execution exec = execution_for(threads);

  for (auto _ : state) {
    DgSystem system = assemble_all(mesh, ref, problem, params, exec);
    benchmark::DoNotOptimize(system.F.data());
    benchmark::ClobberMemory();
  }
  state.counters["dofs"] = static_cast<double>(ref.n_local() * mesh.n_elements());
}

// Nonlinear reaction contribution (vector + Jacobian), the per-Newton-step
// kernel.
void bm_assemble_nonlinear(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const int degree = static_cast<int>(state.range(1));
  const int threads = static_cast<int>(state.range(2));

  const Mesh mesh = refined_mesh(level);
  const ReferenceElement ref = build_reference(degree);
  const ReactionTerm& reaction =
      *registry_get("paper-boundary-layer").nonlinear_reaction;
  const Execution exec = execution_for(threads);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> coef(ref.n_local() * mesh.n_elements());
  for (double& c : coef) {
    c = unif(rng);
  }

  for (auto _ : state) {
    auto [h, hj] = assemble_nonlinear(coef, mesh, ref, reaction, exec);
    benchmark::DoNotOptimize(h.data());
    benchmark::DoNotOptimize(hj.values.data());
    benchmark::ClobberMemory();
  }
  state.counters["dofs"] = static_cast<double>(coef.size());
}

void configure(benchmark::internal::Benchmark* bench) {
  bench->ArgNames({"level", "k", "threads"})
      ->Args({3, 1, 1})
      ->Args({3, 1, 2})
      ->Args({3, 1, 4})
      ->Args({3, 2, 1})
      ->Args({3, 2, 2})
      ->Args({3, 2, 4})
      ->Args({4, 1, 1})
      ->Args({4, 1, 4})
      ->Unit(benchmark::kMillisecond);
}

BENCHMARK(bm_assemble_all)->Apply(configure);
BENCHMARK(bm_assemble_nonlinear)->Apply(configure);

} // namespace

BENCHMARK_MAIN();
