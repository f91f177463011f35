#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "llg/laplacian.hpp"
#include "llg/norms.hpp"
#include "llg/rotation.hpp"
#include "llg/schemes.hpp"
#include "llg/solvers.hpp"

using namespace llg;

namespace {

VectorField random_unit_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorField f(g);
  for (std::int64_t c = 0; c < g.cells(); ++c) {
    Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    while (norm(v) < 1e-3) v = {gauss(rng), gauss(rng), gauss(rng)};
    f.set(c, v / norm(v));
  }
  return f;
}

void bm_laplacian_1d(benchmark::State& state) {
  const Grid g = Grid::line(2000);
  const VectorField f = random_unit_field(g, 1);
  VectorField out(g);
  for (auto _ : state) {
    laplacian_neumann(f, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_laplacian_1d);

void bm_laplacian_3d(benchmark::State& state) {
  const Grid g = Grid::box(20, 20, 20);
  const VectorField f = random_unit_field(g, 2);
  VectorField out(g);
  for (auto _ : state) {
    laplacian_neumann(f, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_laplacian_3d);

void bm_rotate_field(benchmark::State& state) {
  const Grid g = Grid::box(20, 20, 20);
  const VectorField m = random_unit_field(g, 3);
  const VectorField axis = random_unit_field(g, 4);
  VectorField out(g);
  for (auto _ : state) {
    for (std::int64_t c = 0; c < g.cells(); ++c)
      out.set(c, cn_rotate(m.at(c), axis.at(c), 2.5e-3));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_rotate_field);

void bm_predictor_solve_1d_direct(benchmark::State& state) {
  const Grid g = Grid::line(2000);
  const VectorField m = random_unit_field(g, 5);
  for (auto _ : state) {
    auto [x, rep] = bdf1_predictor_solve(m, nullptr, 1e-3, 0.01);
    benchmark::DoNotOptimize(x.data());
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(bm_predictor_solve_1d_direct);

void bm_predictor_solve_3d_bicgstab(benchmark::State& state) {
  const Grid g = Grid::box(20, 20, 20);
  const VectorField m = random_unit_field(g, 6);
  for (auto _ : state) {
    auto [x, rep] = bdf1_predictor_solve(m, nullptr, 2.5e-3, 0.01);
    benchmark::DoNotOptimize(x.data());
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(bm_predictor_solve_3d_bicgstab);

void bm_helmholtz_solve_3d(benchmark::State& state) {
  const Grid g = Grid::box(20, 20, 20);
  const VectorField rhs = random_unit_field(g, 7);
  for (auto _ : state) {
    auto [x, rep] = helmholtz_solve(rhs, 2.5e-3);
    benchmark::DoNotOptimize(x.data());
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(bm_helmholtz_solve_3d);

void bm_step_proposed_3d(benchmark::State& state) {
  const Grid g = Grid::box(20, 20, 20);
  const VectorField m = random_unit_field(g, 8);
  SchemeConfig cfg;
  cfg.alpha = 0.01;
  cfg.k = 2.5e-3;
  for (auto _ : state) {
    VectorField next = step_proposed(m, 0.0, cfg);
    benchmark::DoNotOptimize(next.data());
  }
}
BENCHMARK(bm_step_proposed_3d);

}  // namespace

BENCHMARK_MAIN();
