#include "grushin/calculus.hpp"
#include "grushin/estimates.hpp"
#include "grushin/geometry.hpp"
#include "grushin/hermite.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace calc = grushin::calculus;
namespace est = grushin::estimates;
namespace geo = grushin::geometry;
namespace hm = grushin::hermite;

namespace {

const calc::ApplyOptions kNoFail{.tail_tol = 1.0, .fail_on_tail = false};

void BM_hermite_values(benchmark::State& state) {
  const int ell_max = static_cast<int>(state.range(0));
  std::vector<double> out(ell_max + 1);
  double u = 0.37;
  for (auto _ : state) {
    hm::hermite_values(ell_max, u, out);
    benchmark::DoNotOptimize(out.data());
    u += 1e-9;
  }
}
BENCHMARK(BM_hermite_values)->Arg(32)->Arg(128)->Arg(1024);

void BM_projection_kernel(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const hm::EigenIndex ki(k, 2);
  std::vector<double> x{0.4, -0.3}, a{1.1, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hm::projection_kernel(ki, 1.3, x, a));
  }
}
BENCHMARK(BM_projection_kernel)->Arg(8)->Arg(32);

void BM_cc_distance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  geo::CCPoint z{{u(rng), u(rng)}, {u(rng), u(rng)}};
  geo::CCPoint w{{u(rng), u(rng)}, {u(rng), u(rng)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo::cc_distance(z, w));
  }
}
BENCHMARK(BM_cc_distance);

void BM_fourier_y(benchmark::State& state) {
  calc::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = s.n_y = static_cast<int>(state.range(0));
  s.x_extent = s.y_extent = 16.0;
  s.k_max = 8;
  const calc::GridFunction f = est::compact_bump(s, 2.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(calc::fourier_y_forward(f).values.data());
  }
}
BENCHMARK(BM_fourier_y)->Arg(64)->Arg(128);

void BM_apply_multiplier(benchmark::State& state) {
  calc::GridSpec s;
  s.d1 = 1;
  s.d2 = 1;
  s.n_x = s.n_y = static_cast<int>(state.range(0));
  s.x_extent = s.y_extent = 16.0;
  s.k_max = 32;
  const calc::GridFunction f = est::compact_bump(s, 2.0, 2.0);
  const calc::Symbol1D F = calc::even_bump(0.5, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(calc::apply_multiplier(F, f, kNoFail).out.values.data());
  }
}
BENCHMARK(BM_apply_multiplier)->Arg(64)->Arg(128);

void BM_cover(benchmark::State& state) {
  geo::Box region{{-2.0, -2.0}, {2.0, 2.0}};
  std::vector<double> lambdas{2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo::cover(region, 1, 0.5, lambdas).cells.size());
  }
}
BENCHMARK(BM_cover);

void BM_column_norm(benchmark::State& state) {
  auto bump = std::make_shared<const calc::DyadicBump>();
  const calc::Symbol1D F = calc::even_bump(0.5, 2.0);
  const auto G = calc::band_truncate(F, static_cast<int>(state.range(0)), bump);
  std::vector<double> x{0.5, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        est::joint_column_norm(G, 2, 2, x, 1.0 / 64.0, 64.0, 96, 257));
  }
}
BENCHMARK(BM_column_norm)->Arg(2)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
