#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "hpl/gevrey.hpp"
#include "hpl/model.hpp"
#include "hpl/presets.hpp"
#include "hpl/stepper.hpp"
#include "hpl/transforms.hpp"

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

hpl::Field test_field(hpl::GridPtr grid, int kmax) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    hpl::Field f(grid);
    for (int k = 0; k <= kmax; ++k) {
        const double a = amp(rng), b = amp(rng);
        for (int i = 0; i < grid->nx(); ++i) {
            const double arg = k * grid->x(i);
            for (int j = 0; j < grid->ny_total(); ++j)
                f.at(i, j) += (a * std::cos(arg) + b * std::sin(arg)) *
                              std::sin(kPi * grid->y(j) / grid->height());
        }
    }
    f.zero_boundary_rows();
    return f;
}

void BM_TransformRoundTrip(benchmark::State& state) {
    auto grid = hpl::Grid::create(static_cast<int>(state.range(0)), 256, 20.0);
    const hpl::Field f = test_field(grid, grid->dealias_cutoff() / 2);
    for (auto _ : state) {
        hpl::Field back = hpl::to_physical(hpl::to_spectral(f));
        benchmark::DoNotOptimize(back.data().data());
    }
}
BENCHMARK(BM_TransformRoundTrip)->Arg(32)->Arg(64)->Arg(128);

void BM_NonlinearTerm(benchmark::State& state) {
    auto grid = hpl::Grid::create(64, static_cast<int>(state.range(0)), 20.0);
    const hpl::Field u = test_field(grid, 10);
    for (auto _ : state) {
        hpl::Field n = hpl::nonlinear_term(u);
        benchmark::DoNotOptimize(n.data().data());
    }
}
BENCHMARK(BM_NonlinearTerm)->Arg(128)->Arg(256)->Arg(512);

void BM_HyperbolicStep(benchmark::State& state) {
    auto grid = hpl::Grid::create(64, static_cast<int>(state.range(0)), 20.0);
    hpl::PresetParams p;
    p.name = "mode";
    p.k = 2;
    p.amplitude = 0.05;
    hpl::State s = hpl::make_initial_state(grid, p, hpl::ModelKind::Hyperbolic);
    hpl::StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    hpl::Model m;
    hpl::Stepper st(grid, m, cfg);
    for (auto _ : state) {
        s = st.step(s);
        benchmark::DoNotOptimize(s.u.data().data());
    }
}
BENCHMARK(BM_HyperbolicStep)->Arg(128)->Arg(256)->Arg(512);

void BM_DerivativeLadder(benchmark::State& state) {
    auto grid = hpl::Grid::create(128, 128, 20.0);
    const hpl::Field u = test_field(grid, 20);
    const hpl::Field ut = test_field(grid, 20);
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) {
        hpl::Ladder lad = hpl::derivative_ladder(u, ut, M);
        benchmark::DoNotOptimize(lad.data());
    }
}
BENCHMARK(BM_DerivativeLadder)->Arg(8)->Arg(16)->Arg(32);

void BM_GevreyNorm(benchmark::State& state) {
    auto grid = hpl::Grid::create(128, 64, 20.0);
    const hpl::Field u = test_field(grid, 20);
    const hpl::Ladder lad = hpl::derivative_ladder(u, hpl::Field(grid), 32);
    hpl::GevreyParams p;
    p.rho = 0.5;
    p.sigma = 2.0;
    p.M = 32;
    for (auto _ : state) {
        const double n = hpl::gevrey_norm(lad, p);
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_GevreyNorm);

}  // namespace

BENCHMARK_MAIN();
