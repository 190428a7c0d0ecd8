#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hpl/audit.hpp"
#include "hpl/errors.hpp"
#include "hpl/presets.hpp"
#include "hpl/transforms.hpp"

using namespace hpl;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

State band_limited_state(GridPtr grid, std::mt19937& rng, int kmax,
                         double amplitude) {
    std::uniform_real_distribution<double> amp(-amplitude, amplitude);
    Field u(grid), ut(grid);
    for (int k = 0; k <= kmax; ++k) {
        const double a = amp(rng), b = amp(rng), c = amp(rng), d = amp(rng);
        for (int i = 0; i < grid->nx(); ++i) {
            const double arg = k * grid->x(i);
            for (int j = 0; j < grid->ny_total(); ++j) {
                const double prof = std::sin(kPi * grid->y(j) / grid->height());
                u.at(i, j) += (a * std::cos(arg) + b * std::sin(arg)) * prof;
                ut.at(i, j) += (c * std::cos(arg) + d * std::sin(arg)) * prof;
            }
        }
    }
    u.zero_boundary_rows();
    ut.zero_boundary_rows();
    return State{std::move(u), std::move(ut), 0.0};
}

RunResult linear_modal_run(int ny, double dt, double t_end) {
    GridPtr grid = Grid::create(8, ny, kPi, 2 * kPi, 1.0);
    PresetParams p;
    p.name = "mode";
    p.k = 0;
    p.n = 2;
    const State s0 = make_initial_state(grid, p, ModelKind::Hyperbolic);
    Model m;
    m.transport = false;
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.snapshot_cadence = 1;
    return run(m, s0, cfg);
}

}  // namespace

TEST_CASE("energy audit of the zero solution vanishes term by term") {
    GridPtr grid = Grid::create(16, 32, 6.0);
    EnergyAuditAccumulator acc(1, grid->ell());
    for (int q = 0; q <= 4; ++q)
        acc.feed(State{Field(grid), Field(grid), 0.05 * q});
    const EnergyAudit a = acc.current();
    CHECK(a.lhs_kinetic == 0.0);
    CHECK(a.lhs_gradient == 0.0);
    CHECK(a.lhs_damping == 0.0);
    CHECK(a.rhs_initial == 0.0);
    CHECK(a.rhs_leibniz == 0.0);
    CHECK(a.rhs_commutator == 0.0);
    CHECK(a.residual() == 0.0);
}

TEST_CASE("audit at the first sample balances exactly") {
    std::mt19937 rng(3);
    GridPtr grid = Grid::create(32, 48, 6.0);
    State s = band_limited_state(grid, rng, 8, 0.3);
    EnergyAuditAccumulator acc(2, grid->ell());
    acc.feed(s);
    const EnergyAudit a = acc.current();
    CHECK(a.residual() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(a.lhs_kinetic + a.lhs_gradient ==
          doctest::Approx(a.rhs_initial).epsilon(1e-14));
}

TEST_CASE("linear-run audit residual converges at second order") {
    // x-independent damped-wave run: the transport pairing vanishes
    // identically, every remaining mismatch is O(dt^2) + O(dy^2).
    std::vector<double> residuals;
    struct Level { int ny; double dt; };
    for (const Level lv : {Level{128, 2e-3}, Level{256, 1e-3}, Level{512, 5e-4}}) {
        const RunResult res = linear_modal_run(lv.ny, lv.dt, 0.2);
        const EnergyAudit a = energy_audit(res, 0, 1.0);
        CHECK(std::isfinite(a.residual()));
        residuals.push_back(std::fabs(a.residual()));
    }
    const double r1 = std::log2(residuals[0] / residuals[1]);
    const double r2 = std::log2(residuals[1] / residuals[2]);
    CHECK(r1 > 1.9);
    CHECK(r1 < 2.1);
    CHECK(r2 > 1.9);
    CHECK(r2 < 2.1);
}

TEST_CASE("the audit demands at least two snapshots at uniform cadence") {
    GridPtr grid = Grid::create(16, 32, 6.0);
    RunResult history;
    history.snapshots.push_back(State{Field(grid), Field(grid), 0.0});
    history.snapshot_times.push_back(0.0);
    CHECK_THROWS_WITH_AS(energy_audit(history, 0, 1.0),
                         doctest::Contains("cadence"), ConfigError);
    history.snapshots.push_back(State{Field(grid), Field(grid), 0.1});
    history.snapshot_times.push_back(0.1);
    history.snapshots.push_back(State{Field(grid), Field(grid), 0.35});
    history.snapshot_times.push_back(0.35);
    CHECK_THROWS_WITH_AS(energy_audit(history, 0, 1.0),
                         doctest::Contains("uniform"), ConfigError);
}

TEST_CASE("Leibniz pairing: product-rule sum equals assembled differentiation") {
    std::mt19937 rng(11);
    GridPtr grid = Grid::create(64, 64, 8.0);  // cutoff 21
    const State s = band_limited_state(grid, rng, 10, 0.4);
    for (int m : {0, 1, 2, 3}) {
        const double direct = leibniz_pairing(s, m, grid->ell());
        const double assembled = leibniz_pairing_assembled(s, m, grid->ell());
        CHECK(direct == doctest::Approx(assembled).epsilon(1e-8));
    }
}

TEST_CASE("theorem ledger of the zero solution reports zero constants") {
    const int M = 12;
    Ladder zero_ladder(M + 1);
    std::vector<LadderSample> history;
    for (int q = 0; q <= 5; ++q)
        history.push_back(LadderSample{0.1 * q, zero_ladder});
    const Ledger led =
        theorem_ledger(history, zero_ladder, zero_ladder,
                       {LedgerPair{0.3, 0.6}, LedgerPair{0.2, 0.9}}, 2.0);
    CHECK(led.c0 == 0.0);
    for (const auto& series : led.pairs) {
        for (double c : series.chat) CHECK(c == 0.0);
        CHECK(series.sup_chat == 0.0);
        CHECK(series.stabilized);
    }
}

TEST_CASE("ledger quantities are nondecreasing in rho at fixed gap") {
    std::mt19937 rng(19);
    GridPtr grid = Grid::create(64, 32, 6.0);
    std::vector<LadderSample> history;
    for (int q = 0; q <= 6; ++q) {
        const State s = band_limited_state(grid, rng, 12, 0.5);
        history.push_back(
            LadderSample{0.05 * q, derivative_ladder(s.u, s.ut, 16)});
    }
    const Ladder l0 = history.front().ladder;
    const Ledger led = theorem_ledger(
        history, l0, l0,
        {LedgerPair{0.2, 0.6}, LedgerPair{0.3, 0.7}, LedgerPair{0.4, 0.8}},
        2.0);
    for (size_t q = 1; q < led.pairs.size(); ++q) {
        CHECK(led.pairs[q].lhs.back() >= led.pairs[q - 1].lhs.back());
        CHECK(led.pairs[q].i1.back() >= led.pairs[q - 1].i1.back());
        CHECK(led.pairs[q].i2.back() >= led.pairs[q - 1].i2.back());
    }
}

TEST_CASE("ledger validates the pair ordering") {
    const int M = 12;
    Ladder lad(M + 1);
    std::vector<LadderSample> history{LadderSample{0.0, lad},
                                      LadderSample{0.1, lad}};
    CHECK_THROWS_AS(
        theorem_ledger(history, lad, lad, {LedgerPair{0.6, 0.3}}, 2.0),
        ConfigError);
    CHECK_THROWS_AS(
        theorem_ledger(history, lad, lad, {LedgerPair{0.3, 1.2}}, 2.0),
        ConfigError);
    CHECK_NOTHROW(
        theorem_ledger(history, lad, lad, {LedgerPair{0.3, 0.9}}, 2.0));
}

TEST_CASE("ledger flags a stabilized running sup") {
    // Constant norms: Chat decreases once the integrals accumulate, so the
    // running sup is set early and the final quarter is quiet.
    const int M = 12;
    Ladder lad(M + 1);
    for (int m = 0; m <= M; ++m) lad[m].ny = 0.2;
    std::vector<LadderSample> history;
    for (int q = 0; q <= 40; ++q) history.push_back(LadderSample{0.0125 * q, lad});
    const Ledger led =
        theorem_ledger(history, lad, lad, {LedgerPair{0.3, 0.6}}, 2.0);
    CHECK(led.pairs[0].sup_chat > 0.0);
    CHECK(led.pairs[0].stabilized);
    CHECK(led.pairs[0].final_quarter_rel_change < 0.10);
}
