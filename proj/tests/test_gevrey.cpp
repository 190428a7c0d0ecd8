#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/gevrey.hpp"
#include "hpl/presets.hpp"
#include "hpl/transforms.hpp"

using namespace hpl;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

Field random_band_limited(GridPtr grid, std::mt19937& rng, int kmax) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const Grid& g = *grid;
    Field f(grid);
    for (int k = 0; k <= std::min(kmax, g.dealias_cutoff()); ++k) {
        const double a = amp(rng), b = amp(rng);
        for (int i = 0; i < g.nx(); ++i) {
            const double arg = k * 2.0 * kPi * g.x(i) / g.lx();
            for (int j = 0; j < g.ny_total(); ++j)
                f.at(i, j) += (a * std::cos(arg) + b * std::sin(arg)) *
                              std::sin(kPi * g.y(j) / g.height());
        }
    }
    return f;
}

// High-block weight by direct long-double accumulation, independent of the
// log-domain path in the library.
double direct_weight(int m, double rho, double sigma) {
    long double w = 1.0L;
    for (int i = 1; i <= m - 7; ++i)
        w *= static_cast<long double>(rho) / std::pow(static_cast<long double>(i), sigma);
    return static_cast<double>(w);
}

// Brute-force sup over all orders with directly accumulated weights.
double brute_force_norm(const Ladder& ladder, double rho, double sigma, int M) {
    double best = 0.0;
    for (int m = 0; m <= M; ++m) {
        const double w = m < 7 ? 1.0 : direct_weight(m, rho, sigma);
        best = std::max(best, w * ladder[m].sum());
    }
    return best;
}

Ladder synthetic_ladder(double rho, double sigma, int M, double scale) {
    Ladder lad(M + 1);
    for (int m = 0; m <= M; ++m) {
        const double b =
            m < 8 ? scale
                  : scale * std::exp(sigma * std::lgamma(m - 6.0) -
                                     (m - 7.0) * std::log(rho));
        lad[m].ny = b;  // put the whole budget in one component
    }
    return lad;
}

}  // namespace

TEST_CASE("zero field has an all-zero ladder and zero norm") {
    GridPtr grid = Grid::create(64, 32, 8.0);
    const Ladder lad = derivative_ladder(Field(grid), Field(grid), 16);
    for (const auto& e : lad) {
        CHECK(e.nt == 0.0);
        CHECK(e.ny == 0.0);
        CHECK(e.m_nx == 0.0);
    }
    GevreyParams p;
    p.M = 16;
    CHECK(gevrey_norm(lad, p) == 0.0);
}

TEST_CASE("ladder truncation above the resolvable maximum is rejected") {
    GridPtr grid = Grid::create(32, 16, 4.0);  // cutoff 10
    CHECK_THROWS_WITH_AS(derivative_ladder(Field(grid), Field(grid), 11),
                         doctest::Contains("resolvable maximum"), ConfigError);
    CHECK_THROWS_WITH_AS(derivative_ladder(Field(grid), Field(grid), 11),
                         doctest::Contains("10"), ConfigError);
}

TEST_CASE("single-mode ladder scales as k^m") {
    // Cutoff pinned just above the mode so transform roundoff elsewhere in
    // the band cannot be k^m-amplified into the comparison.
    GridPtr grid = Grid::create(64, 64, 6.0, 2 * kPi, 1.0, 12);
    Field u(grid), ut(grid);
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny_total(); ++j) {
            const double prof = std::sin(kPi * grid->y(j) / grid->height());
            u.at(i, j) = std::cos(2.0 * grid->x(i)) * prof;
            ut.at(i, j) = 0.5 * std::sin(2.0 * grid->x(i)) * prof;
        }
    const int M = 12;
    const Ladder lad = derivative_ladder(u, ut, M);
    const double u_norm = weighted_l2(u, grid->ell());
    for (int m = 1; m <= M; ++m) {
        const double factor = std::pow(2.0, m);
        CHECK(lad[m].nt == doctest::Approx(factor * lad[0].nt).epsilon(1e-11));
        CHECK(lad[m].ny == doctest::Approx(factor * lad[0].ny).epsilon(1e-11));
        CHECK(lad[m].m_nx ==
              doctest::Approx(m * factor * u_norm).epsilon(1e-11));
    }
}

TEST_CASE("ladder agrees with a dense derivative-matrix oracle") {
    std::mt19937 rng(17);
    GridPtr grid = Grid::create(48, 40, 7.0, 2 * kPi, 1.0);
    const Field u = random_band_limited(grid, rng, 12);
    const Field ut = random_band_limited(grid, rng, 12);
    const int M = 10;
    const Ladder lad = derivative_ladder(u, ut, M);

    // Dense real derivative matrix D[a][b] = (1/N) sum_k -2 kappa sin(kappa (x_a - x_b)).
    const int n = grid->nx();
    std::vector<double> D(static_cast<size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double acc = 0.0;
            for (int k = 1; k < n / 2; ++k) {
                const double kappa = 2.0 * kPi * k / grid->lx();
                acc -= 2.0 * kappa * std::sin(kappa * (grid->x(a) - grid->x(b)));
            }
            D[static_cast<size_t>(a) * n + b] = acc / n;
        }
    auto apply_dense = [&](const Field& f) {
        Field out(grid);
        for (int j = 0; j < grid->ny_total(); ++j)
            for (int a = 0; a < n; ++a) {
                double acc = 0.0;
                for (int b = 0; b < n; ++b)
                    acc += D[static_cast<size_t>(a) * n + b] * f.at(b, j);
                out.at(a, j) = acc;
            }
        return out;
    };

    Field du = u, dut = ut;
    for (int m = 0; m <= M; ++m) {
        if (m > 0) {
            du = apply_dense(du);
            dut = apply_dense(dut);
        }
        const double nt = weighted_l2(dut, grid->ell());
        const double ny = weighted_l2(dy(du, 1), grid->ell());
        const double mnx = m * weighted_l2(du, grid->ell());
        CHECK(lad[m].nt == doctest::Approx(nt).epsilon(1e-8));
        CHECK(lad[m].ny == doctest::Approx(ny).epsilon(1e-8));
        if (m > 0) CHECK(lad[m].m_nx == doctest::Approx(mnx).epsilon(1e-8));
    }
}

TEST_CASE("norm equals the brute-force sup with directly accumulated weights") {
    std::mt19937 rng(29);
    GridPtr grid = Grid::create(64, 32, 6.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Field u = random_band_limited(grid, rng, 15);
        const Field ut = random_band_limited(grid, rng, 15);
        const Ladder lad = derivative_ladder(u, ut, 18);
        for (double rho : {0.3, 0.5, 1.0}) {
            for (double sigma : {1.0, 1.5, 2.0}) {
                GevreyParams p;
                p.rho = rho;
                p.sigma = sigma;
                p.M = 18;
                const double lib = gevrey_norm(lad, p);
                const double brute = brute_force_norm(lad, rho, sigma, 18);
                CHECK(lib == doctest::Approx(brute).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("norm is absolutely homogeneous and subadditive") {
    std::mt19937 rng(37);
    GridPtr grid = Grid::create(48, 24, 5.0);
    GevreyParams p;
    p.rho = 0.6;
    p.sigma = 1.5;
    p.M = 12;
    for (int trial = 0; trial < 10; ++trial) {
        const Field a = random_band_limited(grid, rng, 10);
        const Field b = random_band_limited(grid, rng, 10);
        const Field at = random_band_limited(grid, rng, 10);
        const Field bt = random_band_limited(grid, rng, 10);
        const double c = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);

        Field ca = a, cat = at;
        ca *= c;
        cat *= c;
        const double n1 = gevrey_norm(derivative_ladder(a, at, p.M), p);
        const double nc = gevrey_norm(derivative_ladder(ca, cat, p.M), p);
        CHECK(nc == doctest::Approx(std::fabs(c) * n1).epsilon(1e-11));

        const double nsum =
            gevrey_norm(derivative_ladder(a + b, at + bt, p.M), p);
        const double nb = gevrey_norm(derivative_ladder(b, bt, p.M), p);
        CHECK(nsum <= n1 + nb + 1e-11 * (n1 + nb));
    }
}

TEST_CASE("norm is monotone in rho and anti-monotone in sigma") {
    std::mt19937 rng(43);
    GridPtr grid = Grid::create(64, 24, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Field u = random_band_limited(grid, rng, 15);
        const Field ut = random_band_limited(grid, rng, 15);
        const Ladder lad = derivative_ladder(u, ut, 18);
        GevreyParams p;
        p.M = 18;
        double prev = -1.0;
        for (double rho : {0.1, 0.3, 0.5, 0.8, 1.0}) {
            p.rho = rho;
            p.sigma = 1.5;
            const double n = gevrey_norm(lad, p);
            CHECK(n >= prev);
            prev = n;
        }
        prev = HUGE_VAL;
        for (double sigma : {1.0, 1.25, 1.5, 2.0}) {
            p.rho = 0.8;
            p.sigma = sigma;
            const double n = gevrey_norm(lad, p);
            CHECK(n <= prev);
            prev = n;
        }
    }
}

TEST_CASE("every weighted ladder entry is bounded by the norm") {
    std::mt19937 rng(53);
    GridPtr grid = Grid::create(64, 24, 5.0);
    const Field u = random_band_limited(grid, rng, 15);
    const Field ut = random_band_limited(grid, rng, 15);
    const Ladder lad = derivative_ladder(u, ut, 18);
    GevreyParams p;
    p.rho = 0.5;
    p.sigma = 2.0;
    p.M = 18;
    const double n = gevrey_norm(lad, p);
    for (int m = 0; m <= p.M; ++m) {
        const double w =
            m < 7 ? 1.0 : std::exp(gevrey_log_weight(m, p.rho, p.sigma));
        CHECK(w * lad[m].sum() <= n);
    }
}

TEST_CASE("log-domain weights match direct accumulation to 1e-12 up to m = 20") {
    for (double rho : {0.25, 0.5, 1.0}) {
        for (double sigma : {1.0, 1.5, 2.0}) {
            for (int m = 7; m <= 20; ++m) {
                const double log_w = std::exp(gevrey_log_weight(m, rho, sigma));
                const double direct = direct_weight(m, rho, sigma);
                CHECK(log_w == doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("norm parameters are validated") {
    GevreyParams p;
    p.rho = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = GevreyParams{};
    p.sigma = 3.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("sigma"), ConfigError);
    p = GevreyParams{};
    p.M = 5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = GevreyParams{};
    CHECK_NOTHROW(p.validate());
    // the ledger's initial-data norms evaluate at radius 2 rho0 > 1
    Ladder lad = synthetic_ladder(0.5, 1.0, 12, 1.0);
    CHECK(gevrey_norm_at(lad, 2.0, 1.0, 12) > 0.0);
}

TEST_CASE("radius fit recovers synthetic factorial ladders within 1%") {
    for (double sigma : {1.0, 2.0}) {
        for (double rho : {0.1, 0.3, 0.7}) {
            const Ladder lad = synthetic_ladder(rho, sigma, 20, 5.0);
            const RadiusFit fit = estimate_radius(lad, sigma);
            CHECK(fit.reliable);
            CHECK(fit.fit_quality > 0.999);
            CHECK(std::fabs(fit.rho_hat - rho) / rho < 0.01);
        }
    }
}

TEST_CASE("radius fit recovers a pure analytic-decay ladder with sigma 1") {
    const Ladder lad = synthetic_ladder(0.45, 1.0, 24, 2.0);
    const RadiusFit fit = estimate_radius(lad, 1.0);
    CHECK(fit.reliable);
    CHECK(std::fabs(fit.rho_hat - 0.45) / 0.45 < 0.01);
}

TEST_CASE("radius fit flags a single pure mode as unreliable") {
    GridPtr grid = Grid::create(64, 48, 10.0);
    Field u(grid);
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny_total(); ++j)
            u.at(i, j) = std::cos(2.0 * grid->x(i)) *
                         std::sin(kPi * grid->y(j) / grid->height());
    const Ladder lad = derivative_ladder(u, Field(grid), 16);
    const RadiusFit fit = estimate_radius(lad, 2.0);
    CHECK_FALSE(fit.reliable);
    CHECK(fit.fit_quality < 0.999);
}

TEST_CASE("radius fit refuses underdetermined ladders") {
    const Ladder lad = synthetic_ladder(0.5, 1.0, 12, 1.0);  // orders 8..12: 5 < 6
    const RadiusFit fit = estimate_radius(lad, 1.0);
    CHECK_FALSE(fit.reliable);
    CHECK(fit.note.find("underdetermined") != std::string::npos);
}

TEST_CASE("gevrey_seed preset carries its prescribed radius (sigma = 1)") {
    GridPtr grid = Grid::create(96, 48, 20.0, 2 * kPi, 1.0);
    PresetParams p;
    p.name = "gevrey_seed";
    p.rho = 0.5;
    p.sigma = 1.0;
    p.seed = 7;
    const State s = make_initial_state(grid, p, ModelKind::Hyperbolic);
    const Ladder lad = derivative_ladder(s.u, s.ut, 16);
    const RadiusFit fit = estimate_radius(lad, 1.0);
    CHECK(fit.reliable);
    CHECK(std::fabs(fit.rho_hat - 0.5) / 0.5 < 0.05);
}

TEST_CASE("low-order bound: zero state and closed-form cross-check") {
    SUBCASE("zero state passes with zero observed") {
        GridPtr grid = Grid::create(16, 16, 5.0);
        const AssumptionCheck ac = check_assumption(Field(grid), Field(grid));
        CHECK(ac.observed == 0.0);
        CHECK(ac.pass);
    }
    SUBCASE("sin(x) y e^-y evaluates to sqrt(pi)") {
        // All six low-order norms coincide; the bound is sqrt(pi).
        GridPtr grid = Grid::create(16, 10000, 12.0);
        Field u(grid);
        for (int i = 0; i < grid->nx(); ++i)
            for (int j = 0; j < grid->ny_total(); ++j)
                u.at(i, j) = std::sin(grid->x(i)) * grid->y(j) *
                             std::exp(-grid->y(j));
        const AssumptionCheck ac = check_assumption(u, Field(grid), 10.0);
        CHECK(ac.observed == doctest::Approx(std::sqrt(kPi)).epsilon(1e-6));
        CHECK(ac.pass);
    }
    SUBCASE("observed scales monotonically") {
        std::mt19937 rng(61);
        GridPtr grid = Grid::create(32, 64, 8.0);
        Field u = random_band_limited(grid, rng, 8);
        const double base = check_assumption(u, Field(grid)).observed;
        for (double c : {1.0, 1.5, 4.0}) {
            Field cu = u;
            cu *= c;
            CHECK(check_assumption(cu, Field(grid)).observed >=
                  base * c * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("k r^k stays below 1/(1-r) exhaustively") {
    for (double r : {0.1, 0.5, 0.9, 0.99})
        CHECK(kr_bound_max_gap(r, 10000) <= 0.0);
    CHECK_THROWS_AS(kr_bound_max_gap(1.5, 10), ConfigError);
}
