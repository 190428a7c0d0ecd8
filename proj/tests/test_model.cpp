#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/model.hpp"
#include "hpl/presets.hpp"
#include "hpl/transforms.hpp"

using namespace hpl;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

Field sample(GridPtr grid, const std::function<double(double, double)>& fn) {
    Field f(grid);
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny_total(); ++j)
            f.at(i, j) = fn(grid->x(i), grid->y(j));
    return f;
}

// Composite Simpson on [0, b] at very high resolution; independent of the
// cumulative-trapezoid path under test.
double simpson(const std::function<double(double)>& fn, double b, int n) {
    if (n % 2) ++n;
    const double h = b / n;
    double acc = fn(0.0) + fn(b);
    for (int q = 1; q < n; ++q) acc += fn(q * h) * (q % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("normal velocity of x-independent data vanishes identically") {
    GridPtr grid = Grid::create(32, 64, 10.0);
    const Field u = sample(grid, [](double, double y) { return y * std::exp(-y); });
    const Field v = recover_v(u);
    CHECK(v.max_abs() == 0.0);
}

TEST_CASE("normal velocity matches the closed-form antiderivative") {
    // u = sin(x) y e^-y  ->  v = -cos(x) (1 - (1+y) e^-y).
    GridPtr grid = Grid::create(64, 2000, 5.0);
    const Field u =
        sample(grid, [](double x, double y) { return std::sin(x) * y * std::exp(-y); });
    const Field v = recover_v(u);
    double worst = 0.0;
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny_total(); ++j) {
            const double y = grid->y(j);
            const double expect =
                -std::cos(grid->x(i)) * (1.0 - (1.0 + y) * std::exp(-y));
            worst = std::max(worst, std::fabs(v.at(i, j) - expect));
        }
    CHECK(worst <= 1e-6);
    for (int i = 0; i < grid->nx(); ++i) CHECK(v.at(i, 0) == 0.0);

    // The closed form itself cross-checked by independent quadrature.
    for (double yq : {0.5, 2.0, 7.0}) {
        const double integral =
            simpson([](double s) { return s * std::exp(-s); }, yq, 200000);
        CHECK(integral ==
              doctest::Approx(1.0 - (1.0 + yq) * std::exp(-yq)).epsilon(1e-10));
    }
}

TEST_CASE("discrete divergence residual converges at second order") {
    std::vector<double> errs;
    for (int ny : {128, 256, 512}) {
        GridPtr grid = Grid::create(32, ny, 12.0);
        const Field u = sample(grid, [](double x, double y) {
            return std::sin(x) * std::sin(y) * std::exp(-y);
        });
        const Field v = recover_v(u);
        const Field ux = dx_pow(u, 1);
        const Field vy = dy(v, 1);
        double worst = 0.0;
        for (size_t q = 0; q < ux.data().size(); ++q)
            worst = std::max(worst, std::fabs(ux.data()[q] + vy.data()[q]));
        errs.push_back(worst);
    }
    const double rate1 = std::log2(errs[0] / errs[1]);
    const double rate2 = std::log2(errs[1] / errs[2]);
    CHECK(rate1 > 1.9);
    CHECK(rate1 < 2.1);
    CHECK(rate2 > 1.9);
    CHECK(rate2 < 2.1);
}

TEST_CASE("transport term: zero field and pure shear are equilibria") {
    GridPtr grid = Grid::create(32, 64, 10.0);
    CHECK(nonlinear_term(Field(grid)).max_abs() == 0.0);
    const Field shear =
        sample(grid, [](double, double y) { return y * std::exp(-y); });
    CHECK(nonlinear_term(shear).max_abs() == 0.0);
}

TEST_CASE("transport term matches its symbolic expansion") {
    // u = sin(x) s(y), s = y e^-y:
    // N(u) = sin cos (s^2 - S s'), S(y) = 1 - (1+y) e^-y.
    GridPtr grid = Grid::create(64, 2000, 10.0);
    const Field u =
        sample(grid, [](double x, double y) { return std::sin(x) * y * std::exp(-y); });
    const Field n = nonlinear_term(u);
    double worst = 0.0;
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 1; j < grid->ny_total() - 1; ++j) {
            const double x = grid->x(i), y = grid->y(j);
            const double s = y * std::exp(-y);
            const double ds = (1.0 - y) * std::exp(-y);
            const double big = 1.0 - (1.0 + y) * std::exp(-y);
            const double expect = std::sin(x) * std::cos(x) * (s * s - big * ds);
            worst = std::max(worst, std::fabs(n.at(i, j) - expect));
        }
    CHECK(worst <= 1e-6);
}

TEST_CASE("transport term is quadratically homogeneous") {
    std::mt19937 rng(13);
    GridPtr grid = Grid::create(32, 48, 8.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Field u(grid);
    for (int k = 1; k <= 5; ++k) {
        const double a = amp(rng), b = amp(rng);
        for (int i = 0; i < grid->nx(); ++i)
            for (int j = 0; j < grid->ny_total(); ++j)
                u.at(i, j) += (a * std::cos(k * grid->x(i)) + b * std::sin(k * grid->x(i))) *
                              std::sin(kPi * grid->y(j) / grid->height());
    }
    const Field n1 = nonlinear_term(u);
    Field u3 = u;
    u3 *= 3.0;
    const Field n9 = nonlinear_term(u3);
    double worst = 0.0;
    for (size_t q = 0; q < n1.data().size(); ++q)
        worst = std::max(worst, std::fabs(n9.data()[q] - 9.0 * n1.data()[q]));
    CHECK(worst < 1e-12 * std::max(1.0, n9.max_abs() / 1e-3));
    CHECK(worst < 1e-10);
}

TEST_CASE("transport products are dealiased") {
    GridPtr grid = Grid::create(32, 32, 6.0);  // cutoff 10
    Field u(grid);
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny_total(); ++j)
            u.at(i, j) = (std::sin(6.0 * grid->x(i)) + std::sin(8.0 * grid->x(i))) *
                         std::sin(kPi * grid->y(j) / grid->height());
    // Raw products carry wavenumbers up to 16; sums above the cutoff must be
    // exactly zero while the difference frequencies survive.
    const SpectralField ns = nonlinear_term_spectral(u, recover_v(u));
    bool saw_retained = false;
    for (int idx = 0; idx < grid->nx(); ++idx) {
        const int k = std::abs(grid->wavenumber(idx));
        for (int j = 0; j < grid->ny_total(); ++j) {
            if (k > grid->dealias_cutoff())
                CHECK(std::abs(ns.at(idx, j)) == 0.0);
            else if (std::abs(ns.at(idx, j)) > 1e-12)
                saw_retained = true;
        }
    }
    CHECK(saw_retained);
}

TEST_CASE("zero state is a fixed point of the right-hand side") {
    GridPtr grid = Grid::create(32, 48, 10.0);
    Model model;
    const Field zero(grid);
    CHECK(rhs(model, zero, zero, 0.0).max_abs() == 0.0);
    model.kind = ModelKind::Parabolic;
    CHECK(rhs(model, zero, zero, 0.0).max_abs() == 0.0);
}

TEST_CASE("x-independent data reduces the rhs to the damped 1D operator") {
    GridPtr grid = Grid::create(16, 128, 6.0);
    const Field u = sample(grid, [&](double, double y) {
        return std::sin(kPi * y / 6.0);
    });
    const Field ut = sample(grid, [](double, double y) { return 0.25 * y; });
    Model model;  // hyperbolic, transport on
    const Field f = rhs(model, u, ut, 0.0);
    Field expect = dy(u, 2);
    expect -= ut;
    expect.zero_boundary_rows();
    double worst = 0.0;
    for (size_t q = 0; q < f.data().size(); ++q)
        worst = std::max(worst, std::fabs(f.data()[q] - expect.data()[q]));
    CHECK(worst == 0.0);
}

TEST_CASE("rhs rejects non-finite states naming the offender") {
    GridPtr grid = Grid::create(16, 32, 5.0);
    Field bad(grid);
    bad.at(3, 4) = std::nan("");
    const Field ok(grid);
    Model model;
    CHECK_THROWS_WITH_AS(rhs(model, bad, ok, 0.0),
                         doctest::Contains("non-finite"), NumericalError);
}

TEST_CASE("manufactured residual of the discrete operator converges in dy") {
    //  r = d2y u* - u*_t - N(u*) + f* - u*_tt  should vanish at order 2.
    const ManufacturedSolution ms;
    std::vector<double> errs;
    for (int ny : {128, 256, 512}) {
        GridPtr grid = Grid::create(32, ny, 20.0);
        const Model model = ms.model(ModelKind::Hyperbolic);
        const double t = 0.3;
        const Field u = ms.sample_u(grid, t);
        const Field ut = ms.sample_ut(grid, t);
        const Field f = rhs(model, u, ut, t);
        // u*_tt = u*, so the residual is f - u*.
        double worst = 0.0;
        for (int i = 0; i < grid->nx(); ++i)
            for (int j = 1; j < grid->ny_total() - 1; ++j)
                worst = std::max(worst, std::fabs(f.at(i, j) - u.at(i, j)));
        errs.push_back(worst);
    }
    const double rate1 = std::log2(errs[0] / errs[1]);
    const double rate2 = std::log2(errs[1] / errs[2]);
    CHECK(rate1 > 1.85);
    CHECK(rate1 < 2.15);
    CHECK(rate2 > 1.85);
    CHECK(rate2 < 2.15);
}

TEST_CASE("outer-flow compatibility residual") {
    GridPtr grid = Grid::create(32, 16, 5.0);
    SUBCASE("a compatible pair has a small residual") {
        OuterFlow outer;
        outer.U = [](double t, double x) { return std::exp(-t) * std::sin(x); };
        // U_tt + U_t = 0, so dp/dx must cancel U U_x.
        outer.dpdx = [](double t, double x) {
            return -std::exp(-2.0 * t) * std::sin(x) * std::cos(x);
        };
        CHECK(compatibility_residual(outer, 0.4, *grid) < 1e-6);
    }
    SUBCASE("an incompatible pair is flagged by a large residual") {
        OuterFlow outer;
        outer.U = [](double t, double x) { return std::exp(-t) * std::sin(x); };
        outer.dpdx = [](double, double) { return 1.0; };
        CHECK(compatibility_residual(outer, 0.4, *grid) > 0.5);
    }
    SUBCASE("the default outer flow is trivially compatible") {
        CHECK(compatibility_residual(OuterFlow{}, 0.0, *grid) == 0.0);
    }
}

TEST_CASE("shift cutoff is 0 at the wall and 1 from mid-height on") {
    CHECK(shift_cutoff(0.0, 10.0) == 0.0);
    CHECK(shift_cutoff(5.0, 10.0) == 1.0);
    CHECK(shift_cutoff(8.0, 10.0) == 1.0);
    const double a = shift_cutoff(1.0, 10.0);
    const double b = shift_cutoff(2.5, 10.0);
    const double c = shift_cutoff(4.0, 10.0);
    CHECK(a > 0.0);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c < 1.0);
}
