#include "hpl/model.hpp"

#include <cmath>
#include <string>

#include "hpl/errors.hpp"
#include "hpl/transforms.hpp"

namespace hpl {

Field recover_v(const Field& u) {
    const Grid& g = u.grid();
    const Field ux = dx_pow(u, 1);
    Field v(u.grid_ptr());
    const double h = g.dy();
    for (int i = 0; i < g.nx(); ++i) {
        double acc = 0.0;
        v.at(i, 0) = 0.0;
        for (int j = 1; j < g.ny_total(); ++j) {
            acc += 0.5 * h * (ux.at(i, j - 1) + ux.at(i, j));
            v.at(i, j) = -acc;
        }
    }
    return v;
}

SpectralField nonlinear_term_spectral(const Field& u, const Field& v) {
    if (!u.grid().same_shape(v.grid()))
        throw ShapeError("nonlinear_term: u and v on different grids");
    const Field ux = dx_pow(u, 1);
    const Field uy = dy(u, 1);
    Field n(u.grid_ptr());
    const size_t sz = n.data().size();
    for (size_t q = 0; q < sz; ++q)
        n.data()[q] = u.data()[q] * ux.data()[q] + v.data()[q] * uy.data()[q];
    SpectralField ns = to_spectral(n);
    ns.dealias();
    return ns;
}

Field nonlinear_term(const Field& u, const Field& v) {
    Field n = to_physical(nonlinear_term_spectral(u, v));
    n.zero_boundary_rows();
    return n;
}

Field nonlinear_term(const Field& u) { return nonlinear_term(u, recover_v(u)); }

double shift_cutoff(double y, double y_height) {
    const double s = 2.0 * y / y_height;
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

namespace {

void check_finite(const Field& f, const char* label) {
    if (!f.all_finite())
        throw NumericalError(std::string("rhs: non-finite values in ") + label);
}

// Spectral x-derivative of a closed-form row sampled at the grid's x nodes.
std::vector<double> spectral_dx_row(const std::function<double(double)>& fn,
                                    const Grid& g) {
    GridPtr clone = Grid::create(g.nx(), 4, 1.0, g.lx(), g.ell());
    Field f(clone);
    for (int i = 0; i < g.nx(); ++i) {
        const double v = fn(g.x(i));
        for (int j = 0; j < clone->ny_total(); ++j) f.at(i, j) = v;
    }
    const Field d = dx_pow(f, 1);
    std::vector<double> out(g.nx());
    for (int i = 0; i < g.nx(); ++i) out[i] = d.at(i, 0);
    return out;
}

// u_total = u + chi(y) U(t,x); nullptr outer velocity means u_total == u.
Field total_velocity(const Model& model, const Field& u, double t) {
    if (model.outer.zero_velocity()) return u;
    const Grid& g = u.grid();
    Field tot = u;
    for (int i = 0; i < g.nx(); ++i) {
        const double ui = model.outer.velocity(t, g.x(i));
        for (int j = 0; j < g.ny_total(); ++j)
            tot.at(i, j) += shift_cutoff(g.y(j), g.height()) * ui;
    }
    return tot;
}

}  // namespace

Field rhs_explicit(const Model& model, const Field& u, double t) {
    check_finite(u, "u");
    const Grid& g = u.grid();
    Field f(u.grid_ptr());

    if (model.transport) {
        const Field u_tot = total_velocity(model, u, t);
        const Field n = nonlinear_term(u_tot);
        check_finite(n, "transport term");
        f -= n;
    }

    const bool has_pressure = !model.outer.zero_pressure();
    const bool has_velocity = !model.outer.zero_velocity();
    if (has_pressure || has_velocity) {
        std::vector<double> ux(g.nx(), 0.0);
        if (has_velocity)
            ux = spectral_dx_row(
                [&](double x) { return model.outer.velocity(t, x); }, g);
        for (int i = 0; i < g.nx(); ++i) {
            const double xi = g.x(i);
            const double px = model.outer.pressure_gradient(t, xi);
            const double uux = model.outer.velocity(t, xi) * ux[i];
            for (int j = 0; j < g.ny_total(); ++j) {
                const double chi = shift_cutoff(g.y(j), g.height());
                f.at(i, j) += -px + chi * (uux + px);
            }
        }
    }

    if (has_velocity) {
        // Diffusion of the lifted profile chi(y) U(t,x); the implicit solve
        // only ever sees the homogeneous unknown.
        Field chi_u(u.grid_ptr());
        for (int i = 0; i < g.nx(); ++i) {
            const double ui = model.outer.velocity(t, g.x(i));
            for (int j = 0; j < g.ny_total(); ++j)
                chi_u.at(i, j) = shift_cutoff(g.y(j), g.height()) * ui;
        }
        f += dy(chi_u, 2);
    }

    if (model.forcing) {
        for (int i = 0; i < g.nx(); ++i)
            for (int j = 0; j < g.ny_total(); ++j)
                f.at(i, j) += model.forcing(t, g.x(i), g.y(j));
        check_finite(f, "forcing");
    }

    f.zero_boundary_rows();
    return f;
}

Field rhs(const Model& model, const Field& u, const Field& ut, double t) {
    check_finite(u, "u");
    if (model.kind == ModelKind::Hyperbolic) check_finite(ut, "ut");

    Field f = dy(u, 2);
    check_finite(f, "d2u/dy2");
    if (model.kind == ModelKind::Hyperbolic) f -= ut;
    f += rhs_explicit(model, u, t);
    f.zero_boundary_rows();
    return f;
}

double compatibility_residual(const OuterFlow& outer, double t, const Grid& g,
                              double h) {
    if (outer.zero_velocity() && outer.zero_pressure()) return 0.0;
    const std::vector<double> ux = spectral_dx_row(
        [&](double x) { return outer.velocity(t, x); }, g);
    double worst = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        const double u0 = outer.velocity(t, x);
        const double up = outer.velocity(t + h, x);
        const double um = outer.velocity(t - h, x);
        const double utt = (up - 2.0 * u0 + um) / (h * h);
        const double ut = (up - um) / (2.0 * h);
        const double r = utt + ut + u0 * ux[i] + outer.pressure_gradient(t, x);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

}  // namespace hpl
