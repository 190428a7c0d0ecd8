#pragma once

#include <functional>

#include "hpl/field.hpp"

namespace hpl {

enum class ModelKind { Hyperbolic, Parabolic };

/// Outer tangential velocity U(t,x) and pressure gradient dp/dx(t,x).
/// The pair is expected to satisfy U_tt + U_t + U U_x + p_x = 0; the law is
/// checked (compatibility_residual), not enforced, so tests can inject
/// manufactured forcings. Defaults are U == 0, dpdx == 0.
struct OuterFlow {
    std::function<double(double, double)> U;     // (t, x)
    std::function<double(double, double)> dpdx;  // (t, x)

    bool zero_velocity() const { return !U; }
    bool zero_pressure() const { return !dpdx; }
    double velocity(double t, double x) const { return U ? U(t, x) : 0.0; }
    double pressure_gradient(double t, double x) const {
        return dpdx ? dpdx(t, x) : 0.0;
    }
};

/// Problem description handed to rhs/step/run. Transport can be switched off
/// for linearized runs; forcing is an optional volumetric source used by
/// manufactured-solution studies.
struct Model {
    ModelKind kind = ModelKind::Hyperbolic;
    bool transport = true;
    OuterFlow outer;
    std::function<double(double, double, double)> forcing;  // (t, x, y)
};

/// Normal velocity from incompressibility: v(x,y) = -int_0^y du/dx dy'
/// by cumulative trapezoid, with v(x,0) = 0 exactly.
Field recover_v(const Field& u);

/// Transport term N(u) = u du/dx + v du/dy with spectral d/dx, finite
/// difference d/dy, and the 2/3-rule dealiasing applied to the products.
/// Boundary rows are zero.
Field nonlinear_term(const Field& u, const Field& v);
Field nonlinear_term(const Field& u);

/// The dealiased spectrum of the transport term; every coefficient above the
/// cutoff is exactly zero here.
SpectralField nonlinear_term_spectral(const Field& u, const Field& v);

/// Right-hand side of the evolution written as a first-order system:
/// Hyperbolic: returns F with u_tt = F = d2u/dy2 - u_t - N(u) - dp/dx (+f);
/// Parabolic:  returns F with u_t  = F = d2u/dy2 -       N(u) - dp/dx (+f).
/// A nonzero outer velocity U is absorbed through the shifted unknown
/// u_total = u + chi(y) U(t,x) with a fixed smooth cutoff chi (chi(0) = 0,
/// chi == 1 for y >= Y/2); the far-field condition then enters as the
/// forcing term chi (U U_x + dp/dx) obtained from the outer-flow law.
/// Boundary rows of the result are zero.
Field rhs(const Model& model, const Field& u, const Field& ut, double t);

/// The explicit portion of rhs: transport, pressure, outer-flow shift terms
/// and forcing, but neither diffusion nor damping. Boundary rows are zero.
/// The stepper treats this part explicitly and the rest implicitly.
Field rhs_explicit(const Model& model, const Field& u, double t);

/// Smooth cutoff used by the shifted-unknown reduction: 0 at the wall,
/// identically 1 for y >= Y/2, C-infinity in between.
double shift_cutoff(double y, double y_height);

/// Max over grid x-nodes of |U_tt + U_t + U U_x + dp/dx| at time t, with the
/// time derivatives formed by central differences of spacing h.
double compatibility_residual(const OuterFlow& outer, double t, const Grid& g,
                              double h = 1e-3);

}  // namespace hpl
