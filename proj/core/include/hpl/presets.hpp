#pragma once

#include <cstdint>
#include <string>

#include "hpl/model.hpp"
#include "hpl/stepper.hpp"

namespace hpl {

/// Named initial-data presets:
///   zero                          u0 = u1 = 0
///   mode(k, n, amplitude)         a sin(kx) sin(n pi y / Y); k = 0 gives the
///                                 x-independent profile a sin(n pi y / Y)
///   shear(amplitude)              x-independent wall jet a y (e^-y - e^-Y)
///   bump(amplitude, y0, y1)       x-independent C-infinity bump supported in
///                                 [y0, y1] (finite-propagation studies)
///   gevrey_seed(rho, sigma)       spectrum synthesized so the derivative
///                                 ladder carries the prescribed radius; the
///                                 seed randomizes mode phases only
///   manufactured                  initial slice of the closed-form solution
struct PresetParams {
    std::string name = "zero";
    int k = 1;
    int n = 1;
    double amplitude = 1.0;
    double rho = 0.5;
    double sigma = 2.0;
    double y0 = 5.0;
    double y1 = 6.0;
    uint64_t seed = 0;
};

State make_initial_state(GridPtr grid, const PresetParams& params,
                         ModelKind kind);

/// The closed-form reference solution u*(t,x,y) = e^{-t} sin(x) phi(y) with
/// phi(y) = y (e^{-y} - e^{-Y}), its normal velocity, and the forcing that
/// makes it solve the chosen model exactly.
struct ManufacturedSolution {
    double y_height = 20.0;

    double u(double t, double x, double y) const;
    double ut(double t, double x, double y) const;
    double v(double t, double x, double y) const;
    double forcing_hyperbolic(double t, double x, double y) const;
    double forcing_parabolic(double t, double x, double y) const;

    Field sample_u(GridPtr grid, double t) const;
    Field sample_ut(GridPtr grid, double t) const;

    /// Model with the matching forcing attached (transport on).
    Model model(ModelKind kind) const;
};

}  // namespace hpl
