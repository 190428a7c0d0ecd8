#pragma once

#include "hpl/field.hpp"

namespace hpl {

/// Forward tangential transform. Coefficients are amplitude-normalized:
/// f(x) = sum_k c_k exp(i 2 pi k x / Lx), so cos(2 pi x / Lx) maps to
/// c_{+-1} = 1/2.
SpectralField to_spectral(const Field& f);

/// Inverse tangential transform (real part; imaginary residue of a
/// conjugate-symmetric input is discarded).
Field to_physical(const SpectralField& g);

/// m-th tangential derivative: coefficient at wavenumber k multiplied by
/// (i 2 pi k / Lx)^m. m = 0 is the identity. For odd m the Nyquist mode is
/// zeroed: it has no conjugate partner, and keeping it would make the
/// physical counterpart complex.
SpectralField dx_pow(const SpectralField& g, int m);

/// Convenience: m-th tangential derivative of a physical field.
Field dx_pow(const Field& f, int m);

/// Wall-normal derivative of order 1 or 2: centered second-order stencils at
/// interior nodes, one-sided second-order stencils at y = 0 and y = Y.
Field dy(const Field& f, int order);

/// (integral integral (1+y^2)^ell a b dx dy) with exact-in-x rectangle rule
/// and trapezoid in y.
double weighted_inner(const Field& a, const Field& b, double ell);

/// Weighted L2 norm || <y>^ell f ||: sqrt of weighted_inner(f, f, ell).
double weighted_l2(const Field& f, double ell);

/// Same, using the grid's own ell.
double weighted_l2(const Field& f);

/// Pairing integral integral w(y) a b dx dy for an arbitrary y-weight.
double inner_with_weight(const Field& a, const Field& b,
                         const std::vector<double>& weight_at_nodes);

/// Coefficient-space l2 norm (Lx * sum_k sum_j w_j |c|^2)^{1/2} with the same
/// trapezoid-in-y weights; equals the unweighted physical norm by Parseval.
double spectral_l2(const SpectralField& g);

}  // namespace hpl
