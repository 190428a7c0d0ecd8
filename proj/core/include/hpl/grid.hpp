#pragma once

#include <memory>
#include <vector>

namespace hpl {

/// Discretization of the strip (x, y) in T x [0, Y]:
/// periodic-uniform in x (Nx nodes, period Lx), uniform in y with Ny interior
/// nodes plus the two boundary nodes y_0 = 0 and y_{Ny+1} = Y.
///
/// The weight exponent `ell` parameterizes the <y>^ell = (1+y^2)^{ell/2}
/// weight used by all weighted norms; `dealias_cutoff` is the largest
/// tangential wavenumber magnitude retained after nonlinear products.
class Grid {
  public:
    Grid(int nx, int ny, double y_height, double lx, double ell,
         int dealias_cutoff = -1);

    static std::shared_ptr<const Grid> create(int nx, int ny, double y_height,
                                              double lx = kDefaultLx,
                                              double ell = 1.0,
                                              int dealias_cutoff = -1);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int ny_total() const { return ny_ + 2; }
    double height() const { return y_height_; }
    double lx() const { return lx_; }
    double ell() const { return ell_; }
    int dealias_cutoff() const { return dealias_cutoff_; }

    double dx() const { return lx_ / nx_; }
    double dy() const { return y_height_ / (ny_ + 1); }

    double x(int i) const { return lx_ * i / nx_; }
    double y(int j) const { return y_nodes_[j]; }
    const std::vector<double>& y_nodes() const { return y_nodes_; }

    /// Signed wavenumber index for FFT bin `idx`, in {-Nx/2+1, ..., Nx/2}.
    int wavenumber(int idx) const { return idx <= nx_ / 2 ? idx : idx - nx_; }
    /// Physical wavenumber 2*pi*k/Lx for FFT bin `idx`.
    double kappa(int idx) const;

    bool same_shape(const Grid& other) const;

    static constexpr double kDefaultLx = 6.283185307179586476925286766559;  // 2*pi

  private:
    int nx_;
    int ny_;
    double y_height_;
    double lx_;
    double ell_;
    int dealias_cutoff_;
    std::vector<double> y_nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace hpl
