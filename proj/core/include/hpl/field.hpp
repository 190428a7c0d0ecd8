#pragma once

#include <complex>
#include <vector>

#include "hpl/grid.hpp"

namespace hpl {

/// Real scalar sampled on the grid, shape (Nx, Ny+2), row-major with the
/// wall-normal index fastest. Plain value type; operations on fields are
/// pure functions returning new fields.
class Field {
  public:
    Field() = default;
    explicit Field(GridPtr grid, double fill = 0.0);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    double& at(int i, int j) { return v_[static_cast<size_t>(i) * stride_ + j]; }
    double at(int i, int j) const { return v_[static_cast<size_t>(i) * stride_ + j]; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    bool empty() const { return v_.empty(); }
    double max_abs() const;
    bool all_finite() const;

    Field& operator+=(const Field& rhs);
    Field& operator-=(const Field& rhs);
    Field& operator*=(double c);

    /// Zero the two wall-normal boundary rows (j = 0 and j = Ny+1).
    void zero_boundary_rows();

  private:
    GridPtr grid_;
    int stride_ = 0;
    std::vector<double> v_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);

/// Tangential Fourier coefficients of a real field: complex matrix indexed by
/// FFT bin (wavenumbers -Nx/2+1..Nx/2) times wall-normal node. Coefficients
/// of a real field satisfy conjugate symmetry c[-k] = conj(c[k]).
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    std::complex<double>& at(int idx, int j) {
        return c_[static_cast<size_t>(idx) * stride_ + j];
    }
    const std::complex<double>& at(int idx, int j) const {
        return c_[static_cast<size_t>(idx) * stride_ + j];
    }

    std::vector<std::complex<double>>& data() { return c_; }
    const std::vector<std::complex<double>>& data() const { return c_; }

    /// Zero every coefficient with |wavenumber| > grid.dealias_cutoff().
    void dealias();

    /// Largest |c[k] - conj(c[-k])| over all modes; 0 for a real-valued field.
    double max_conjugate_asymmetry() const;

  private:
    GridPtr grid_;
    int stride_ = 0;
    std::vector<std::complex<double>> c_;
};

}  // namespace hpl
