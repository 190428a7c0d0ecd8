#include "hpl/field.hpp"

#include <cmath>

#include "hpl/errors.hpp"

namespace hpl {

Field::Field(GridPtr grid, double fill)
    : grid_(std::move(grid)), stride_(grid_->ny_total()),
      v_(static_cast<size_t>(grid_->nx()) * grid_->ny_total(), fill) {}

double Field::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::fabs(x));
    return m;
}

bool Field::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

static void check_same_grid(const Field& a, const Field& b) {
    if (!a.grid().same_shape(b.grid()))
        throw ShapeError("field: operands live on different grids");
}

Field& Field::operator+=(const Field& rhs) {
    check_same_grid(*this, rhs);
    for (size_t n = 0; n < v_.size(); ++n) v_[n] += rhs.v_[n];
    return *this;
}

Field& Field::operator-=(const Field& rhs) {
    check_same_grid(*this, rhs);
    for (size_t n = 0; n < v_.size(); ++n) v_[n] -= rhs.v_[n];
    return *this;
}

Field& Field::operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
}

void Field::zero_boundary_rows() {
    const int jtop = grid_->ny_total() - 1;
    for (int i = 0; i < grid_->nx(); ++i) {
        at(i, 0) = 0.0;
        at(i, jtop) = 0.0;
    }
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), stride_(grid_->ny_total()),
      c_(static_cast<size_t>(grid_->nx()) * grid_->ny_total()) {}

void SpectralField::dealias() {
    const int cutoff = grid_->dealias_cutoff();
    const int nyt = grid_->ny_total();
    for (int idx = 0; idx < grid_->nx(); ++idx) {
        if (std::abs(grid_->wavenumber(idx)) <= cutoff) continue;
        for (int j = 0; j < nyt; ++j) at(idx, j) = 0.0;
    }
}

double SpectralField::max_conjugate_asymmetry() const {
    const int nx = grid_->nx();
    const int nyt = grid_->ny_total();
    double worst = 0.0;
    for (int idx = 0; idx < nx; ++idx) {
        const int mirror = idx == 0 ? 0 : nx - idx;
        for (int j = 0; j < nyt; ++j)
            worst = std::max(worst, std::abs(at(idx, j) - std::conj(at(mirror, j))));
    }
    return worst;
}

}  // namespace hpl
