#include "hpl/grid.hpp"

#include <cmath>
#include <string>

#include "hpl/errors.hpp"

namespace hpl {

Grid::Grid(int nx, int ny, double y_height, double lx, double ell,
           int dealias_cutoff)
    : nx_(nx), ny_(ny), y_height_(y_height), lx_(lx), ell_(ell),
      dealias_cutoff_(dealias_cutoff) {
    if (nx_ < 4 || nx_ % 2 != 0)
        throw ConfigError("grid: Nx must be an even integer >= 4, got " +
                          std::to_string(nx_));
    if (ny_ < 4)
        throw ConfigError("grid: Ny must be >= 4, got " + std::to_string(ny_));
    if (!(y_height_ > 0.0))
        throw ConfigError("grid: Y must be positive");
    if (!(lx_ > 0.0))
        throw ConfigError("grid: Lx must be positive");
    if (!(ell_ > 0.5))
        throw ConfigError("grid: ell must satisfy ell > 1/2, got " +
                          std::to_string(ell_));
    if (dealias_cutoff_ < 0) dealias_cutoff_ = nx_ / 3;  // 2/3 rule
    if (dealias_cutoff_ > nx_ / 2)
        throw ConfigError("grid: dealias_cutoff must be <= Nx/2");
    if (dealias_cutoff_ < 1)
        throw ConfigError("grid: dealias_cutoff must be >= 1");

    y_nodes_.resize(ny_ + 2);
    const int n_intervals = ny_ + 1;
    for (int j = 0; j <= n_intervals; ++j)
        y_nodes_[j] = y_height_ * j / n_intervals;
    y_nodes_[0] = 0.0;
    y_nodes_[n_intervals] = y_height_;  // exact endpoints
}

std::shared_ptr<const Grid> Grid::create(int nx, int ny, double y_height,
                                         double lx, double ell,
                                         int dealias_cutoff) {
    return std::make_shared<const Grid>(nx, ny, y_height, lx, ell,
                                        dealias_cutoff);
}

double Grid::kappa(int idx) const {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return two_pi * wavenumber(idx) / lx_;
}

bool Grid::same_shape(const Grid& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ &&
           y_height_ == other.y_height_ && lx_ == other.lx_;
}

}  // namespace hpl
