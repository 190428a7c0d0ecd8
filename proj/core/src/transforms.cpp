#include "hpl/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "hpl/errors.hpp"

namespace hpl {

namespace {

// One forward/backward plan pair per (Nx, ny_total) layout. Plans are created
// with FFTW_ESTIMATE (deterministic across runs) and FFTW_UNALIGNED so they
// can execute on caller-owned buffers of any alignment. The planner is not
// thread-safe; execution is.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair& plans_for(int nx, int nyt) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(nx, nyt);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> a(static_cast<size_t>(nx) * nyt);
    std::vector<std::complex<double>> b(a.size());
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    int n[1] = {nx};
    PlanPair p;
    // ny_total transforms of length Nx, stride ny_total, unit distance.
    p.fwd = fftw_plan_many_dft(1, n, nyt, ap, nullptr, nyt, 1, bp, nullptr,
                               nyt, 1, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_many_dft(1, n, nyt, ap, nullptr, nyt, 1, bp, nullptr,
                               nyt, 1, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.fwd || !p.bwd)
        throw NumericalError("fftw: plan creation failed for Nx=" +
                             std::to_string(nx));
    return cache.emplace(key, p).first->second;
}

}  // namespace

SpectralField to_spectral(const Field& f) {
    if (f.empty()) throw ShapeError("to_spectral: empty field");
    const Grid& g = f.grid();
    const int nx = g.nx(), nyt = g.ny_total();

    std::vector<std::complex<double>> in(f.data().begin(), f.data().end());
    SpectralField out(f.grid_ptr());
    PlanPair& p = plans_for(nx, nyt);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data().data()));
    const double inv_n = 1.0 / nx;
    for (auto& c : out.data()) c *= inv_n;
    return out;
}

Field to_physical(const SpectralField& gf) {
    if (gf.data().empty()) throw ShapeError("to_physical: empty field");
    const Grid& g = gf.grid();
    const int nx = g.nx(), nyt = g.ny_total();

    std::vector<std::complex<double>> in(gf.data());
    std::vector<std::complex<double>> out(in.size());
    PlanPair& p = plans_for(nx, nyt);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    Field f(gf.grid_ptr());
    for (size_t n = 0; n < out.size(); ++n) f.data()[n] = out[n].real();
    return f;
}

SpectralField dx_pow(const SpectralField& g, int m) {
    if (m < 0) throw ConfigError("dx_pow: derivative order must be >= 0");
    SpectralField out = g;
    if (m == 0) return out;
    const Grid& gr = g.grid();
    const int nx = gr.nx(), nyt = gr.ny_total();
    for (int idx = 0; idx < nx; ++idx) {
        std::complex<double> factor(1.0, 0.0);
        const std::complex<double> ik(0.0, gr.kappa(idx));
        for (int q = 0; q < m; ++q) factor *= ik;
        if (m % 2 == 1 && gr.wavenumber(idx) == nx / 2) factor = 0.0;
        for (int j = 0; j < nyt; ++j) out.at(idx, j) *= factor;
    }
    return out;
}

Field dx_pow(const Field& f, int m) {
    if (m == 0) return f;
    return to_physical(dx_pow(to_spectral(f), m));
}

Field dy(const Field& f, int order) {
    const Grid& g = f.grid();
    const int nx = g.nx(), nyt = g.ny_total();
    const double h = g.dy();
    Field out(f.grid_ptr());
    if (order == 1) {
        const double c = 1.0 / (2.0 * h);
        for (int i = 0; i < nx; ++i) {
            out.at(i, 0) = c * (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2));
            for (int j = 1; j < nyt - 1; ++j)
                out.at(i, j) = c * (f.at(i, j + 1) - f.at(i, j - 1));
            out.at(i, nyt - 1) = c * (3.0 * f.at(i, nyt - 1) -
                                      4.0 * f.at(i, nyt - 2) + f.at(i, nyt - 3));
        }
    } else if (order == 2) {
        const double c = 1.0 / (h * h);
        for (int i = 0; i < nx; ++i) {
            out.at(i, 0) = c * (2.0 * f.at(i, 0) - 5.0 * f.at(i, 1) +
                                4.0 * f.at(i, 2) - f.at(i, 3));
            for (int j = 1; j < nyt - 1; ++j)
                out.at(i, j) =
                    c * (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1));
            out.at(i, nyt - 1) =
                c * (2.0 * f.at(i, nyt - 1) - 5.0 * f.at(i, nyt - 2) +
                     4.0 * f.at(i, nyt - 3) - f.at(i, nyt - 4));
        }
    } else {
        throw ConfigError("dy: order must be 1 or 2, got " +
                          std::to_string(order));
    }
    return out;
}

namespace {

// Trapezoid weights in y (dy * [1/2, 1, ..., 1, 1/2]).
std::vector<double> trapezoid_weights(const Grid& g) {
    std::vector<double> w(g.ny_total(), g.dy());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

}  // namespace

double weighted_inner(const Field& a, const Field& b, double ell) {
    if (!a.grid().same_shape(b.grid()))
        throw ShapeError("weighted_inner: operands on different grids");
    const Grid& g = a.grid();
    const int nx = g.nx(), nyt = g.ny_total();
    const std::vector<double> wy = trapezoid_weights(g);
    double acc = 0.0;
    for (int j = 0; j < nyt; ++j) {
        const double yj = g.y(j);
        const double wgt = wy[j] * std::pow(1.0 + yj * yj, ell);
        double row = 0.0;
        for (int i = 0; i < nx; ++i) row += a.at(i, j) * b.at(i, j);
        acc += wgt * row;
    }
    return acc * g.dx();
}

double weighted_l2(const Field& f, double ell) {
    return std::sqrt(std::max(0.0, weighted_inner(f, f, ell)));
}

double weighted_l2(const Field& f) { return weighted_l2(f, f.grid().ell()); }

double inner_with_weight(const Field& a, const Field& b,
                         const std::vector<double>& weight_at_nodes) {
    if (!a.grid().same_shape(b.grid()))
        throw ShapeError("inner_with_weight: operands on different grids");
    const Grid& g = a.grid();
    const int nx = g.nx(), nyt = g.ny_total();
    if (static_cast<int>(weight_at_nodes.size()) != nyt)
        throw ShapeError("inner_with_weight: weight vector has wrong length");
    const std::vector<double> wy = trapezoid_weights(g);
    double acc = 0.0;
    for (int j = 0; j < nyt; ++j) {
        double row = 0.0;
        for (int i = 0; i < nx; ++i) row += a.at(i, j) * b.at(i, j);
        acc += wy[j] * weight_at_nodes[j] * row;
    }
    return acc * g.dx();
}

double spectral_l2(const SpectralField& gf) {
    const Grid& g = gf.grid();
    const int nx = g.nx(), nyt = g.ny_total();
    const std::vector<double> wy = trapezoid_weights(g);
    double acc = 0.0;
    for (int j = 0; j < nyt; ++j) {
        double col = 0.0;
        for (int idx = 0; idx < nx; ++idx) col += std::norm(gf.at(idx, j));
        acc += wy[j] * col;
    }
    return std::sqrt(acc * g.lx());
}

}  // namespace hpl
