#include "hpl/gevrey.hpp"

#include <cmath>
#include <string>

#include "hpl/errors.hpp"
#include "hpl/transforms.hpp"

namespace hpl {

void GevreyParams::validate() const {
    if (!(rho > 0.0 && rho <= 1.0))
        throw ConfigError("gevrey: rho must satisfy 0 < rho <= 1");
    if (!(sigma >= 1.0 && sigma <= 2.0))
        throw ConfigError("gevrey: sigma must satisfy 1 <= sigma <= 2");
    if (offset != 7) throw ConfigError("gevrey: offset is fixed at 7");
    if (M <= offset)
        throw ConfigError("gevrey: M must exceed the offset 7, got " +
                          std::to_string(M));
}

Ladder derivative_ladder(const Field& u, const Field& ut, int M) {
    if (M < 0) throw ConfigError("derivative_ladder: M must be >= 0");
    const Grid& g = u.grid();
    if (M > g.dealias_cutoff())
        throw ConfigError(
            "derivative_ladder: M=" + std::to_string(M) +
            " exceeds the resolvable maximum " +
            std::to_string(g.dealias_cutoff()) + " (dealias cutoff)");
    if (!u.grid().same_shape(ut.grid()))
        throw ShapeError("derivative_ladder: u and ut on different grids");

    const double ell = g.ell();
    // Only resolved modes enter: content above the dealias cutoff is
    // transform roundoff, and k^m amplification would otherwise let it
    // dominate the high orders.
    SpectralField su = to_spectral(u);
    SpectralField sut = to_spectral(ut);
    su.dealias();
    sut.dealias();

    Ladder ladder(M + 1);
    for (int m = 0; m <= M; ++m) {
        const Field um = to_physical(dx_pow(su, m));
        const Field utm = to_physical(dx_pow(sut, m));
        ladder[m].nt = weighted_l2(utm, ell);
        ladder[m].ny = weighted_l2(dy(um, 1), ell);
        ladder[m].m_nx = m * weighted_l2(um, ell);
    }
    return ladder;
}

double gevrey_log_weight(int m, double rho, double sigma, int offset) {
    const int k = m - offset;
    return k * std::log(rho) - sigma * std::lgamma(static_cast<double>(k) + 1.0);
}

double gevrey_norm_at(const Ladder& ladder, double rho, double sigma, int M,
                      int offset) {
    if (!(rho > 0.0)) throw ConfigError("gevrey: rho must be positive");
    if (static_cast<int>(ladder.size()) < M + 1)
        throw ConfigError("gevrey: ladder shorter than M+1 entries");
    double best = 0.0;
    for (int m = 0; m <= std::min(offset - 1, M); ++m)
        best = std::max(best, ladder[m].sum());
    for (int m = offset; m <= M; ++m) {
        const double w = std::exp(gevrey_log_weight(m, rho, sigma, offset));
        best = std::max(best, w * ladder[m].sum());
    }
    return best;
}

NormDetail gevrey_norm_detailed(const Ladder& ladder,
                                const GevreyParams& params) {
    params.validate();
    if (static_cast<int>(ladder.size()) < params.M + 1)
        throw ConfigError("gevrey: ladder shorter than M+1 entries");
    NormDetail out;
    for (int m = 0; m <= params.M; ++m) {
        const double w =
            m < params.offset
                ? 1.0
                : std::exp(gevrey_log_weight(m, params.rho, params.sigma,
                                             params.offset));
        const double cand = w * ladder[m].sum();
        if (cand > out.value) {
            out.value = cand;
            out.attained_m = m;
        }
    }
    return out;
}

double gevrey_norm(const Ladder& ladder, const GevreyParams& params) {
    return gevrey_norm_detailed(ladder, params).value;
}

RadiusFit estimate_radius(const Ladder& ladder, double sigma, int offset) {
    RadiusFit fit;
    std::vector<double> xi, yv;
    const int M = static_cast<int>(ladder.size()) - 1;
    for (int m = offset + 1; m <= M; ++m) {
        const double b = ladder[m].sum();
        if (!(b > 0.0) || !std::isfinite(b)) continue;
        const int k = m - offset;
        xi.push_back(static_cast<double>(k));
        yv.push_back(std::log(b) -
                     sigma * std::lgamma(static_cast<double>(k) + 1.0));
    }
    const size_t n = xi.size();
    if (n < 6) {
        fit.note = "underdetermined fit: only " + std::to_string(n) +
                   " usable orders, need 6";
        return fit;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t q = 0; q < n; ++q) {
        sx += xi[q];
        sy += yv[q];
        sxx += xi[q] * xi[q];
        sxy += xi[q] * yv[q];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        fit.note = "degenerate abscissae";
        return fit;
    }
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (size_t q = 0; q < n; ++q) {
        const double pred = intercept + slope * xi[q];
        ss_res += (yv[q] - pred) * (yv[q] - pred);
        ss_tot += (yv[q] - ymean) * (yv[q] - ymean);
    }
    fit.fit_quality = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot
                                   : (ss_res <= 1e-20 ? 1.0 : 0.0);
    fit.rho_hat = std::exp(-slope);
    fit.reliable = std::isfinite(fit.rho_hat) && fit.rho_hat > 0.0 &&
                   fit.fit_quality >= 0.99;
    if (!fit.reliable && fit.note.empty())
        fit.note = "fit quality below threshold";
    return fit;
}

GevreyReport gevrey_report(const Field& u, const Field& ut, double t,
                           const GevreyParams& params) {
    params.validate();
    GevreyReport rep;
    rep.t = t;
    rep.ladder = derivative_ladder(u, ut, params.M);
    const NormDetail nd = gevrey_norm_detailed(rep.ladder, params);
    rep.norm = nd.value;
    rep.attained_m = nd.attained_m;
    const RadiusFit fit = estimate_radius(rep.ladder, params.sigma, params.offset);
    rep.rho_hat = fit.rho_hat;
    rep.fit_quality = fit.fit_quality;
    rep.fit_reliable = fit.reliable;
    rep.sigma_used = params.sigma;
    rep.rho_used = params.rho;
    rep.M = params.M;
    return rep;
}

AssumptionCheck check_assumption(const Field& u, const Field& ut,
                                 double budget) {
    (void)ut;  // the low-order bound involves u only
    const SpectralField su = to_spectral(u);
    double sup_u = 0.0, sup_uy = 0.0;
    for (int a = 0; a <= 2; ++a) {
        const Field da = to_physical(dx_pow(su, a));
        sup_u = std::max(sup_u, weighted_l2(da, 0.0));
        sup_uy = std::max(sup_uy, weighted_l2(dy(da, 1), 0.0));
    }
    AssumptionCheck out;
    out.observed = sup_u + sup_uy;
    out.budget = budget;
    out.pass = out.observed <= budget;
    return out;
}

double kr_bound_max_gap(double r, long long k_max) {
    if (!(r > 0.0 && r < 1.0))
        throw ConfigError("kr_bound_max_gap: r must lie in (0,1)");
    const double bound = 1.0 / (1.0 - r);
    double worst = -bound;  // k = 0 term
    double rk = 1.0;
    for (long long k = 1; k <= k_max; ++k) {
        rk *= r;
        worst = std::max(worst, k * rk - bound);
        if (rk == 0.0) break;
    }
    return worst;
}

}  // namespace hpl
