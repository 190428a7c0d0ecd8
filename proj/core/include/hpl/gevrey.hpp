#pragma once

#include <string>
#include <vector>

#include "hpl/field.hpp"

namespace hpl {

/// Parameters of the weighted tangential-derivative sup norm: radius rho,
/// index sigma, truncation order M and the fixed offset 7 separating the
/// unweighted low block from the factorially weighted high block.
struct GevreyParams {
    double rho = 0.5;
    double sigma = 2.0;
    int M = 32;
    int offset = 7;

    void validate() const;
};

/// One rung of the derivative ladder at tangential order m:
/// (||<y>^l d/dt dx^m u||, ||<y>^l d/dy dx^m u||, m ||<y>^l dx^m u||).
struct LadderEntry {
    double nt = 0.0;
    double ny = 0.0;
    double m_nx = 0.0;

    double sum() const { return nt + ny + m_nx; }
};

using Ladder = std::vector<LadderEntry>;  // indexed m = 0..M

/// Weighted norms of the first M tangential derivatives, d/dx^m applied
/// spectrally and d/dy by finite differences. Requires M <= dealias_cutoff.
Ladder derivative_ladder(const Field& u, const Field& ut, int M);

/// log of the high-block weight rho^(m-offset) / ((m-offset)!)^sigma.
double gevrey_log_weight(int m, double rho, double sigma, int offset = 7);

/// The sup norm over the unweighted low block (m <= 6) and the weighted high
/// block (offset <= m <= M); weights evaluated in the log domain.
double gevrey_norm(const Ladder& ladder, const GevreyParams& params);

struct NormDetail {
    double value = 0.0;
    int attained_m = 0;  // smallest m on ties
};
NormDetail gevrey_norm_detailed(const Ladder& ladder, const GevreyParams& params);

/// Same sup without the rho <= 1 restriction; used for the initial-data
/// norms evaluated at radius 2 rho0.
double gevrey_norm_at(const Ladder& ladder, double rho, double sigma, int M,
                      int offset = 7);

struct RadiusFit {
    double rho_hat = 0.0;
    double fit_quality = 0.0;
    bool reliable = false;
    std::string note;
};

/// Least-squares fit of log b_m - sigma log((m-7)!) against (m-7) over the
/// usable orders m in [offset+1, M]; the slope s yields rho_hat = exp(-s).
/// Flagged unreliable when fewer than 6 usable orders exist or the
/// coefficient of determination falls below 0.99.
RadiusFit estimate_radius(const Ladder& ladder, double sigma, int offset = 7);

struct GevreyReport {
    double t = 0.0;
    Ladder ladder;
    double norm = 0.0;
    int attained_m = 0;
    double rho_hat = 0.0;
    double fit_quality = 0.0;
    bool fit_reliable = false;
    double sigma_used = 0.0;
    double rho_used = 0.0;
    int M = 0;
};

GevreyReport gevrey_report(const Field& u, const Field& ut, double t,
                           const GevreyParams& params);

struct AssumptionCheck {
    double observed = 0.0;
    bool pass = false;
    double budget = 0.0;
};

/// Low-order bound sup_{|a|<=2} ||dx^a u|| + sup_{|a|<=2} ||dx^a du/dy|| in
/// the unweighted L2 norm, compared against a configured budget.
AssumptionCheck check_assumption(const Field& u, const Field& ut,
                                 double budget = 1e6);

/// max over integer k in [0, k_max] of k r^k - 1/(1-r); nonpositive when the
/// bound k r^k <= 1/(1-r) holds.
double kr_bound_max_gap(double r, long long k_max);

}  // namespace hpl
