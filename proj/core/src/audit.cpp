#include "hpl/audit.hpp"

#include <cmath>
#include <string>

#include "hpl/errors.hpp"
#include "hpl/model.hpp"
#include "hpl/transforms.hpp"

namespace hpl {

namespace {

// Exact binomial coefficients; m stays <= 32 so doubles hold them exactly.
double binom(int m, int j) {
    double acc = 1.0;
    for (int q = 1; q <= j; ++q) acc = acc * (m - q + 1) / q;
    return std::round(acc);
}

// d/dy (1+y^2)^ell sampled at the grid nodes.
std::vector<double> weight_derivative(const Grid& g, double ell) {
    std::vector<double> w(g.ny_total());
    for (int j = 0; j < g.ny_total(); ++j) {
        const double y = g.y(j);
        w[j] = 2.0 * ell * y * std::pow(1.0 + y * y, ell - 1.0);
    }
    return w;
}

// Physical-space tangential derivatives 0..order of a field.
std::vector<Field> dx_table(const Field& f, int order) {
    const SpectralField s = to_spectral(f);
    std::vector<Field> out;
    out.reserve(order + 1);
    for (int q = 0; q <= order; ++q) out.push_back(to_physical(dx_pow(s, q)));
    return out;
}

}  // namespace

double leibniz_pairing(const State& s, int m, double ell) {
    const Field v = recover_v(s.u);
    const std::vector<Field> du = dx_table(s.u, m + 1);
    const std::vector<Field> dv = dx_table(v, m);
    const Field dtm = dx_pow(s.ut, m);

    std::vector<Field> dyu;
    dyu.reserve(m + 1);
    for (int q = 0; q <= m; ++q) dyu.push_back(dy(du[q], 1));

    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
        Field term(s.u.grid_ptr());
        const Field& a = du[j];
        const Field& b = du[m - j + 1];
        const Field& c = dv[j];
        const Field& d = dyu[m - j];
        for (size_t q = 0; q < term.data().size(); ++q)
            term.data()[q] =
                a.data()[q] * b.data()[q] + c.data()[q] * d.data()[q];
        acc += binom(m, j) * weighted_inner(term, dtm, ell);
    }
    return acc;
}

double leibniz_pairing_assembled(const State& s, int m, double ell) {
    const Field v = recover_v(s.u);
    const Field ux = dx_pow(s.u, 1);
    const Field uy = dy(s.u, 1);
    Field n(s.u.grid_ptr());
    for (size_t q = 0; q < n.data().size(); ++q)
        n.data()[q] =
            s.u.data()[q] * ux.data()[q] + v.data()[q] * uy.data()[q];
    const Field dn = dx_pow(n, m);
    const Field dtm = dx_pow(s.ut, m);
    return weighted_inner(dn, dtm, ell);
}

EnergyAuditAccumulator::EnergyAuditAccumulator(int m, double ell)
    : m_(m), ell_(ell) {
    if (m < 0) throw ConfigError("energy audit: m must be >= 0");
    audit_.m = m;
}

EnergyAuditAccumulator::Integrands
EnergyAuditAccumulator::integrands(const State& s) const {
    const Grid& g = s.u.grid();
    Integrands out{};

    const Field dum = dx_pow(s.u, m_);
    const Field dtm = dx_pow(s.ut, m_);
    const Field dyum = dy(dum, 1);

    const double nt = weighted_l2(dtm, ell_);
    const double nyv = weighted_l2(dyum, ell_);
    out.kinetic_half = 0.5 * nt * nt;
    out.gradient_half = 0.5 * nyv * nyv;
    out.damping = nt * nt;
    out.leibniz = leibniz_pairing(s, m_, ell_);
    out.commutator =
        inner_with_weight(dyum, dtm, weight_derivative(g, ell_));
    return out;
}

void EnergyAuditAccumulator::feed(const State& s) {
    const Integrands now = integrands(s);
    if (count_ == 0) {
        // First sample supplies the initial data terms.
        const Field du0 = dx_pow(s.u, m_);
        const Field du1 = dx_pow(s.ut, m_);
        const double n1 = weighted_l2(du1, ell_);
        const double ny0 = weighted_l2(dy(du0, 1), ell_);
        audit_.rhs_initial = 0.5 * n1 * n1 + 0.5 * ny0 * ny0;
    } else {
        const double h = s.t - prev_t_;
        if (!(h > 0.0))
            throw ConfigError("energy audit: samples must advance in time");
        audit_.lhs_damping += 0.5 * h * (prev_damping_ + now.damping);
        audit_.rhs_leibniz -= 0.5 * h * (prev_leibniz_ + now.leibniz);
        audit_.rhs_commutator -= 0.5 * h * (prev_commutator_ + now.commutator);
    }
    audit_.lhs_kinetic = now.kinetic_half;
    audit_.lhs_gradient = now.gradient_half;
    audit_.t = s.t;
    prev_t_ = s.t;
    prev_damping_ = now.damping;
    prev_leibniz_ = now.leibniz;
    prev_commutator_ = now.commutator;
    ++count_;
}

EnergyAudit EnergyAuditAccumulator::current() const {
    if (count_ == 0) throw ConfigError("energy audit: no samples fed");
    return audit_;
}

EnergyAudit energy_audit(const RunResult& history, int m, double ell) {
    const size_t n = history.snapshots.size();
    if (n < 2)
        throw ConfigError(
            "energy audit: need snapshots at a uniform cadence (>= 2 stored; "
            "set snapshot_cadence when running)");
    const double h0 = history.snapshot_times[1] - history.snapshot_times[0];
    for (size_t q = 2; q < n; ++q) {
        const double h = history.snapshot_times[q] - history.snapshot_times[q - 1];
        if (std::fabs(h - h0) > 1e-9 * std::max(1.0, std::fabs(h0)))
            throw ConfigError(
                "energy audit: snapshot cadence is not uniform; required "
                "uniform spacing " +
                std::to_string(h0));
    }
    EnergyAuditAccumulator acc(m, ell);
    for (const State& s : history.snapshots) acc.feed(s);
    return acc.current();
}

Ledger theorem_ledger(const std::vector<LadderSample>& history,
                      const Ladder& u0_ladder, const Ladder& u1_ladder,
                      const std::vector<LedgerPair>& pairs, double sigma,
                      double rho0, double cstar) {
    if (history.size() < 2)
        throw ConfigError("theorem ledger: need at least two ladder samples");
    if (!(rho0 > 0.0 && rho0 <= 1.0))
        throw ConfigError("theorem ledger: rho0 must lie in (0, 1]");
    for (const auto& p : pairs)
        if (!(0.0 < p.rho && p.rho < p.rho_tilde && p.rho_tilde <= rho0))
            throw ConfigError(
                "theorem ledger: pairs must satisfy 0 < rho < rho~ <= rho0");

    const int M = static_cast<int>(history.front().ladder.size()) - 1;
    Ledger led;
    led.sigma = sigma;
    led.rho0 = rho0;
    led.cstar = cstar;
    const double n0 = gevrey_norm_at(u0_ladder, 2.0 * rho0, sigma,
                                     static_cast<int>(u0_ladder.size()) - 1);
    const double n1 = gevrey_norm_at(u1_ladder, 2.0 * rho0, sigma,
                                     static_cast<int>(u1_ladder.size()) - 1);
    led.c0 = n0 * n0 + n1 * n1;

    for (const auto& pair : pairs) {
        LedgerSeries series;
        series.pair = pair;
        double i1 = 0.0, i2 = 0.0;
        double prev_f1 = 0.0, prev_f2 = 0.0, prev_t = 0.0;
        double run_sup = 0.0;
        for (size_t q = 0; q < history.size(); ++q) {
            const auto& sample = history[q];
            const double nr = gevrey_norm_at(sample.ladder, pair.rho, sigma, M);
            const double nrt =
                gevrey_norm_at(sample.ladder, pair.rho_tilde, sigma, M);
            const double f1 = nr * nr + nr * nr * nr;
            const double f2 = nrt * nrt / (pair.rho_tilde - pair.rho);
            if (q > 0) {
                const double h = sample.t - prev_t;
                i1 += 0.5 * h * (prev_f1 + f1);
                i2 += 0.5 * h * (prev_f2 + f2);
            }
            prev_f1 = f1;
            prev_f2 = f2;
            prev_t = sample.t;

            const double lhs = nr * nr;
            const double denom = led.c0 + i1 + cstar * i2;
            const double chat = denom > 0.0 ? lhs / denom : (lhs > 0.0 ? HUGE_VAL : 0.0);
            run_sup = std::max(run_sup, chat);

            series.t.push_back(sample.t);
            series.lhs.push_back(lhs);
            series.i1.push_back(i1);
            series.i2.push_back(i2);
            series.chat.push_back(chat);
        }
        series.sup_chat = run_sup;

        // Running sup over the final quarter of the sample range.
        const double t_end = series.t.back();
        const double t_quarter = series.t.front() + 0.75 * (t_end - series.t.front());
        double sup_at_quarter = 0.0;
        for (size_t q = 0; q < series.t.size(); ++q) {
            if (series.t[q] <= t_quarter)
                sup_at_quarter = std::max(sup_at_quarter, series.chat[q]);
        }
        if (run_sup > 0.0) {
            series.final_quarter_rel_change =
                (run_sup - sup_at_quarter) / run_sup;
            series.stabilized = series.final_quarter_rel_change < 0.10;
        } else {
            series.final_quarter_rel_change = 0.0;
            series.stabilized = true;
        }
        led.pairs.push_back(std::move(series));
    }
    return led;
}

}  // namespace hpl
