#include "hpl/stepper.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "hpl/errors.hpp"
#include "hpl/transforms.hpp"

namespace hpl {

int max_threads() {
    static const int cap = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("HPL_THREADS")) {
            const int req = std::atoi(env);
            if (req >= 1 && req < hw) hw = req;
        }
        return hw;
    }();
    return cap;
}

namespace {

// Split [0, n) across workers; serial below a work threshold so that small
// runs are not dominated by thread spawn cost. Workers touch disjoint column
// ranges, so results are identical to the serial order.
void for_columns(int n, size_t work_per_column,
                 const std::function<void(int, int)>& body) {
    const int threads = max_threads();
    if (threads <= 1 || static_cast<size_t>(n) * work_per_column < 32768) {
        body(0, n);
        return;
    }
    const int used = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (int w = 0; w < used; ++w) {
        const int lo = n * w / used;
        const int hi = n * (w + 1) / used;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

struct Tridiag {
    std::vector<double> sub, diag, sup;

    explicit Tridiag(int n) : sub(n, 0.0), diag(n, 0.0), sup(n, 0.0) {}

    // y = M x for one column laid out with unit stride.
    void mul(const double* x, double* y, int n) const {
        y[0] = diag[0] * x[0] + sup[0] * x[1];
        for (int j = 1; j < n - 1; ++j)
            y[j] = sub[j] * x[j - 1] + diag[j] * x[j] + sup[j] * x[j + 1];
        y[n - 1] = sub[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
    }
};

// Thomas factorization; the matrices here are strictly diagonally dominant.
struct TriFactor {
    std::vector<double> cp;       // modified superdiagonal
    std::vector<double> inv_den;  // 1 / (diag - sub * cp_prev)
    std::vector<double> sub;

    explicit TriFactor(const Tridiag& m) {
        const int n = static_cast<int>(m.diag.size());
        cp.resize(n);
        inv_den.resize(n);
        sub = m.sub;
        double den = m.diag[0];
        inv_den[0] = 1.0 / den;
        cp[0] = m.sup[0] * inv_den[0];
        for (int j = 1; j < n; ++j) {
            den = m.diag[j] - m.sub[j] * cp[j - 1];
            inv_den[j] = 1.0 / den;
            cp[j] = m.sup[j] * inv_den[j];
        }
    }

    void solve(double* d, int n) const {
        d[0] *= inv_den[0];
        for (int j = 1; j < n; ++j)
            d[j] = (d[j] - sub[j] * d[j - 1]) * inv_den[j];
        for (int j = n - 2; j >= 0; --j) d[j] -= cp[j] * d[j + 1];
    }
};

}  // namespace

struct DiffusionOperator::Impl {
    Tridiag p, q;
    TriFactor p_factor;
    int nyt;

    Impl(Tridiag p_in, Tridiag q_in, int nyt_in)
        : p(std::move(p_in)), q(std::move(q_in)), p_factor(p), nyt(nyt_in) {}
};

DiffusionOperator::DiffusionOperator(GridPtr grid, int order)
    : grid_(std::move(grid)) {
    if (order != 2 && order != 4)
        throw ConfigError("diffusion operator: order must be 2 or 4");
    const int n = grid_->ny_total();
    const double h2 = grid_->dy() * grid_->dy();
    Tridiag p(n), q(n);
    // Dirichlet rows: P identity, Q zero.
    p.diag[0] = 1.0;
    p.diag[n - 1] = 1.0;
    // One node in from each wall: plain 3-point row.
    p.diag[1] = 1.0;
    q.sub[1] = 1.0 / h2;
    q.diag[1] = -2.0 / h2;
    q.sup[1] = 1.0 / h2;
    p.diag[n - 2] = 1.0;
    q.sub[n - 2] = 1.0 / h2;
    q.diag[n - 2] = -2.0 / h2;
    q.sup[n - 2] = 1.0 / h2;
    // Interior: either the plain 3-point rows, or the compact relation
    // (f''_{j-1} + 10 f''_j + f''_{j+1}) / 12 = delta2 f_j.
    for (int j = 2; j < n - 2; ++j) {
        if (order == 4) {
            p.sub[j] = 1.0 / 12.0;
            p.diag[j] = 10.0 / 12.0;
            p.sup[j] = 1.0 / 12.0;
        } else {
            p.diag[j] = 1.0;
        }
        q.sub[j] = 1.0 / h2;
        q.diag[j] = -2.0 / h2;
        q.sup[j] = 1.0 / h2;
    }
    impl_ = std::make_shared<const Impl>(std::move(p), std::move(q), n);
}

Field DiffusionOperator::apply(const Field& f) const {
    const int nx = grid_->nx();
    const int n = impl_->nyt;
    Field out(f.grid_ptr());
    for_columns(nx, static_cast<size_t>(n) * 4, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            double* col = &out.data()[static_cast<size_t>(i) * n];
            impl_->q.mul(&f.data()[static_cast<size_t>(i) * n], col, n);
            impl_->p_factor.solve(col, n);
        }
    });
    return out;
}

Field DiffusionOperator::solve_shifted(double c, const Field& r1, double s,
                                       const Field& r2) const {
    const int nx = grid_->nx();
    const int n = impl_->nyt;
    Tridiag m(n);
    for (int j = 0; j < n; ++j) {
        m.sub[j] = impl_->p.sub[j] - c * impl_->q.sub[j];
        m.diag[j] = impl_->p.diag[j] - c * impl_->q.diag[j];
        m.sup[j] = impl_->p.sup[j] - c * impl_->q.sup[j];
    }
    const TriFactor mf(m);
    Field out(r1.grid_ptr());
    std::vector<double> scratch;
    for_columns(nx, static_cast<size_t>(n) * 10, [&](int lo, int hi) {
        std::vector<double> tmp(n);
        for (int i = lo; i < hi; ++i) {
            double* col = &out.data()[static_cast<size_t>(i) * n];
            impl_->p.mul(&r1.data()[static_cast<size_t>(i) * n], col, n);
            if (s != 0.0) {
                impl_->q.mul(&r2.data()[static_cast<size_t>(i) * n], tmp.data(), n);
                for (int j = 0; j < n; ++j) col[j] += s * tmp[j];
            }
            mf.solve(col, n);
        }
    });
    return out;
}

void State::validate() const {
    if (u.empty()) throw ConfigError("state: empty field");
    if (!u.all_finite() || (!ut.empty() && !ut.all_finite()))
        throw NumericalError("state: non-finite entries");
    const Grid& g = u.grid();
    const int jtop = g.ny_total() - 1;
    for (int i = 0; i < g.nx(); ++i) {
        if (u.at(i, 0) != 0.0 || u.at(i, jtop) != 0.0)
            throw ConfigError("state: u boundary rows must vanish");
        if (!ut.empty() && (ut.at(i, 0) != 0.0 || ut.at(i, jtop) != 0.0))
            throw ConfigError("state: ut boundary rows must vanish");
    }
}

void StepperConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("stepper: dt must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("stepper: t_end must be >= 0");
    if (t_end > 0.0 && dt > t_end + 1e-15)
        throw ConfigError("stepper: dt must not exceed t_end");
    if (theta < 0.5 || theta > 1.0)
        throw ConfigError("stepper: theta must lie in [1/2, 1]");
    if (!(blowup_threshold > 0.0))
        throw ConfigError("stepper: blowup_threshold must be positive");
    if (diffusion_order != 2 && diffusion_order != 4)
        throw ConfigError("stepper: diffusion_order must be 2 or 4");
    if (monitor_cadence < 1)
        throw ConfigError("stepper: monitor_cadence must be >= 1");
    if (snapshot_cadence < 0)
        throw ConfigError("stepper: snapshot_cadence must be >= 0");
}

Stepper::Stepper(GridPtr grid, Model model, StepperConfig cfg)
    : grid_(std::move(grid)), model_(std::move(model)), cfg_(cfg),
      diff_(grid_, cfg.diffusion_order) {
    cfg_.validate();
    if (model_.kind == ModelKind::Hyperbolic) {
        solve_coeff_ = cfg_.dt * cfg_.dt * cfg_.theta * cfg_.theta;
        damping_half_ = std::exp(-0.5 * cfg_.dt);
    } else {
        solve_coeff_ = cfg_.dt * cfg_.theta;
    }
}

double Stepper::admissible_dt(const State& s) const {
    double bound = std::numeric_limits<double>::infinity();
    const double max_u = s.u.max_abs();
    if (max_u > 0.0) bound = std::min(bound, 0.5 * grid_->dx() / max_u);
    const double max_v = recover_v(s.u).max_abs();
    if (max_v > 0.0) bound = std::min(bound, 0.5 * grid_->dy() / max_v);
    return bound;
}

void Stepper::check_cfl(const State& s) const {
    if (!model_.transport) return;
    const double admissible = admissible_dt(s);
    if (cfg_.dt > admissible) {
        std::ostringstream os;
        os << "stepper: CFL violation at t=" << s.t << ": dt=" << cfg_.dt
           << " exceeds admissible dt=" << admissible;
        throw NumericalError(os.str());
    }
}

State Stepper::step_hyperbolic(const State& s) const {
    const double dt = cfg_.dt;
    const double th = cfg_.theta;

    Field w = s.ut;
    w *= damping_half_;

    // Midpoint predictor for the explicit terms.
    Field u_mid = s.u;
    {
        Field half = w;
        half *= 0.5 * dt;
        u_mid += half;
        u_mid.zero_boundary_rows();
    }
    const Field g_mid = rhs_explicit(model_, u_mid, s.t + 0.5 * dt);
    const Field a_u = diff_.apply(s.u);

    // (P - dt^2 th^2 Q) u+ = P [u + dt w + dt^2 th g] + dt^2 th (1-th) Q u.
    Field r1 = s.u;
    for (size_t n = 0; n < r1.data().size(); ++n)
        r1.data()[n] += dt * w.data()[n] + dt * dt * th * g_mid.data()[n];
    Field u_new =
        diff_.solve_shifted(solve_coeff_, r1, dt * dt * th * (1.0 - th), s.u);
    u_new.zero_boundary_rows();

    const Field a_unew = diff_.apply(u_new);
    Field w_new = w;
    for (size_t n = 0; n < w_new.data().size(); ++n)
        w_new.data()[n] += dt * (th * a_unew.data()[n] +
                                 (1.0 - th) * a_u.data()[n] + g_mid.data()[n]);
    w_new *= damping_half_;
    w_new.zero_boundary_rows();

    return State{std::move(u_new), std::move(w_new), s.t + dt};
}

State Stepper::step_parabolic(const State& s) const {
    const double dt = cfg_.dt;
    const double th = cfg_.theta;

    const Field a_u = diff_.apply(s.u);
    const Field g0 = rhs_explicit(model_, s.u, s.t);
    Field u_mid = s.u;
    for (size_t n = 0; n < u_mid.data().size(); ++n)
        u_mid.data()[n] += 0.5 * dt * (a_u.data()[n] + g0.data()[n]);
    u_mid.zero_boundary_rows();
    const Field g_mid = rhs_explicit(model_, u_mid, s.t + 0.5 * dt);

    Field r1 = s.u;
    for (size_t n = 0; n < r1.data().size(); ++n)
        r1.data()[n] += dt * g_mid.data()[n];
    Field u_new = diff_.solve_shifted(solve_coeff_, r1, dt * (1.0 - th), s.u);
    u_new.zero_boundary_rows();

    Field ut_new(s.u.grid_ptr());
    return State{std::move(u_new), std::move(ut_new), s.t + dt};
}

State Stepper::step(const State& s) const {
    check_cfl(s);
    State next = model_.kind == ModelKind::Hyperbolic ? step_hyperbolic(s)
                                                      : step_parabolic(s);
    if (!next.u.all_finite() || !next.ut.all_finite())
        throw NumericalError("stepper: non-finite state after step at t=" +
                             std::to_string(next.t));
    return next;
}

State step(const Model& model, const State& s, const StepperConfig& cfg) {
    s.validate();
    Stepper st(s.u.grid_ptr(), model, cfg);
    return st.step(s);
}

RunResult run(const Model& model, const State& s0, const StepperConfig& cfg,
              const std::vector<Monitor>& monitors,
              const std::function<void(const State&)>& observer) {
    s0.validate();
    cfg.validate();
    Stepper st(s0.u.grid_ptr(), model, cfg);

    RunResult res;
    res.series.reserve(monitors.size());
    for (const auto& m : monitors)
        res.series.push_back(MonitorSeries{m.name, m.columns, {}, {}});

    const long long n_steps =
        cfg.t_end <= 0.0
            ? 0
            : static_cast<long long>(std::llround(cfg.t_end / cfg.dt));

    auto sample = [&](const State& s) {
        for (size_t q = 0; q < monitors.size(); ++q) {
            res.series[q].times.push_back(s.t);
            res.series[q].rows.push_back(monitors[q].eval(s));
        }
    };
    auto snapshot = [&](const State& s) {
        if (observer) observer(s);
        if (cfg.snapshot_cadence > 0 && cfg.keep_snapshots) {
            res.snapshot_times.push_back(s.t);
            res.snapshots.push_back(s);
        }
    };

    State s = s0;
    sample(s);
    if (cfg.snapshot_cadence > 0 || observer) snapshot(s);

    for (long long k = 1; k <= n_steps; ++k) {
        s = st.step(s);
        res.steps_taken = k;

        const bool last = (k == n_steps);
        if (k % cfg.monitor_cadence == 0 || last) sample(s);
        const int snap_cad = cfg.snapshot_cadence > 0 ? cfg.snapshot_cadence : 1;
        if ((cfg.snapshot_cadence > 0 || observer) &&
            (k % snap_cad == 0 || last))
            snapshot(s);

        if (s.u.max_abs() > cfg.blowup_threshold) {
            res.status = RunStatus::BlowupSuspected;
            std::ostringstream os;
            os << "blowup suspected at t=" << s.t << " (max|u|=" << s.u.max_abs()
               << " > " << cfg.blowup_threshold << ")";
            res.message = os.str();
            break;
        }
    }
    res.final_state = std::move(s);
    if (res.status == RunStatus::Completed) res.message = "completed";
    return res;
}

double wave_energy(const State& s) {
    const double nt = weighted_l2(s.ut, 0.0);
    const double ny = weighted_l2(dy(s.u, 1), 0.0);
    return nt * nt + ny * ny;
}

}  // namespace hpl
