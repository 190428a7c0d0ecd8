#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hpl/model.hpp"

namespace hpl {

/// Solution state: the unknown u, its time derivative ut (identically zero
/// and unused for the parabolic model), and the current time. Boundary rows
/// of both fields are exactly zero.
struct State {
    Field u;
    Field ut;
    double t = 0.0;

    /// Throws unless boundary rows vanish and all entries are finite.
    void validate() const;
};

struct StepperConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double theta = 0.5;              // implicitness of the diffusion solve
    double blowup_threshold = 1e8;   // on max|u|
    int diffusion_order = 4;         // 4: compact stencil; 2: strictly banded
    int monitor_cadence = 1;         // steps between monitor samples
    int snapshot_cadence = 0;        // steps between snapshots, 0 = off
    bool keep_snapshots = true;      // false: snapshots go to the observer only

    void validate() const;
};

struct Monitor {
    std::string name;
    std::vector<std::string> columns;
    std::function<std::vector<double>(const State&)> eval;
};

struct MonitorSeries {
    std::string name;
    std::vector<std::string> columns;
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
};

enum class RunStatus { Completed, BlowupSuspected };

struct RunResult {
    State final_state;
    RunStatus status = RunStatus::Completed;
    long long steps_taken = 0;
    std::string message;
    std::vector<MonitorSeries> series;
    std::vector<double> snapshot_times;
    std::vector<State> snapshots;
};

/// Wall-normal diffusion operator with Dirichlet rows. Order 4 uses the
/// compact interior stencil (second-order closure one node in from each
/// wall); order 2 is the plain 3-point stencil, whose theta-implicit solve
/// keeps numerical support growth within a few cells of the characteristic
/// cone. Both reduce to tridiagonal sweeps per tangential node.
class DiffusionOperator {
  public:
    explicit DiffusionOperator(GridPtr grid, int order = 4);

    /// A f (the discrete d2/dy2 with zero boundary rows).
    Field apply(const Field& f) const;

    /// Solve (P - c Q) x = P r1 + s Q r2 column by column, where A = P^{-1} Q.
    /// Used as the theta-scheme update with r1 the explicit field and r2 = u.
    Field solve_shifted(double c, const Field& r1, double s,
                        const Field& r2) const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    GridPtr grid_;
};

/// One-step integrator. Damping is applied as exact integrating-factor
/// half-steps around the wave update (hyperbolic); diffusion is
/// theta-implicit; transport and forcing are explicit at the midpoint
/// predictor. Formal order 2 in dt at theta = 1/2.
class Stepper {
  public:
    Stepper(GridPtr grid, Model model, StepperConfig cfg);

    State step(const State& s) const;

    const StepperConfig& config() const { return cfg_; }
    const Model& model() const { return model_; }

    /// Largest dt the advective CFL rule admits for this state
    /// (0.5 * min(dx / max|u|, dy / max|v|); infinity when both vanish).
    double admissible_dt(const State& s) const;

  private:
    GridPtr grid_;
    Model model_;
    StepperConfig cfg_;
    DiffusionOperator diff_;
    double solve_coeff_ = 0.0;   // dt^2 theta^2 (hyperbolic) or dt theta (parabolic)
    double damping_half_ = 1.0;  // exp(-dt/2)

    State step_hyperbolic(const State& s) const;
    State step_parabolic(const State& s) const;
    void check_cfl(const State& s) const;
};

State step(const Model& model, const State& s, const StepperConfig& cfg);

/// Advance s0 to cfg.t_end, sampling monitors at cfg.monitor_cadence and
/// storing snapshots at cfg.snapshot_cadence. An optional observer is invoked
/// at the snapshot cadence (and at the final step) without storing anything;
/// observers must not mutate the state.
RunResult run(const Model& model, const State& s0, const StepperConfig& cfg,
              const std::vector<Monitor>& monitors = {},
              const std::function<void(const State&)>& observer = nullptr);

/// Discrete energy ||ut||^2 + ||du/dy||^2 in the unweighted L2 norm.
double wave_energy(const State& s);

/// Intra-run worker cap: min(hardware threads, HPL_THREADS if set).
int max_threads();

}  // namespace hpl
