#pragma once

#include <string>
#include <vector>

#include "hpl/audit.hpp"
#include "hpl/gevrey.hpp"
#include "hpl/presets.hpp"

namespace hpl {

/// Fully validated run configuration. Parsed from a flat key = value text
/// file; unknown keys are errors, defaults fill anything omitted, and the
/// effective configuration can be emitted and re-parsed to the same value.
struct RunConfig {
    // grid
    int nx = 32;
    int ny = 128;
    double height = 20.0;
    double lx = Grid::kDefaultLx;
    double ell = 1.0;
    int dealias_cutoff = -1;  // -1: floor(nx/3)

    // model
    std::string model = "hyperbolic";
    bool transport = true;

    // initial data
    std::string preset = "zero";
    int preset_k = 1;
    int preset_n = 1;
    double preset_amplitude = 1.0;
    double preset_rho = 0.5;
    double preset_sigma = 2.0;
    double preset_y0 = 5.0;
    double preset_y1 = 6.0;

    // stepper
    double dt = 1e-3;
    double t_end = 1.0;
    double theta = 0.5;
    double blowup_threshold = 1e8;
    int diffusion_order = 4;
    int monitor_cadence = 1;
    int snapshot_cadence = 0;

    // diagnostics
    double sigma = 2.0;
    double gevrey_rho = 0.5;
    int gevrey_m = 0;  // 0: min(32, dealias cutoff)
    std::string gevrey_pairs;  // "rho,rho~;rho,rho~;..."
    double rho0 = 1.0;
    double cstar_budget = 1e6;

    // output
    std::string output_dir = "out";
    uint64_t seed = 0;

    bool operator==(const RunConfig&) const = default;

    GridPtr make_grid() const;
    Model make_model() const;
    PresetParams preset_params() const;
    State make_state(GridPtr grid) const;
    StepperConfig stepper_config() const;
    GevreyParams gevrey_params() const;
    std::vector<LedgerPair> ledger_pairs() const;
    int effective_gevrey_m() const;

    /// Runs every module-level precondition; throws ConfigError naming the
    /// violated rule.
    void validate() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

/// Effective configuration as text; parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& c);

}  // namespace hpl
