// hpl: numerical laboratory for the hyperbolic boundary-layer equations.
//
//   hpl run <config>                     integrate and emit series/snapshots
//   hpl audit <run-dir> [--m N]... [--pairs "r,rt;..."]
//   hpl derive [--json] [--out FILE]     symbolic boundary-layer derivation
//   hpl sweep <config> --grid key=v1,v2,...

#include <unistd.h>

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hpl/driver.hpp"

namespace {

std::string self_path(const char* argv0) {
    char buf[4096];
    const ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n > 0) {
        buf[n] = '\0';
        return buf;
    }
    return argv0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic boundary-layer laboratory"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "integrate a configured problem");
    run_cmd->add_option("config", run_config, "configuration file")->required();

    std::string audit_dir, audit_pairs;
    std::vector<int> audit_orders;
    auto* audit_cmd =
        app.add_subcommand("audit", "replay energy and inequality audits");
    audit_cmd->add_option("run-dir", audit_dir, "directory written by hpl run")
        ->required();
    audit_cmd->add_option("--m", audit_orders, "tangential derivative order");
    audit_cmd->add_option("--pairs", audit_pairs,
                          "radius pairs \"rho,rho~;rho,rho~\"");

    bool derive_json = false;
    std::string derive_out;
    auto* derive_cmd =
        app.add_subcommand("derive", "run the symbolic layer derivation");
    derive_cmd->add_flag("--json", derive_json, "emit JSON records");
    derive_cmd->add_option("--out", derive_out, "write to a file instead of stdout");

    std::string sweep_config;
    std::vector<std::string> sweep_grid;
    auto* sweep_cmd = app.add_subcommand("sweep", "fan out runs over a grid");
    sweep_cmd->add_option("config", sweep_config, "base configuration file")
        ->required();
    sweep_cmd->add_option("--grid", sweep_grid, "axis key=v1,v2,...")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) return hpl::driver::cmd_run(run_config);
    if (*audit_cmd)
        return hpl::driver::cmd_audit(audit_dir, audit_orders, audit_pairs);
    if (*derive_cmd) return hpl::driver::cmd_derive(derive_json, derive_out);
    if (*sweep_cmd)
        return hpl::driver::cmd_sweep(sweep_config, sweep_grid,
                                      self_path(argv[0]));
    return 1;
}
