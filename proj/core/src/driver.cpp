#include "hpl/driver.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hpl/audit.hpp"
#include "hpl/config.hpp"
#include "hpl/errors.hpp"
#include "hpl/expansion/derive.hpp"
#include "hpl/output.hpp"
#include "hpl/snapshot.hpp"
#include "hpl/transforms.hpp"

extern char** environ;

namespace hpl::driver {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json grid_json(const Grid& g) {
    return json{{"nx", g.nx()},
                {"ny", g.ny()},
                {"height", g.height()},
                {"lx", g.lx()},
                {"ell", g.ell()},
                {"dealias_cutoff", g.dealias_cutoff()}};
}

void write_metadata(const fs::path& dir, const std::string& config_text,
                    const Grid& grid, double wall_seconds,
                    const std::vector<std::string>& outputs,
                    const std::string& status) {
    json meta;
    meta["code_version"] = kCodeVersion;
    meta["config_hash"] = fnv1a_hex(config_text);
    meta["grid"] = grid_json(grid);
    meta["wall_clock_s"] = wall_seconds;
    meta["outputs"] = outputs;
    meta["status"] = status;
    write_text_file((dir / "metadata.json").string(), meta.dump(2) + "\n");
}

Ladder ladder_from_row(const std::vector<double>& row, size_t head, int M) {
    Ladder ladder(M + 1);
    for (int m = 0; m <= M; ++m) {
        ladder[m].nt = row[head + 3 * m];
        ladder[m].ny = row[head + 3 * m + 1];
        ladder[m].m_nx = row[head + 3 * m + 2];
    }
    return ladder;
}

std::vector<LedgerPair> parse_pairs(const std::string& spec) {
    RunConfig tmp;
    tmp.gevrey_pairs = spec;
    return tmp.ledger_pairs();
}

// Re-host a field read from disk onto the run grid (which carries the
// configured dealias cutoff).
Field rehost(const Field& f, const GridPtr& grid) {
    if (!f.grid().same_shape(*grid))
        throw ConfigError("audit: snapshot grid does not match the run config");
    Field out(grid);
    out.data() = f.data();
    return out;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
    return kExitNumerical;
}

}  // namespace

int cmd_run(const std::string& config_path) {
    RunConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const auto t_start = std::chrono::steady_clock::now();
    try {
        const fs::path out_dir(cfg.output_dir);
        fs::create_directories(out_dir);
        const std::string effective = emit_config(cfg);
        write_text_file((out_dir / "effective_config.toml").string(), effective);
        std::cout << effective;  // echo of the effective configuration

        GridPtr grid = cfg.make_grid();
        const Model model = cfg.make_model();
        const State s0 = cfg.make_state(grid);
        const StepperConfig scfg = cfg.stepper_config();
        const GevreyParams gp = cfg.gevrey_params();
        const int M = gp.M;

        std::vector<Monitor> monitors;
        monitors.push_back(Monitor{
            "scalars",
            {"max_u", "max_v", "energy", "cstar"},
            [&](const State& s) {
                const AssumptionCheck ac =
                    check_assumption(s.u, s.ut, cfg.cstar_budget);
                return std::vector<double>{s.u.max_abs(),
                                           recover_v(s.u).max_abs(),
                                           wave_energy(s), ac.observed};
            }});
        monitors.push_back(Monitor{
            "gevrey",
            {},
            [&](const State& s) {
                const GevreyReport rep = gevrey_report(s.u, s.ut, s.t, gp);
                std::vector<double> row{rep.norm,
                                        static_cast<double>(rep.attained_m),
                                        rep.rho_hat, rep.fit_quality,
                                        rep.fit_reliable ? 1.0 : 0.0};
                for (const auto& e : rep.ladder) {
                    row.push_back(e.nt);
                    row.push_back(e.ny);
                    row.push_back(e.m_nx);
                }
                return row;
            }});

        fs::path snap_dir = out_dir / "snapshots";
        std::function<void(const State&)> observer;
        int snap_count = 0;
        if (cfg.snapshot_cadence > 0) {
            fs::create_directories(snap_dir);
            observer = [&](const State& s) {
                char name[32];
                std::snprintf(name, sizeof(name), "snap_%06d.hpl", snap_count++);
                write_checkpoint((snap_dir / name).string(), s.u, s.ut, s.t);
            };
        }

        // Snapshots are streamed to disk by the observer at the snapshot
        // cadence; nothing is retained in memory.
        StepperConfig exec_cfg = scfg;
        exec_cfg.keep_snapshots = false;
        RunResult res = run(model, s0, exec_cfg, monitors, observer);

        std::vector<std::string> outputs{"effective_config.toml", "series.csv",
                                         "ladder.csv", "summary.json"};

        {
            CsvWriter series((out_dir / "series.csv").string(),
                             {"t", "max_u", "max_v", "energy", "cstar",
                              "gevrey_norm", "attained_m", "rho_hat",
                              "fit_quality", "fit_reliable"});
            const MonitorSeries& sc = res.series[0];
            const MonitorSeries& gv = res.series[1];
            for (size_t q = 0; q < sc.times.size(); ++q) {
                std::vector<double> row{sc.times[q]};
                row.insert(row.end(), sc.rows[q].begin(), sc.rows[q].end());
                for (int c = 0; c < 5; ++c) row.push_back(gv.rows[q][c]);
                series.row(row);
            }
        }
        {
            CsvWriter ladder_csv((out_dir / "ladder.csv").string(),
                                 {"t", "m", "nt", "ny", "m_nx"});
            const MonitorSeries& gv = res.series[1];
            for (size_t q = 0; q < gv.times.size(); ++q)
                for (int m = 0; m <= M; ++m)
                    ladder_csv.row({gv.times[q], static_cast<double>(m),
                                    gv.rows[q][5 + 3 * m],
                                    gv.rows[q][5 + 3 * m + 1],
                                    gv.rows[q][5 + 3 * m + 2]});
        }

        // Theorem ledger over the sampled ladders when pairs are configured.
        json chat_summary;
        const std::vector<LedgerPair> pairs = cfg.ledger_pairs();
        if (!pairs.empty()) {
            const MonitorSeries& gv = res.series[1];
            std::vector<LadderSample> history;
            for (size_t q = 0; q < gv.times.size(); ++q)
                history.push_back(
                    LadderSample{gv.times[q], ladder_from_row(gv.rows[q], 5, M)});
            const Ladder l0 = derivative_ladder(s0.u, Field(grid), M);
            const Ladder l1 = derivative_ladder(s0.ut, Field(grid), M);
            double cstar = 1.0;
            for (size_t q = 0; q < res.series[0].times.size(); ++q)
                cstar = std::max(cstar, res.series[0].rows[q][3]);
            const Ledger led = theorem_ledger(history, l0, l1, pairs, cfg.sigma,
                                              cfg.rho0, cstar);
            CsvWriter ledger_csv((out_dir / "ledger.csv").string(),
                                 {"rho", "rho_tilde", "t", "lhs", "i1", "i2",
                                  "chat"});
            for (const auto& series : led.pairs)
                for (size_t q = 0; q < series.t.size(); ++q)
                    ledger_csv.row({series.pair.rho, series.pair.rho_tilde,
                                    series.t[q], series.lhs[q], series.i1[q],
                                    series.i2[q], series.chat[q]});
            outputs.push_back("ledger.csv");
            double sup = 0.0;
            bool all_stable = true;
            for (const auto& series : led.pairs) {
                sup = std::max(sup, series.sup_chat);
                all_stable = all_stable && series.stabilized;
            }
            chat_summary = json{{"sup", sup},
                                {"stabilized", all_stable},
                                {"cstar_used", led.cstar},
                                {"c0", led.c0}};
        }

        // Final-state report for the JSON summary.
        const GevreyReport rep =
            gevrey_report(res.final_state.u, res.final_state.ut,
                          res.final_state.t, gp);
        const AssumptionCheck ac = check_assumption(
            res.final_state.u, res.final_state.ut, cfg.cstar_budget);
        json summary;
        summary["t"] = rep.t;
        summary["m"] = rep.attained_m;
        json norms = json::array();
        for (const auto& e : rep.ladder)
            norms.push_back(json{{"nt", e.nt}, {"ny", e.ny}, {"m_nx", e.m_nx}});
        summary["norms"] = norms;
        summary["rho_hat"] = rep.rho_hat;
        summary["fit_quality"] = rep.fit_quality;
        summary["Cstar"] = ac.observed;
        summary["Chat"] = chat_summary.is_null() ? json() : chat_summary;
        summary["status"] = res.status == RunStatus::Completed
                                ? "completed"
                                : "blowup-suspected";
        summary["message"] = res.message;
        summary["steps"] = res.steps_taken;
        write_text_file((out_dir / "summary.json").string(),
                        summary.dump(2) + "\n");
        if (cfg.snapshot_cadence > 0) outputs.push_back("snapshots/");

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t_start)
                .count();
        write_metadata(out_dir, effective, *grid, wall, outputs,
                       res.status == RunStatus::Completed ? "completed"
                                                          : "blowup-suspected");

        if (res.status == RunStatus::BlowupSuspected) {
            std::cerr << res.message << "\n";
            return kExitBlowup;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_audit(const std::string& run_dir, std::vector<int> orders,
              const std::string& pairs_spec) {
    RunConfig cfg;
    try {
        cfg = parse_config((fs::path(run_dir) / "effective_config.toml").string());
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const fs::path snap_dir = fs::path(run_dir) / "snapshots";
        std::vector<fs::path> files;
        if (fs::exists(snap_dir))
            for (const auto& entry : fs::directory_iterator(snap_dir))
                if (entry.path().extension() == ".hpl")
                    files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.size() < 2)
            throw ConfigError(
                "audit: need at least two stored snapshots; rerun with "
                "snapshot_cadence > 0");

        if (orders.empty()) orders.push_back(0);
        std::sort(orders.begin(), orders.end());

        GridPtr grid = cfg.make_grid();
        const double ell = cfg.ell;
        const int M = cfg.effective_gevrey_m();

        std::vector<EnergyAuditAccumulator> accs;
        accs.reserve(orders.size());
        for (int m : orders) accs.emplace_back(m, ell);

        std::vector<LadderSample> history;
        Ladder l0, l1;
        double cstar = 1.0;

        CsvWriter audit_csv((fs::path(run_dir) / "audit.csv").string(),
                            {"t", "m", "lhs_kinetic", "lhs_gradient",
                             "lhs_damping", "rhs_initial", "rhs_leibniz",
                             "rhs_commutator", "residual"});

        for (const auto& file : files) {
            const Checkpoint cp = read_checkpoint(file.string());
            State s{rehost(cp.u, grid), rehost(cp.ut, grid), cp.t};
            for (size_t q = 0; q < accs.size(); ++q) {
                accs[q].feed(s);
                const EnergyAudit a = accs[q].current();
                audit_csv.row({a.t, static_cast<double>(a.m), a.lhs_kinetic,
                               a.lhs_gradient, a.lhs_damping, a.rhs_initial,
                               a.rhs_leibniz, a.rhs_commutator, a.residual()});
            }
            history.push_back(LadderSample{s.t, derivative_ladder(s.u, s.ut, M)});
            if (l0.empty()) {
                l0 = derivative_ladder(s.u, Field(grid), M);
                l1 = derivative_ladder(s.ut, Field(grid), M);
            }
            cstar = std::max(cstar,
                             check_assumption(s.u, s.ut, cfg.cstar_budget).observed);
        }

        json summary;
        json audits = json::array();
        for (auto& acc : accs) {
            const EnergyAudit a = acc.current();
            audits.push_back(json{{"m", a.m},
                                  {"t", a.t},
                                  {"lhs", a.lhs_total()},
                                  {"rhs", a.rhs_total()},
                                  {"residual", a.residual()}});
        }
        summary["audits"] = audits;
        summary["Cstar"] = cstar;

        const std::vector<LedgerPair> pairs =
            pairs_spec.empty() ? cfg.ledger_pairs() : parse_pairs(pairs_spec);
        if (!pairs.empty()) {
            const Ledger led =
                theorem_ledger(history, l0, l1, pairs, cfg.sigma, cfg.rho0, cstar);
            CsvWriter ledger_csv((fs::path(run_dir) / "ledger.csv").string(),
                                 {"rho", "rho_tilde", "t", "lhs", "i1", "i2",
                                  "chat"});
            json jp = json::array();
            for (const auto& series : led.pairs) {
                for (size_t q = 0; q < series.t.size(); ++q)
                    ledger_csv.row({series.pair.rho, series.pair.rho_tilde,
                                    series.t[q], series.lhs[q], series.i1[q],
                                    series.i2[q], series.chat[q]});
                jp.push_back(json{{"rho", series.pair.rho},
                                  {"rho_tilde", series.pair.rho_tilde},
                                  {"sup_chat", series.sup_chat},
                                  {"final_quarter_rel_change",
                                   series.final_quarter_rel_change},
                                  {"stabilized", series.stabilized}});
            }
            summary["Chat"] = jp;
            summary["c0"] = led.c0;
        }
        write_text_file((fs::path(run_dir) / "audit_summary.json").string(),
                        summary.dump(2) + "\n");
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "audit failed: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_derive(bool json_mode, const std::string& out_path) {
    using namespace hpl::expansion;
    const Derivation d = derive_layer_system();
    const std::string text = json_mode ? derivation_json(d) : d.log_text();
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
    return d.matches_target ? kExitOk : 1;
}

namespace {

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

SweepAxis parse_axis(const std::string& spec) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("sweep: --grid expects key=v1,v2,...");
    SweepAxis axis;
    axis.key = spec.substr(0, eq);
    std::istringstream is(spec.substr(eq + 1));
    std::string item;
    while (std::getline(is, item, ',')) axis.values.push_back(item);
    if (axis.values.empty())
        throw ConfigError("sweep: no values for key '" + axis.key + "'");
    return axis;
}

bool is_string_key(const std::string& key) {
    return key == "model" || key == "preset" || key == "gevrey_pairs" ||
           key == "output_dir";
}

// Replace the single `key = ...` line of an emitted config.
std::string override_key(const std::string& text, const std::string& key,
                         const std::string& value) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    bool replaced = false;
    while (std::getline(is, line)) {
        if (line.rfind(key + " = ", 0) == 0) {
            os << key << " = "
               << (is_string_key(key) ? "\"" + value + "\"" : value) << "\n";
            replaced = true;
        } else {
            os << line << "\n";
        }
    }
    if (!replaced)
        throw ConfigError("sweep: unknown config key '" + key + "'");
    return os.str();
}

int spawn_run(const std::string& self_exe, const std::string& config_path,
              const std::string& log_path) {
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 1, log_path.c_str(),
                                     O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&actions, 1, 2);
    std::vector<std::string> args{self_exe, "run", config_path};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    pid_t pid = 0;
    const int rc = posix_spawn(&pid, self_exe.c_str(), &actions, nullptr,
                               argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw NumericalError("sweep: failed to spawn " + self_exe);
    int status = 0;
    waitpid(pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : kExitNumerical;
}

}  // namespace

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& grid_specs,
              const std::string& self_exe) {
    RunConfig base;
    try {
        base = parse_config(config_path);
        if (grid_specs.empty())
            throw ConfigError("sweep: at least one --grid axis is required");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        std::vector<SweepAxis> axes;
        for (const auto& spec : grid_specs) axes.push_back(parse_axis(spec));

        // Cartesian product, last axis fastest.
        std::vector<std::vector<size_t>> combos{{}};
        for (const auto& axis : axes) {
            std::vector<std::vector<size_t>> next;
            for (const auto& combo : combos)
                for (size_t q = 0; q < axis.values.size(); ++q) {
                    auto ext = combo;
                    ext.push_back(q);
                    next.push_back(ext);
                }
            combos = next;
        }

        const fs::path root(base.output_dir);
        fs::create_directories(root / "configs");
        const std::string base_text = emit_config(base);

        json manifest = json::array();
        std::vector<std::string> config_files;
        std::vector<json> entries;
        for (size_t run = 0; run < combos.size(); ++run) {
            char tag[32];
            std::snprintf(tag, sizeof(tag), "run_%03zu", run);
            std::string text = base_text;
            json overrides;
            for (size_t a = 0; a < axes.size(); ++a) {
                text = override_key(text, axes[a].key,
                                    axes[a].values[combos[run][a]]);
                overrides[axes[a].key] = axes[a].values[combos[run][a]];
            }
            text = override_key(text, "output_dir",
                                (root / "runs" / tag).string());
            parse_config_text(text, tag);  // validate before spawning
            const std::string cfg_file = (root / "configs" / (std::string(tag) + ".toml")).string();
            write_text_file(cfg_file, text);
            config_files.push_back(cfg_file);
            json entry;
            entry["run"] = tag;
            entry["overrides"] = overrides;
            entry["config"] = cfg_file;
            entry["output_dir"] = (root / "runs" / tag).string();
            entries.push_back(entry);
        }

        fs::create_directories(root / "runs");
        int worst = kExitOk;
        for (size_t run = 0; run < config_files.size(); ++run) {
            const std::string out_dir = entries[run]["output_dir"];
            fs::create_directories(out_dir);
            const int code = spawn_run(self_exe, config_files[run],
                                       out_dir + "/log.txt");
            entries[run]["exit_code"] = code;
            if (code != kExitOk && worst == kExitOk) worst = code;
            manifest.push_back(entries[run]);
        }
        write_text_file((root / "manifest.json").string(),
                        manifest.dump(2) + "\n");
        return worst;
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace hpl::driver
