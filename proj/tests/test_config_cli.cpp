#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hpl/config.hpp"
#include "hpl/driver.hpp"
#include "hpl/errors.hpp"
#include "hpl/output.hpp"
#include "hpl/presets.hpp"
#include "hpl/snapshot.hpp"

using namespace hpl;
namespace fs = std::filesystem;

namespace {

int sh(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("/tmp/hpl_cli_tests") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    write_text_file(p.string(), text);
}

}  // namespace

TEST_CASE("empty config text yields the documented defaults") {
    const RunConfig c = parse_config_text("");
    CHECK(c.nx == 32);
    CHECK(c.ny == 128);
    CHECK(c.height == 20.0);
    CHECK(c.model == "hyperbolic");
    CHECK(c.preset == "zero");
    CHECK(c.theta == 0.5);
    CHECK(c.dealias_cutoff == -1);
    CHECK(c.make_grid()->dealias_cutoff() == 10);  // floor(32/3)
}

TEST_CASE("emitted effective configuration re-parses to the same value") {
    RunConfig c = parse_config_text(
        "nx = 64\nny = 96\ndt = 0.00125\npreset = \"mode\"\npreset_k = 3\n"
        "preset_amplitude = 0.517\ngevrey_pairs = \"0.25,0.5;0.3,0.6\"\n"
        "sigma = 1.75\nseed = 42\noutput_dir = \"out/x\"\n");
    const RunConfig back = parse_config_text(emit_config(c));
    CHECK(back == c);
    CHECK(back.ledger_pairs().size() == 2);
    CHECK(back.ledger_pairs()[1].rho == 0.3);
}

TEST_CASE("sigma outside the Gevrey range is rejected, citing the rule") {
    CHECK_THROWS_WITH_AS(parse_config_text("sigma = 3\n"),
                         doctest::Contains("1 <= sigma <= 2"), ConfigError);
}

TEST_CASE("unknown keys are hard errors naming the key and line") {
    try {
        parse_config_text("nx = 32\ntypo_key = 7\n", "cfg");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("typo_key") != std::string::npos);
        CHECK(what.find("cfg:2") != std::string::npos);
    }
}

TEST_CASE("malformed lines report position") {
    try {
        parse_config_text("nx = 32\nnot a key value\n", "cfg");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(parse_config_text("nx = twelve\n"),
                         doctest::Contains("expected an integer"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("dt = soon\n"),
                         doctest::Contains("expected a number"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("nx = 8\nnx = 16\n"),
                         doctest::Contains("duplicate"), ConfigError);
}

TEST_CASE("config validation walks the module preconditions") {
    CHECK_THROWS_AS(parse_config_text("nx = 31\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("theta = 0.25\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("preset = \"vortex\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("gevrey_pairs = \"0.6,0.3\"\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("gevrey_m = 40\nnx = 32\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("ell = 0.4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("model = \"elliptic\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nx = 16\n"), ConfigError);  // cutoff 5 < offset+1
    CHECK_THROWS_AS(parse_config_text("diffusion_order = 3\n"), ConfigError);
}

TEST_CASE("cli: run on the zero preset emits all-zero series and exits 0") {
    const fs::path dir = fresh_dir("zero_run");
    const fs::path cfg = dir / "run.toml";
    write(cfg, "preset = \"zero\"\nnx = 32\nny = 32\nheight = 5.0\n"
               "dt = 0.01\nt_end = 0.05\ngevrey_m = 8\noutput_dir = \"" +
               (dir / "out").string() + "\"\n");
    const int rc = sh(std::string(HPL_CLI_PATH) + " run " + cfg.string() +
                      " > " + (dir / "stdout.txt").string());
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "out" / "series.csv"));
    CHECK(fs::exists(dir / "out" / "ladder.csv"));
    CHECK(fs::exists(dir / "out" / "summary.json"));
    CHECK(fs::exists(dir / "out" / "metadata.json"));
    CHECK(fs::exists(dir / "out" / "effective_config.toml"));

    // every numeric column after t is exactly zero
    std::istringstream is(slurp(dir / "out" / "series.csv"));
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        size_t pos = line.find(',');
        const std::string rest = line.substr(pos + 1);
        std::istringstream cols(rest);
        std::string cell;
        while (std::getline(cols, cell, ','))
            CHECK(std::strtod(cell.c_str(), nullptr) == 0.0);
    }
    // the effective config echo re-parses
    const RunConfig eff = parse_config((dir / "out" / "effective_config.toml").string());
    CHECK(eff.nx == 32);
    // metadata carries the config hash of the effective text
    const std::string meta = slurp(dir / "out" / "metadata.json");
    CHECK(meta.find(fnv1a_hex(slurp(dir / "out" / "effective_config.toml"))) !=
          std::string::npos);
}

TEST_CASE("cli: identical config and seed give byte-identical outputs") {
    const fs::path dir = fresh_dir("determinism");
    auto run_one = [&](const std::string& tag) {
        const fs::path cfg = dir / (tag + ".toml");
        write(cfg, "preset = \"gevrey_seed\"\npreset_rho = 0.6\n"
                   "preset_sigma = 1.0\npreset_amplitude = 0.05\nseed = 99\n"
                   "nx = 48\nny = 48\nheight = 10.0\ndt = 0.002\nt_end = 0.02\n"
                   "gevrey_m = 12\nmonitor_cadence = 2\noutput_dir = \"" +
                   (dir / tag).string() + "\"\n");
        REQUIRE(sh(std::string(HPL_CLI_PATH) + " run " + cfg.string() +
                   " > /dev/null") == 0);
    };
    run_one("a");
    run_one("b");
    CHECK(slurp(dir / "a" / "series.csv") == slurp(dir / "b" / "series.csv"));
    CHECK(slurp(dir / "a" / "ladder.csv") == slurp(dir / "b" / "ladder.csv"));
    CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
}

TEST_CASE("cli: configuration problems exit with code 2") {
    const fs::path dir = fresh_dir("bad_config");
    const fs::path cfg = dir / "bad.toml";
    write(cfg, "sigma = 3\n");
    CHECK(sh(std::string(HPL_CLI_PATH) + " run " + cfg.string() +
             " 2> /dev/null") == 2);
    CHECK(sh(std::string(HPL_CLI_PATH) + " run " + (dir / "missing.toml").string() +
             " 2> /dev/null") == 2);
}

TEST_CASE("cli: numerical refusal exits 3, blowup exits 4") {
    const fs::path dir = fresh_dir("failures");
    const fs::path cfl = dir / "cfl.toml";
    write(cfl, "preset = \"mode\"\npreset_k = 2\npreset_amplitude = 50.0\n"
               "nx = 64\nny = 64\nheight = 10.0\ndt = 0.05\nt_end = 0.5\n"
               "gevrey_m = 8\noutput_dir = \"" + (dir / "cfl_out").string() + "\"\n");
    CHECK(sh(std::string(HPL_CLI_PATH) + " run " + cfl.string() +
             " > /dev/null 2>&1") == 3);

    const fs::path blow = dir / "blow.toml";
    write(blow, "preset = \"mode\"\npreset_k = 0\npreset_n = 1\n"
                "preset_amplitude = 1.0\nnx = 32\nny = 64\nheight = 3.14159\n"
                "dt = 0.001\nt_end = 0.2\nblowup_threshold = 0.5\n"
                "transport = false\ngevrey_m = 8\noutput_dir = \"" +
                (dir / "blow_out").string() + "\"\n");
    CHECK(sh(std::string(HPL_CLI_PATH) + " run " + blow.string() +
             " > /dev/null 2>&1") == 4);
}

TEST_CASE("cli: derive matches the golden log and json") {
    const fs::path dir = fresh_dir("derive");
    REQUIRE(sh(std::string(HPL_CLI_PATH) + " derive > " +
               (dir / "derivation.log").string()) == 0);
    REQUIRE(sh(std::string(HPL_CLI_PATH) + " derive --json > " +
               (dir / "derivation.json").string()) == 0);
    CHECK(slurp(dir / "derivation.log") ==
          slurp(fs::path(HPL_GOLDEN_DIR) / "derivation.log"));
    CHECK(slurp(dir / "derivation.json") ==
          slurp(fs::path(HPL_GOLDEN_DIR) / "derivation.json"));
}

TEST_CASE("cli: audit replays energy and inequality ledgers from snapshots") {
    const fs::path dir = fresh_dir("audit");
    const fs::path cfg = dir / "run.toml";
    write(cfg, "preset = \"mode\"\npreset_k = 1\npreset_n = 1\n"
               "preset_amplitude = 0.05\nnx = 32\nny = 64\nheight = 10.0\n"
               "dt = 0.005\nt_end = 0.1\nsnapshot_cadence = 4\n"
               "gevrey_m = 10\noutput_dir = \"" + (dir / "out").string() + "\"\n");
    REQUIRE(sh(std::string(HPL_CLI_PATH) + " run " + cfg.string() +
               " > /dev/null") == 0);
    const int files = std::distance(
        fs::directory_iterator(dir / "out" / "snapshots"), fs::directory_iterator{});
    CHECK(files == 6);  // t = 0 and 5 multiples of 4 steps out of 20

    REQUIRE(sh(std::string(HPL_CLI_PATH) + " audit " + (dir / "out").string() +
               " --m 0 --m 1 --pairs \"0.3,0.6;0.4,0.8\" > /dev/null") == 0);
    CHECK(fs::exists(dir / "out" / "audit.csv"));
    CHECK(fs::exists(dir / "out" / "ledger.csv"));
    CHECK(fs::exists(dir / "out" / "audit_summary.json"));
    const std::string summary = slurp(dir / "out" / "audit_summary.json");
    CHECK(summary.find("\"residual\"") != std::string::npos);
    CHECK(summary.find("\"Cstar\"") != std::string::npos);
    CHECK(summary.find("\"sup_chat\"") != std::string::npos);

    // auditing a directory without snapshots is a usage error
    const fs::path nosnap = fresh_dir("audit_nosnap");
    write(nosnap / "effective_config.toml", emit_config(RunConfig{}));
    CHECK(sh(std::string(HPL_CLI_PATH) + " audit " + nosnap.string() +
             " 2> /dev/null") == 2);
}

TEST_CASE("cli: sweep fans out one process per run and records a manifest") {
    const fs::path dir = fresh_dir("sweep");
    const fs::path cfg = dir / "base.toml";
    write(cfg, "preset = \"manufactured\"\nnx = 24\nny = 96\nheight = 20.0\n"
               "dt = 0.004\nt_end = 0.2\nsnapshot_cadence = 1000000\n"
               "gevrey_m = 8\noutput_dir = \"" + (dir / "sweep_out").string() +
               "\"\n");
    REQUIRE(sh(std::string(HPL_CLI_PATH) + " sweep " + cfg.string() +
               " --grid dt=0.004,0.002,0.001 > /dev/null") == 0);
    const std::string manifest = slurp(dir / "sweep_out" / "manifest.json");
    CHECK(manifest.find("run_000") != std::string::npos);
    CHECK(manifest.find("run_001") != std::string::npos);
    CHECK(manifest.find("run_002") != std::string::npos);
    CHECK(manifest.find("\"exit_code\": 0") != std::string::npos);

    // Post-processing: the runs share a grid, so successive differences of
    // the final states isolate the temporal error; halving dt must show
    // second order.
    auto final_u = [&](const std::string& tag) {
        fs::path snap;
        for (const auto& entry :
             fs::directory_iterator(dir / "sweep_out" / "runs" / tag / "snapshots"))
            if (snap.empty() || entry.path() > snap) snap = entry.path();
        return read_checkpoint(snap.string()).u;
    };
    const Field u4 = final_u("run_000");
    const Field u2 = final_u("run_001");
    const Field u1 = final_u("run_002");
    double d1 = 0.0, d2 = 0.0;
    for (size_t q = 0; q < u4.data().size(); ++q) {
        d1 = std::max(d1, std::fabs(u4.data()[q] - u2.data()[q]));
        d2 = std::max(d2, std::fabs(u2.data()[q] - u1.data()[q]));
    }
    const double order = std::log2(d1 / d2);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("preset validation propagates through make_state") {
    RunConfig c = parse_config_text("preset = \"mode\"\npreset_k = 200\n");
    CHECK_THROWS_AS(c.make_state(c.make_grid()), ConfigError);
    c = parse_config_text("preset = \"bump\"\npreset_y0 = 9.0\npreset_y1 = 8.0\n");
    CHECK_THROWS_AS(c.make_state(c.make_grid()), ConfigError);
}
