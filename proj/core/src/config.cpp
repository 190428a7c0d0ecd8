#include "hpl/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hpl/errors.hpp"

namespace hpl {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
    int col = 0;
    bool quoted = false;
};

using RawMap = std::map<std::string, RawValue>;

[[noreturn]] void fail_at(const std::string& origin, int line, int col,
                          const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": " << what;
    throw ConfigError(os.str());
}

RawMap tokenize(const std::string& text, const std::string& origin) {
    RawMap out;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        // Strip comments (quotes may contain '#').
        std::string line;
        bool in_quote = false;
        for (char c : raw) {
            if (c == '"') in_quote = !in_quote;
            if (c == '#' && !in_quote) break;
            line += c;
        }
        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_at(origin, lineno, static_cast<int>(begin) + 1,
                    "expected 'key = value'");
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        if (key.empty())
            fail_at(origin, lineno, 1, "missing key before '='");
        for (char c : key)
            if (!std::islower(static_cast<unsigned char>(c)) &&
                !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
                fail_at(origin, lineno, 1, "bad key '" + key + "'");
        std::string value = line.substr(eq + 1);
        const size_t lead = value.find_first_not_of(" \t");
        if (lead == std::string::npos)
            fail_at(origin, lineno, static_cast<int>(eq) + 2,
                    "missing value for '" + key + "'");
        value.erase(0, lead);
        value.erase(value.find_last_not_of(" \t") + 1);
        RawValue rv;
        rv.line = lineno;
        rv.col = static_cast<int>(eq) + 2;
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            rv.text = value.substr(1, value.size() - 2);
            rv.quoted = true;
        } else {
            rv.text = value;
        }
        if (out.count(key))
            fail_at(origin, lineno, 1, "duplicate key '" + key + "'");
        out[key] = std::move(rv);
    }
    return out;
}

struct Reader {
    RawMap raw;
    std::string origin;

    bool take(const std::string& key, RawValue& rv) {
        auto it = raw.find(key);
        if (it == raw.end()) return false;
        rv = it->second;
        raw.erase(it);
        return true;
    }

    void get(const std::string& key, double& dst) {
        RawValue rv;
        if (!take(key, rv)) return;
        char* end = nullptr;
        const double v = std::strtod(rv.text.c_str(), &end);
        if (end == rv.text.c_str() || *end != '\0')
            fail_at(origin, rv.line, rv.col, "expected a number for '" + key + "'");
        dst = v;
    }

    void get(const std::string& key, int& dst) {
        RawValue rv;
        if (!take(key, rv)) return;
        char* end = nullptr;
        const long v = std::strtol(rv.text.c_str(), &end, 10);
        if (end == rv.text.c_str() || *end != '\0')
            fail_at(origin, rv.line, rv.col, "expected an integer for '" + key + "'");
        dst = static_cast<int>(v);
    }

    void get(const std::string& key, uint64_t& dst) {
        RawValue rv;
        if (!take(key, rv)) return;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(rv.text.c_str(), &end, 10);
        if (end == rv.text.c_str() || *end != '\0')
            fail_at(origin, rv.line, rv.col,
                    "expected an unsigned integer for '" + key + "'");
        dst = v;
    }

    void get(const std::string& key, bool& dst) {
        RawValue rv;
        if (!take(key, rv)) return;
        if (rv.text == "true")
            dst = true;
        else if (rv.text == "false")
            dst = false;
        else
            fail_at(origin, rv.line, rv.col,
                    "expected true or false for '" + key + "'");
    }

    void get(const std::string& key, std::string& dst) {
        RawValue rv;
        if (!take(key, rv)) return;
        dst = rv.text;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Reader r{tokenize(text, origin), origin};
    RunConfig c;
    r.get("nx", c.nx);
    r.get("ny", c.ny);
    r.get("height", c.height);
    r.get("lx", c.lx);
    r.get("ell", c.ell);
    r.get("dealias_cutoff", c.dealias_cutoff);
    r.get("model", c.model);
    r.get("transport", c.transport);
    r.get("preset", c.preset);
    r.get("preset_k", c.preset_k);
    r.get("preset_n", c.preset_n);
    r.get("preset_amplitude", c.preset_amplitude);
    r.get("preset_rho", c.preset_rho);
    r.get("preset_sigma", c.preset_sigma);
    r.get("preset_y0", c.preset_y0);
    r.get("preset_y1", c.preset_y1);
    r.get("dt", c.dt);
    r.get("t_end", c.t_end);
    r.get("theta", c.theta);
    r.get("blowup_threshold", c.blowup_threshold);
    r.get("diffusion_order", c.diffusion_order);
    r.get("monitor_cadence", c.monitor_cadence);
    r.get("snapshot_cadence", c.snapshot_cadence);
    r.get("sigma", c.sigma);
    r.get("gevrey_rho", c.gevrey_rho);
    r.get("gevrey_m", c.gevrey_m);
    r.get("gevrey_pairs", c.gevrey_pairs);
    r.get("rho0", c.rho0);
    r.get("cstar_budget", c.cstar_budget);
    r.get("output_dir", c.output_dir);
    r.get("seed", c.seed);

    if (!r.raw.empty()) {
        const auto& [key, rv] = *r.raw.begin();
        fail_at(origin, rv.line, 1, "unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream os;
    os << "# effective configuration (all keys explicit)\n";
    os << "nx = " << c.nx << "\n";
    os << "ny = " << c.ny << "\n";
    os << "height = " << fmt(c.height) << "\n";
    os << "lx = " << fmt(c.lx) << "\n";
    os << "ell = " << fmt(c.ell) << "\n";
    os << "dealias_cutoff = " << c.dealias_cutoff << "\n";
    os << "model = \"" << c.model << "\"\n";
    os << "transport = " << (c.transport ? "true" : "false") << "\n";
    os << "preset = \"" << c.preset << "\"\n";
    os << "preset_k = " << c.preset_k << "\n";
    os << "preset_n = " << c.preset_n << "\n";
    os << "preset_amplitude = " << fmt(c.preset_amplitude) << "\n";
    os << "preset_rho = " << fmt(c.preset_rho) << "\n";
    os << "preset_sigma = " << fmt(c.preset_sigma) << "\n";
    os << "preset_y0 = " << fmt(c.preset_y0) << "\n";
    os << "preset_y1 = " << fmt(c.preset_y1) << "\n";
    os << "dt = " << fmt(c.dt) << "\n";
    os << "t_end = " << fmt(c.t_end) << "\n";
    os << "theta = " << fmt(c.theta) << "\n";
    os << "blowup_threshold = " << fmt(c.blowup_threshold) << "\n";
    os << "diffusion_order = " << c.diffusion_order << "\n";
    os << "monitor_cadence = " << c.monitor_cadence << "\n";
    os << "snapshot_cadence = " << c.snapshot_cadence << "\n";
    os << "sigma = " << fmt(c.sigma) << "\n";
    os << "gevrey_rho = " << fmt(c.gevrey_rho) << "\n";
    os << "gevrey_m = " << c.gevrey_m << "\n";
    os << "gevrey_pairs = \"" << c.gevrey_pairs << "\"\n";
    os << "rho0 = " << fmt(c.rho0) << "\n";
    os << "cstar_budget = " << fmt(c.cstar_budget) << "\n";
    os << "output_dir = \"" << c.output_dir << "\"\n";
    os << "seed = " << c.seed << "\n";
    return os.str();
}

GridPtr RunConfig::make_grid() const {
    return Grid::create(nx, ny, height, lx, ell, dealias_cutoff);
}

PresetParams RunConfig::preset_params() const {
    PresetParams p;
    p.name = preset;
    p.k = preset_k;
    p.n = preset_n;
    p.amplitude = preset_amplitude;
    p.rho = preset_rho;
    p.sigma = preset_sigma;
    p.y0 = preset_y0;
    p.y1 = preset_y1;
    p.seed = seed;
    return p;
}

Model RunConfig::make_model() const {
    Model m;
    if (model == "hyperbolic")
        m.kind = ModelKind::Hyperbolic;
    else if (model == "parabolic")
        m.kind = ModelKind::Parabolic;
    else
        throw ConfigError("config: model must be \"hyperbolic\" or \"parabolic\"");
    m.transport = transport;
    if (preset == "manufactured") {
        ManufacturedSolution ms;
        ms.y_height = height;
        m.forcing = m.kind == ModelKind::Hyperbolic
                        ? std::function<double(double, double, double)>(
                              [ms](double t, double x, double y) {
                                  return ms.forcing_hyperbolic(t, x, y);
                              })
                        : std::function<double(double, double, double)>(
                              [ms](double t, double x, double y) {
                                  return ms.forcing_parabolic(t, x, y);
                              });
    }
    return m;
}

State RunConfig::make_state(GridPtr grid) const {
    return make_initial_state(std::move(grid), preset_params(),
                              make_model().kind);
}

StepperConfig RunConfig::stepper_config() const {
    StepperConfig s;
    s.dt = dt;
    s.t_end = t_end;
    s.theta = theta;
    s.blowup_threshold = blowup_threshold;
    s.diffusion_order = diffusion_order;
    s.monitor_cadence = monitor_cadence;
    s.snapshot_cadence = snapshot_cadence;
    return s;
}

int RunConfig::effective_gevrey_m() const {
    const int cutoff = dealias_cutoff < 0 ? nx / 3 : dealias_cutoff;
    return gevrey_m > 0 ? gevrey_m : std::min(32, cutoff);
}

GevreyParams RunConfig::gevrey_params() const {
    GevreyParams p;
    p.rho = gevrey_rho;
    p.sigma = sigma;
    p.M = effective_gevrey_m();
    return p;
}

std::vector<LedgerPair> RunConfig::ledger_pairs() const {
    std::vector<LedgerPair> out;
    if (gevrey_pairs.empty()) return out;
    std::istringstream is(gevrey_pairs);
    std::string item;
    while (std::getline(is, item, ';')) {
        const size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw ConfigError(
                "config: gevrey_pairs entries must look like \"rho,rho~\"");
        LedgerPair p;
        p.rho = std::strtod(item.substr(0, comma).c_str(), nullptr);
        p.rho_tilde = std::strtod(item.substr(comma + 1).c_str(), nullptr);
        out.push_back(p);
    }
    return out;
}

void RunConfig::validate() const {
    make_grid();  // grid invariants
    if (model != "hyperbolic" && model != "parabolic")
        throw ConfigError("config: model must be \"hyperbolic\" or \"parabolic\"");
    static const char* known[] = {"zero",        "mode", "shear",
                                  "bump",        "gevrey_seed",
                                  "manufactured"};
    bool ok = false;
    for (const char* p : known) ok = ok || preset == p;
    if (!ok) throw ConfigError("config: unknown preset '" + preset + "'");
    stepper_config().validate();
    if (!(sigma >= 1.0 && sigma <= 2.0))
        throw ConfigError(
            "config: sigma violates the Gevrey index range 1 <= sigma <= 2");
    gevrey_params().validate();
    if (!(rho0 > 0.0 && rho0 <= 1.0))
        throw ConfigError("config: rho0 must lie in (0, 1]");
    const int cutoff = dealias_cutoff < 0 ? nx / 3 : dealias_cutoff;
    if (effective_gevrey_m() > cutoff)
        throw ConfigError("config: gevrey_m exceeds the dealias cutoff " +
                          std::to_string(cutoff));
    for (const auto& p : ledger_pairs())
        if (!(0.0 < p.rho && p.rho < p.rho_tilde && p.rho_tilde <= rho0))
            throw ConfigError(
                "config: gevrey_pairs must satisfy 0 < rho < rho~ <= rho0");
    if (!(cstar_budget > 0.0))
        throw ConfigError("config: cstar_budget must be positive");
    if (output_dir.empty())
        throw ConfigError("config: output_dir must not be empty");
}

}  // namespace hpl
