#include "nnls/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/io.hpp"

namespace nnls {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::Config, what);
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        bad("not a number: '" + s + "'");
    }
    if (trim(s.substr(used)) != "" || !std::isfinite(v)) bad("not a finite number: '" + s + "'");
    return v;
}

long to_long(const std::string& s)
{
    const double v = to_double(s);
    if (v != std::floor(v)) bad("not an integer: '" + s + "'");
    return static_cast<long>(v);
}

// Empty text means "not set" for optional lists.
std::vector<double> optional_list(const std::string& s)
{
    return trim(s).empty() ? std::vector<double>{} : parse_list(s);
}

bool to_bool(const std::string& s)
{
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    bad("not a boolean: '" + s + "'");
}

std::string num(double v)
{
    return format_number(v);
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
}

std::string grid_text(const GridSpec& g)
{
    return num(g.a) + ":" + num(g.b) + ":" + std::to_string(g.n);
}

struct Key {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define NNLS_DOUBLE(name, field)                                                          \
    {                                                                                     \
        name, {[](ExperimentConfig& c, const std::string& v) { c.field = to_double(v); }, \
               [](const ExperimentConfig& c) { return num(c.field); } }                   \
    }

const std::map<std::string, Key>& keys()
{
    static const std::map<std::string, Key> table = {
        NNLS_DOUBLE("A", bg.A),
        NNLS_DOUBLE("R", bg.R),
        {"profile", {[](ExperimentConfig& c, const std::string& v) { c.profile = v; },
                     [](const ExperimentConfig& c) { return c.profile; }}},
        {"k_grid", {[](ExperimentConfig& c, const std::string& v) { c.k_grid = parse_grid(v); },
                    [](const ExperimentConfig& c) { return grid_text(c.k_grid); }}},
        {"k_log", {[](ExperimentConfig& c, const std::string& v) { c.k_log = to_bool(v); },
                   [](const ExperimentConfig& c) { return std::string(c.k_log ? "true" : "false"); }}},
        {"xi_grid", {[](ExperimentConfig& c, const std::string& v) { c.xi_grid = parse_grid(v); },
                     [](const ExperimentConfig& c) { return grid_text(c.xi_grid); }}},
        {"t_list", {[](ExperimentConfig& c, const std::string& v) { c.t_list = parse_list(v); },
                    [](const ExperimentConfig& c) { return join(c.t_list); }}},
        NNLS_DOUBLE("guard_fraction", guard_fraction),
        NNLS_DOUBLE("slope_tolerance", slope_tolerance),
        NNLS_DOUBLE("zero_box.re_min", zero_box.re_min),
        NNLS_DOUBLE("zero_box.re_max", zero_box.re_max),
        NNLS_DOUBLE("zero_box.im_min", zero_box.im_min),
        NNLS_DOUBLE("zero_box.im_max", zero_box.im_max),
        NNLS_DOUBLE("phase.rel_tol", phase.rel_tol),
        NNLS_DOUBLE("phase.abs_density", phase.abs_density),
        NNLS_DOUBLE("phase.window", phase.window),
        NNLS_DOUBLE("phase.dense_panel", phase.dense_panel),
        {"phase.max_depth", {[](ExperimentConfig& c, const std::string& v) { c.phase.max_depth = int(to_long(v)); },
                             [](const ExperimentConfig& c) { return std::to_string(c.phase.max_depth); }}},
        NNLS_DOUBLE("sim.L", sim.L),
        NNLS_DOUBLE("sim.dx", sim.dx),
        NNLS_DOUBLE("sim.dt", sim.dt),
        NNLS_DOUBLE("sim.c_stab", sim.c_stab),
        NNLS_DOUBLE("sim.t_end", sim.t_end),
        NNLS_DOUBLE("sim.sponge_width", sim.sponge_width),
        NNLS_DOUBLE("sim.sponge_strength", sim.sponge_strength),
        NNLS_DOUBLE("sim.ramp_width", sim.ramp_width),
        NNLS_DOUBLE("sim.blowup_factor", sim.blowup_factor),
        {"sim.snapshot_times",
         {[](ExperimentConfig& c, const std::string& v) { c.sim.snapshot_times = optional_list(v); },
          [](const ExperimentConfig& c) { return join(c.sim.snapshot_times); }}},
        {"kink.x0", {[](ExperimentConfig& c, const std::string& v) { c.kink.x0 = parse_grid(v); },
                     [](const ExperimentConfig& c) { return grid_text(c.kink.x0); }}},
        {"kink.t", {[](ExperimentConfig& c, const std::string& v) { c.kink.t = optional_list(v); },
                    [](const ExperimentConfig& c) { return join(c.kink.t); }}},
        {"threads", {[](ExperimentConfig& c, const std::string& v) {
                         const long n = to_long(v);
                         if (n < 1) bad("threads must be positive");
                         c.threads = unsigned(n);
                     },
                     [](const ExperimentConfig& c) { return std::to_string(c.threads); }}},
        {"out", {[](ExperimentConfig& c, const std::string& v) { c.out = v; },
                 [](const ExperimentConfig& c) { return c.out.string(); }}},
    };
    return table;
}

#undef NNLS_DOUBLE

}  // namespace

std::vector<double> GridSpec::values() const
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[std::size_t(i)] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return v;
}

GridSpec parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3) bad("grid must have the form a:b:n, got '" + text + "'");
    GridSpec g{to_double(parts[0]), to_double(parts[1]), int(to_long(parts[2]))};
    if (g.n < 1) bad("grid count must be positive in '" + text + "'");
    if (g.n > 1 && !(g.b > g.a)) bad("grid needs a < b in '" + text + "'");
    return g;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item));
    }
    if (out.empty()) bad("empty list '" + text + "'");
    return out;
}

std::filesystem::path ExperimentConfig::profile_path() const
{
    const std::filesystem::path p(profile);
    return p.is_absolute() ? p : base_dir / p;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    const auto it = keys().find(key);
    if (it == keys().end()) bad("unknown config key '" + key + "'");
    it->second.set(cfg, value);
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir)
{
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            bad("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) bad("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

void validate(const ExperimentConfig& cfg)
{
    validate(cfg.bg);
    if (!cfg.pure_step() && !std::filesystem::exists(cfg.profile_path()))
        bad("profile file '" + cfg.profile_path().string() + "' does not exist");
    if (!(cfg.k_grid.a > 0.0)) bad("k_grid must contain positive magnitudes");
    for (double t : cfg.t_list)
        if (!(t > 0.0)) bad("t_list entries must be positive");
    if (!(cfg.guard_fraction >= 0.0 && cfg.guard_fraction < 0.5)) bad("guard_fraction must lie in [0, 0.5)");
    if (!(cfg.slope_tolerance > 0.0)) bad("slope_tolerance must be positive");
    const Box& b = cfg.zero_box;
    if (!(b.re_min < b.re_max && b.re_max < 0.0 && 0.0 < b.im_min && b.im_min < b.im_max))
        bad("zero_box must lie in the open upper-left quadrant");
    if (!(cfg.phase.rel_tol > 0.0)) bad("phase.rel_tol must be positive");
    validate(cfg.sim);
}

std::string default_config_text()
{
    const ExperimentConfig def;
    std::string s;
    for (const auto& [name, key] : keys()) s += name + " = " + key.get(def) + "\n";
    return s;
}

}  // namespace nnls
