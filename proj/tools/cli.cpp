#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nnls/analysis.hpp"
#include "nnls/asymptotics.hpp"
#include "nnls/errors.hpp"
#include "nnls/io.hpp"
#include "nnls/parallel.hpp"
#include "nnls/pde.hpp"
#include "nnls/phase.hpp"
#include "nnls/scattering.hpp"
#include "nnls/spectrum.hpp"

namespace nnls::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

std::vector<double> k_values(const ExperimentConfig& cfg)
{
    std::vector<double> mags;
    const GridSpec& g = cfg.k_grid;
    if (cfg.k_log && g.n > 1) {
        for (int i = 0; i < g.n; ++i) mags.push_back(g.a * std::pow(g.b / g.a, double(i) / double(g.n - 1)));
    } else {
        mags = g.values();
    }
    std::vector<double> ks;
    for (auto it = mags.rbegin(); it != mags.rend(); ++it) ks.push_back(-*it);
    for (double m : mags) ks.push_back(m);
    return ks;
}

double rel(cplx a, cplx ref)
{
    return std::abs(a - ref) / std::max(std::abs(ref), 1e-300);
}

std::vector<double> snapshot_times(const ExperimentConfig& cfg)
{
    std::vector<double> t = cfg.sim.snapshot_times.empty() ? cfg.t_list : cfg.sim.snapshot_times;
    t.push_back(cfg.sim.t_end);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

struct Run {
    std::vector<FieldSnapshot> snaps;
    std::optional<BlowUpError> blow_up;
    double ramp_width = 0.0;
};

Run run_simulation(const ExperimentConfig& cfg)
{
    SimulationConfig sc = cfg.sim;
    sc.threads = cfg.threads;
    sc.snapshot_times = snapshot_times(cfg);
    Run run;
    run.ramp_width = sc.ramp_width > 0.0 ? sc.ramp_width : 4.0 * sc.dx;
    const InitialProfile prof = initial_profile(cfg);
    Simulator sim(simulation_datum(prof, run.ramp_width), FarField{0.0, cfg.bg.A}, sc);
    try {
        for (double t : sc.snapshot_times) {
            sim.advance_to(t);
            run.snaps.push_back(sim.snapshot());
        }
    } catch (const BlowUpError& e) {
        run.blow_up = e;
    }
    return run;
}

json blow_up_json(const std::optional<BlowUpError>& b)
{
    if (!b) return nullptr;
    return {{"time", b->time()}, {"position", b->position()}, {"message", b->what()}};
}

std::string time_tag(double t)
{
    return "t_" + format_number(t) + ".csv";
}

const char* branch_text(ImNuBranch b)
{
    return branch_name(b);
}

}  // namespace

int scatter(const ExperimentConfig& cfg, std::ostream& log)
{
    const auto ks = k_values(cfg);
    const InitialProfile prof = initial_profile(cfg);
    const NumericSpectrum num(prof);
    std::optional<PureStepSpectrum> closed;
    if (cfg.pure_step()) closed.emplace(cfg.bg);
    std::vector<AxisValues> vals(ks.size()), refs(ks.size());
    parallel_for(ks.size(), cfg.threads, [&](std::size_t i) {
        vals[i] = num.on_axis(ks[i]);
        if (closed) refs[i] = closed->on_axis(ks[i]);
    });
    std::vector<std::string> header = {"k", "a1_re", "a1_im", "a2_re", "a2_im", "b_re", "b_im",
                                       "r1_re", "r1_im", "r2_re", "r2_im", "identity_residual"};
    if (closed)
        for (const char* c : {"a1_closed_re", "a1_closed_im", "a2_closed_re", "a2_closed_im", "b_closed_re",
                              "b_closed_im", "rel_err"})
            header.push_back(c);
    CsvTable table(header);
    double max_res = 0.0, max_rel = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const AxisValues& v = vals[i];
        table.row().add(ks[i]).add(v.a1).add(v.a2).add(v.b).add(v.r1()).add(v.r2()).add(v.identity_residual());
        max_res = std::max(max_res, v.identity_residual());
        if (closed) {
            const AxisValues& r = refs[i];
            const double e = std::max({rel(v.a1, r.a1), rel(v.a2, r.a2), cfg.bg.A == 0.0 ? std::abs(v.b) : rel(v.b, r.b)});
            table.add(r.a1).add(r.a2).add(r.b).add(e);
            max_rel = std::max(max_rel, e);
        }
    }
    write_text(cfg.out / "scatter.csv", table.str());
    json s = {{"A", cfg.bg.A}, {"R", cfg.bg.R}, {"profile", cfg.profile}, {"points", ks.size()},
              {"max_identity_residual", max_res}};
    if (closed) s["max_rel_err_closed_form"] = max_rel;
    write_text(cfg.out / "scatter.json", dump(s));
    log << "scatter: " << ks.size() << " points, max identity residual " << max_res;
    if (closed) log << ", max relative error vs closed form " << max_rel;
    log << "\n";
    return 0;
}

int zeros(const ExperimentConfig& cfg, std::ostream& log)
{
    try {
        const Analysis a = analyse(cfg, false);
        write_text(cfg.out / "zeros.json", zeros_json(a.zeros, a.omegas, a.report));
        log << "zeros: n = " << a.zeros.n() << ", " << a.omegas.omegas.size() << " thresholds, assumptions "
            << (a.report.all_ok() ? "hold" : "violated") << "\n";
        for (const auto& d : a.report.diagnostics) log << "  " << d << "\n";
        return 0;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BifurcationProximity || !cfg.pure_step()) throw;
        // At R = n pi / A the real pair replaces a complex zero; report it and fail.
        const PureStepSpectrum spec(cfg.bg);
        const auto real = spectral_singularities(spec, std::max(2.0, 2.0 * cfg.bg.A));
        json j = {{"n", nullptr}, {"bifurcation", true}, {"real_zeros", real}, {"message", e.what()}};
        write_text(cfg.out / "zeros.json", dump(j));
        log << "zeros: " << e.what() << "\n";
        for (double k : real) log << "  real zero of a1 at k = " << format_number(k) << "\n";
        return int(e.error_class());
    }
}

int predict(const ExperimentConfig& cfg, const Flags& flags, std::ostream& log)
{
    const Analysis a = analyse(cfg, true);
    CsvTable table({"xi", "t", "family", "m", "branch", "nu_re", "nu_im", "leading_re", "leading_im",
                    "alpha_a", "a_re", "a_im", "a_power", "alpha_b", "b_re", "b_im", "b_power",
                    "remainder_kind", "remainder_exponent", "remainder_log", "value_re", "value_im"});
    int flagged = 0;
    for (double xi : cfg.xi_grid.values()) {
        for (double t : cfg.t_list) {
            table.row().add(xi).add(t);
            try {
                const auto p = nnls::predict(xi, t, a.zeros, a.omegas, *a.phase, cfg.guard_fraction);
                table.add(family_name(p.sector.family)).add(double(p.sector.m)).add(branch_text(p.branch)).add(p.nu).add(p.leading);
                for (std::size_t j = 0; j < 2; ++j) {
                    if (j < p.oscillatory.size()) {
                        const auto& o = p.oscillatory[j];
                        table.add(double(o.alpha_index)).add(o.amplitude).add(o.t_power);
                    } else {
                        table.add_empty(4);
                    }
                }
                table.add(double(p.remainder.kind)).add(p.remainder.exponent).add(p.remainder.with_log ? "1" : "0").add(p.value());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::TransitionZone) throw;
                ++flagged;
                table.add("transition").add_empty(19);
            }
        }
    }
    write_text(cfg.out / "predict.csv", table.str());
    log << "predict: " << table.rows() << " rows, " << flagged << " inside guard bands\n";
    if (flags.kink) {
        CsvTable kt({"m", "side", "t", "x0", "x", "q_re", "q_im", "singular"});
        const std::vector<double> ts = cfg.kink.t.empty() ? cfg.t_list : cfg.kink.t;
        for (int m = 0; m < a.zeros.n(); ++m) {
            for (KinkSide side : {KinkSide::XPositive, KinkSide::XNegative}) {
                const KinkProfile k(m, side, a.zeros, *a.phase);
                for (double t : ts) {
                    for (double x0 : cfg.kink.x0.values()) {
                        kt.row().add(double(m)).add(side_name(side)).add(t).add(x0).add(k.x_of(x0, t));
                        try {
                            kt.add(k(x0, t)).add("0");
                        } catch (const Error& e) {
                            if (e.kind() != ErrorKind::BlowUpPoint) throw;
                            kt.add_empty(2).add("1");
                        }
                    }
                }
            }
        }
        write_text(cfg.out / "kink.csv", kt.str());
        log << "predict: kink table with " << kt.rows() << " rows\n";
    }
    return 0;
}

int simulate(const ExperimentConfig& cfg, std::ostream& log)
{
    const Run run = run_simulation(cfg);
    json snaps = json::array();
    for (const auto& s : run.snaps) {
        const std::string file = "snapshots/" + time_tag(s.t);
        write_text(cfg.out / file, snapshot_csv(s));
        double peak = 0.0;
        for (cplx v : s.q) peak = std::max(peak, std::abs(v));
        snaps.push_back({{"t", s.t}, {"file", file}, {"max_abs", peak}, {"sponge_deviation", s.sponge_deviation}});
    }
    json j = {{"L", cfg.sim.L}, {"dx", cfg.sim.dx}, {"ramp_width", run.ramp_width}, {"t_end", cfg.sim.t_end},
              {"sponge_width", cfg.sim.sponge_width}, {"sponge_strength", cfg.sim.sponge_strength},
              {"snapshots", snaps}, {"blow_up", blow_up_json(run.blow_up)}};
    write_text(cfg.out / "simulate.json", dump(j));
    log << "simulate: " << run.snaps.size() << " snapshots written\n";
    if (run.blow_up) {
        log << "simulate: " << run.blow_up->what() << "\n";
        return int(ErrorClass::BlowUp);
    }
    return 0;
}

int compare(const ExperimentConfig& cfg, const Flags& flags, std::ostream& log)
{
    const Analysis a = analyse(cfg, true);
    const Run run = run_simulation(cfg);
    std::set<double> have;
    for (const auto& s : run.snaps) have.insert(s.t);
    const double trusted = cfg.sim.L - cfg.sim.sponge_width - 2.0 * cfg.sim.dx;

    std::vector<AsymptoticPrediction> preds;
    json skipped = json::array();
    for (double xi : cfg.xi_grid.values()) {
        for (double t : cfg.t_list) {
            if (!have.count(t)) {
                skipped.push_back({{"xi", xi}, {"t", t}, {"reason", "no snapshot (simulation stopped)"}});
                continue;
            }
            if (std::abs(4.0 * xi * t) > trusted) {
                skipped.push_back({{"xi", xi}, {"t", t}, {"reason", "ray leaves the trusted region"}});
                continue;
            }
            try {
                preds.push_back(nnls::predict(xi, t, a.zeros, a.omegas, *a.phase, cfg.guard_fraction));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::TransitionZone) throw;
                skipped.push_back({{"xi", xi}, {"t", t}, {"reason", "guard band"}});
            }
        }
    }
    const ErrorReport rep = nnls::compare(preds, run.snaps, cfg.sim.sponge_width, cfg.slope_tolerance);
    json j = json::parse(rep.to_json());
    j["skipped"] = skipped;
    j["blow_up"] = blow_up_json(run.blow_up);
    bool pass = rep.all_pass();
    if (flags.kink) {
        json kinks = json::array();
        const std::vector<double> ts = cfg.kink.t.empty() ? cfg.t_list : cfg.kink.t;
        for (int m = 0; m < a.zeros.n(); ++m) {
            for (KinkSide side : {KinkSide::XPositive, KinkSide::XNegative}) {
                const KinkProfile k(m, side, a.zeros, *a.phase);
                for (const auto& s : run.snaps) {
                    if (std::find(ts.begin(), ts.end(), s.t) == ts.end()) continue;
                    json rec = {{"m", m}, {"side", side_name(side)}, {"t", s.t}};
                    try {
                        const auto kc = compare_kink(k, s, cfg.kink.x0.values(), cfg.sim.sponge_width);
                        rec["sup_rel"] = kc.rel;
                        rec["sup_abs"] = kc.sup_abs;
                        rec["pass"] = kc.rel <= 0.1;
                        pass = pass && kc.rel <= 0.1;
                    } catch (const Error& e) {
                        rec["error"] = e.what();
                        rec["pass"] = false;
                        pass = false;
                    }
                    kinks.push_back(rec);
                }
            }
        }
        j["kinks"] = kinks;
    }
    j["all_pass"] = pass && !run.blow_up;
    write_text(cfg.out / "compare.json", dump(j));
    log << "compare: " << rep.rays.size() << " ray records, " << rep.slopes.size() << " slope fits, "
        << rep.envelopes.size() << " envelope checks, " << skipped.size() << " skipped; "
        << (pass ? "all checks pass" : "some checks fail") << "\n";
    if (run.blow_up) {
        log << "compare: " << run.blow_up->what() << "\n";
        return int(ErrorClass::BlowUp);
    }
    return pass ? 0 : int(ErrorClass::Numeric);
}

int report(const ExperimentConfig& cfg, std::ostream& log)
{
    std::ostringstream out;
    auto load = [&](const char* name) -> std::optional<json> {
        const fs::path p = cfg.out / name;
        if (!fs::exists(p)) return std::nullopt;
        try {
            return json::parse(read_text(p));
        } catch (const json::exception&) {
            throw Error(ErrorKind::Config, std::string("cannot parse ") + p.string());
        }
    };
    out << "experiment report for A = " << format_number(cfg.bg.A) << ", R = " << format_number(cfg.bg.R) << "\n";
    if (auto s = load("scatter.json")) {
        out << "scatter   points " << (*s)["points"] << ", max identity residual " << (*s)["max_identity_residual"];
        if (s->contains("max_rel_err_closed_form")) out << ", max rel err " << (*s)["max_rel_err_closed_form"];
        out << "\n";
    } else {
        out << "scatter   not run\n";
    }
    if (auto z = load("zeros.json")) {
        if (z->contains("bifurcation")) {
            out << "zeros     bifurcation, real zeros " << (*z)["real_zeros"] << "\n";
        } else {
            out << "zeros     n = " << (*z)["n"] << ", omegas " << (*z)["omegas"] << ", assumptions "
                << ((*z)["assumptions"]["all_ok"].get<bool>() ? "hold" : "violated") << "\n";
            for (const auto& p : (*z)["p"]) out << "          p = " << p["re"] << " + " << p["im"] << "i\n";
        }
    } else {
        out << "zeros     not run\n";
    }
    out << "predict   " << (fs::exists(cfg.out / "predict.csv") ? "table written" : "not run") << "\n";
    if (auto s = load("simulate.json")) {
        out << "simulate  " << (*s)["snapshots"].size() << " snapshots";
        if (!(*s)["blow_up"].is_null()) out << ", blow-up at t = " << (*s)["blow_up"]["time"];
        out << "\n";
    } else {
        out << "simulate  not run\n";
    }
    if (auto c = load("compare.json")) {
        out << "compare   " << ((*c)["all_pass"].get<bool>() ? "all checks pass" : "some checks fail") << "\n";
        for (const auto& s : (*c)["slopes"])
            out << "          slope xi = " << s["xi"] << " (" << s["family"].get<std::string>() << "): fitted "
                << s["fitted"] << ", predicted " << s["predicted"] << (s["pass"].get<bool>() ? " pass" : " FAIL") << "\n";
        for (const auto& e : (*c)["envelopes"])
            out << "          envelope xi = " << e["xi"] << " (" << e["family"].get<std::string>() << "): "
                << (e["shrinking"].get<bool>() ? "shrinking" : "NOT shrinking") << "\n";
        if (!(*c)["blow_up"].is_null()) out << "          blow-up at t = " << (*c)["blow_up"]["time"] << "\n";
    } else {
        out << "compare   not run\n";
    }
    write_text(cfg.out / "report.txt", out.str());
    log << out.str();
    return 0;
}

int run(const std::string& command, const ExperimentConfig& cfg, const Flags& flags, std::ostream& log)
{
    validate(cfg);
    if (command == "scatter") return scatter(cfg, log);
    if (command == "zeros") return zeros(cfg, log);
    if (command == "predict") return predict(cfg, flags, log);
    if (command == "simulate") return simulate(cfg, log);
    if (command == "compare") return compare(cfg, flags, log);
    if (command == "report") return report(cfg, log);
    throw Error(ErrorKind::Config, "unknown command '" + command + "'");
}

}  // namespace nnls::cli
