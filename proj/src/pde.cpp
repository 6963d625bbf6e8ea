#include "nnls/pde.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nnls/errors.hpp"

namespace nnls {

namespace {

bool is_multiple(double L, double dx)
{
    const double r = L / dx;
    return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, r);
}

double bg_scale(const FarField& bg)
{
    return std::max({std::abs(bg.left), std::abs(bg.right), 1.0});
}

}  // namespace

void validate(const SimulationConfig& cfg)
{
    auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, "simulation: " + m); };
    if (!(cfg.dx > 0.0) || !(cfg.L > 0.0)) fail("L and dx must be positive");
    if (!is_multiple(cfg.L, cfg.dx)) fail("L must be an integer multiple of dx");
    if (!(cfg.c_stab > 0.0) || cfg.c_stab > 0.25) fail("c_stab must lie in (0, 0.25]");
    if (cfg.dt < 0.0 || cfg.dt > cfg.c_stab * cfg.dx * cfg.dx * (1.0 + 1e-12))
        fail("dt must not exceed c_stab * dx^2");
    if (!(cfg.t_end >= 0.0)) fail("t_end must be non-negative");
    if (cfg.sponge_width < 0.0 || cfg.sponge_width >= cfg.L) fail("sponge_width must lie in [0, L)");
    if (cfg.sponge_strength < 0.0) fail("sponge_strength must be non-negative");
    if (cfg.ramp_width < 0.0) fail("ramp_width must be non-negative");
    if (cfg.check_every < 1) fail("check_every must be positive");
    if (!(cfg.blowup_factor > 1.0)) fail("blowup_factor must exceed 1");
    for (double t : cfg.snapshot_times)
        if (t < 0.0 || t > cfg.t_end + 1e-12) fail("snapshot times must lie in [0, t_end]");
}

Simulator::Simulator(const std::function<cplx(double)>& q0, FarField bg, SimulationConfig cfg)
    : cfg_(std::move(cfg)), bg_(bg)
{
    validate(cfg_);
    n_ = static_cast<std::size_t>(std::llround(2.0 * cfg_.L / cfg_.dx)) + 1;
    dt_ = cfg_.dt > 0.0 ? cfg_.dt : cfg_.c_stab * cfg_.dx * cfg_.dx;
    q_.resize(n_);
    sponge_.assign(n_, 0.0);
    outer_.assign(n_, 0);
    target_.resize(n_);
    const std::size_t mid = n_ / 2;
    for (std::size_t i = 0; i < n_; ++i) {
        // x_i and x_{n-1-i} are exact negatives of each other.
        const double x = i < mid ? -cfg_.L + double(i) * cfg_.dx
                                 : i == mid ? 0.0 : cfg_.L - double(n_ - 1 - i) * cfg_.dx;
        q_[i] = q0(x);
        target_[i] = x < 0.0 ? bg_.left : bg_.right;
        const double depth = cfg_.L - std::abs(x);
        if (cfg_.sponge_width > 0.0 && depth < cfg_.sponge_width) {
            const double c = std::cos(0.5 * pi * depth / cfg_.sponge_width);
            sponge_[i] = cfg_.sponge_strength * c * c;
            outer_[i] = depth < 0.5 * cfg_.sponge_width;
        }
    }
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->resize(n_);
    check(0.0);
}

void Simulator::rhs(const std::vector<cplx>& q, std::vector<cplx>& out) const
{
    const std::size_t n = n_;
    const double c = 1.0 / (12.0 * cfg_.dx * cfg_.dx);
    const double sign = cfg_.reverse_time ? -1.0 : 1.0;
    const cplx* a = q.data();
    cplx* o = out.data();
    const double* s = sponge_.data();
    const cplx* bg = target_.data();
    auto at = [&](long i) -> cplx {
        if (i < 0) return bg_.left;
        if (i >= long(n)) return bg_.right;
        return a[i];
    };
    auto point = [&](std::size_t i, cplx lap) {
        const cplx qi = a[i];
        const cplx f = I * lap - 2.0 * I * qi * qi * std::conj(a[n - 1 - i]);
        o[i] = sign * f - s[i] * (qi - bg[i]);
    };
    for (std::size_t i : {std::size_t(0), std::size_t(1), n - 2, n - 1}) {
        const long j = long(i);
        point(i, c * (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) - at(j + 2)));
    }
#pragma omp parallel for num_threads(cfg_.threads) if (cfg_.threads > 1) schedule(static)
    for (std::size_t i = 2; i < n - 2; ++i)
        point(i, c * (-a[i - 2] + 16.0 * a[i - 1] - 30.0 * a[i] + 16.0 * a[i + 1] - a[i + 2]));
}

void Simulator::step(double h)
{
    const std::size_t n = n_;
    auto combine = [&](const std::vector<cplx>& k, double w) {
#pragma omp parallel for num_threads(cfg_.threads) if (cfg_.threads > 1) schedule(static)
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = q_[i] + w * k[i];
    };
    rhs(q_, k1_);
    combine(k1_, 0.5 * h);
    rhs(tmp_, k2_);
    combine(k2_, 0.5 * h);
    rhs(tmp_, k3_);
    combine(k3_, h);
    rhs(tmp_, k4_);
    const double w = h / 6.0;
#pragma omp parallel for num_threads(cfg_.threads) if (cfg_.threads > 1) schedule(static)
    for (std::size_t i = 0; i < n; ++i) q_[i] += w * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
}

void Simulator::check(double t_prev)
{
    double peak = 0.0;
    std::size_t where = 0;
    bool finite = true;
    for (std::size_t i = 0; i < n_; ++i) {
        const double a = std::abs(q_[i]);
        if (!std::isfinite(a)) {
            finite = false;
            where = i;
            break;
        }
        if (a > peak) {
            peak = a;
            where = i;
        }
        if (outer_[i]) sponge_dev_ = std::max(sponge_dev_, std::abs(q_[i] - target_[i]));
    }
    peak_ = std::max(peak_, peak);
    if (!finite || peak > cfg_.blowup_factor * bg_scale(bg_)) {
        const double x = -cfg_.L + double(where) * cfg_.dx;
        std::ostringstream os;
        os << "blow-up detected: max|q| " << (finite ? "exceeded " : "not finite, threshold ")
           << cfg_.blowup_factor * bg_scale(bg_) << " between t = " << t_prev << " and t = " << t_
           << " near x = " << x;
        throw BlowUpError(t_, x, os.str());
    }
}

void Simulator::advance_to(double t)
{
    if (t < t_ - 1e-12) throw Error(ErrorKind::Config, "simulation cannot go back in time");
    if (t <= t_) return;
    const long steps = std::max(1L, static_cast<long>(std::ceil((t - t_) / dt_ - 1e-9)));
    const double h = (t - t_) / double(steps);
    const double t0 = t_;
    double t_checked = t_;
    for (long s = 1; s <= steps; ++s) {
        step(h);
        ++steps_;
        t_ = s == steps ? t : t0 + double(s) * h;
        if (s % cfg_.check_every == 0 || s == steps) {
            check(t_checked);
            t_checked = t_;
        }
    }
}

FieldSnapshot Simulator::snapshot() const
{
    FieldSnapshot s;
    s.t = t_;
    s.L = cfg_.L;
    s.dx = cfg_.dx;
    s.q = q_;
    s.sponge_deviation = sponge_dev_;
    return s;
}

std::function<cplx(double)> simulation_datum(const InitialProfile& profile, double ramp_width)
{
    if (!profile.is_pure_step()) return [profile](double x) { return profile(x); };
    const double A = profile.background().A, R = profile.background().R;
    if (ramp_width <= 0.0) return [profile](double x) { return profile(x); };
    return [A, R, ramp_width](double x) -> cplx { return 0.5 * A * (1.0 + std::tanh((x - R) / ramp_width)); };
}

std::vector<FieldSnapshot> simulate(const std::function<cplx(double)>& q0, FarField bg,
                                    const SimulationConfig& cfg)
{
    std::vector<double> times = cfg.snapshot_times;
    if (times.empty() || std::abs(*std::max_element(times.begin(), times.end()) - cfg.t_end) > 1e-12)
        times.push_back(cfg.t_end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    Simulator sim(q0, bg, cfg);
    std::vector<FieldSnapshot> out;
    out.reserve(times.size());
    for (double t : times) {
        sim.advance_to(t);
        out.push_back(sim.snapshot());
    }
    return out;
}

std::vector<FieldSnapshot> simulate(const InitialProfile& profile, const SimulationConfig& cfg)
{
    const double w = cfg.ramp_width > 0.0 ? cfg.ramp_width : 4.0 * cfg.dx;
    return simulate(simulation_datum(profile, w), FarField{0.0, profile.background().A}, cfg);
}

cplx field_value(const FieldSnapshot& snap, double x, double margin)
{
    if (!(std::abs(x) <= snap.L - margin)) {
        std::ostringstream os;
        os << "x = " << x << " lies outside the trusted region |x| <= " << snap.L - margin;
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
    const double u = (x + snap.L) / snap.dx;
    const double ur = std::round(u);
    const long n = long(snap.q.size());
    if (std::abs(u - ur) < 1e-9) return snap.q[std::size_t(ur)];
    long j = static_cast<long>(std::floor(u)) - 1;
    j = std::clamp(j, 0L, n - 4);
    const double s = u - double(j);
    cplx v = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (s - b) / double(a - b);
        v += w * snap.q[std::size_t(j + a)];
    }
    return v;
}

cplx ray_value(const std::vector<FieldSnapshot>& snaps, double xi, double t, double sponge_width)
{
    for (const auto& s : snaps)
        if (std::abs(s.t - t) < 1e-9) return field_value(s, 4.0 * xi * t, sponge_width + 2.0 * s.dx);
    std::ostringstream os;
    os << "no snapshot at t = " << t;
    throw Error(ErrorKind::OutOfDomain, os.str());
}

cplx mirror_functional(const FieldSnapshot& snap)
{
    const std::size_t n = snap.q.size();
    cplx sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += snap.q[i] * std::conj(snap.q[n - 1 - i]);
    return sum * snap.dx;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::Config, "slope fit needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(x.size());
    my /= double(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

bool envelope_shrinks(const std::vector<double>& err)
{
    const std::size_t n = err.size();
    if (n < 2) return false;
    std::vector<double> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || err[i] >= err[i - 1];
        const bool right = i + 1 == n || err[i] >= err[i + 1];
        if (left && right) peaks.push_back(err[i]);
    }
    if (peaks.size() < 2) return err.back() < err.front() && peaks.size() == 1 && peaks[0] == err.front();
    for (std::size_t i = 1; i < peaks.size(); ++i)
        if (!(peaks[i] < peaks[i - 1])) return false;
    return true;
}

ErrorReport compare(const std::vector<AsymptoticPrediction>& predictions,
                    const std::vector<FieldSnapshot>& snaps, double sponge_width, double slope_tolerance)
{
    ErrorReport rep;
    std::vector<double> order;
    std::map<double, std::vector<const AsymptoticPrediction*>> by_xi;
    for (const auto& p : predictions) {
        if (!by_xi.count(p.xi)) order.push_back(p.xi);
        by_xi[p.xi].push_back(&p);
    }
    for (double xi : order) {
        auto group = by_xi[xi];
        std::stable_sort(group.begin(), group.end(), [](auto* a, auto* b) { return a->t < b->t; });
        std::vector<double> ts, mags, errs;
        double dominant = -1e300;
        for (const auto* p : group) {
            RayRecord r;
            r.xi = xi;
            r.t = p->t;
            r.family = p->sector.family;
            r.q_num = ray_value(snaps, xi, p->t, sponge_width);
            r.leading = p->leading;
            r.predicted = p->value();
            r.abs_err = std::abs(r.q_num - r.leading);
            r.rel_err = is_plateau(r.family) ? r.abs_err / std::max(std::abs(r.leading), 1e-300) : r.abs_err;
            rep.rays.push_back(r);
            ts.push_back(p->t);
            mags.push_back(std::abs(r.q_num));
            errs.push_back(r.abs_err);
            for (const auto& term : p->oscillatory) dominant = std::max(dominant, term.t_power);
        }
        const Family fam = group.front()->sector.family;
        if (is_plateau(fam)) {
            rep.envelopes.push_back({xi, fam, envelope_shrinks(errs)});
        } else if (ts.size() >= 3) {
            SlopeRecord s;
            s.xi = xi;
            s.family = fam;
            s.fitted = loglog_slope(ts, mags);
            s.predicted = dominant;
            s.tolerance = slope_tolerance;
            s.pass = std::abs(s.fitted - s.predicted) <= slope_tolerance;
            rep.slopes.push_back(s);
        }
    }
    return rep;
}

bool ErrorReport::all_pass() const
{
    for (const auto& s : slopes)
        if (!s.pass) return false;
    for (const auto& e : envelopes)
        if (!e.shrinking) return false;
    return true;
}

std::string ErrorReport::to_json() const
{
    using nlohmann::json;
    auto c = [](cplx z) { return json::array({z.real(), z.imag()}); };
    json j;
    j["rays"] = json::array();
    for (const auto& r : rays)
        j["rays"].push_back({{"xi", r.xi}, {"t", r.t}, {"family", family_name(r.family)},
                             {"q_num", c(r.q_num)}, {"leading", c(r.leading)}, {"predicted", c(r.predicted)},
                             {"abs_err", r.abs_err}, {"rel_err", r.rel_err}});
    j["slopes"] = json::array();
    for (const auto& s : slopes)
        j["slopes"].push_back({{"xi", s.xi}, {"family", family_name(s.family)}, {"fitted", s.fitted},
                               {"predicted", s.predicted}, {"tolerance", s.tolerance}, {"pass", s.pass}});
    j["envelopes"] = json::array();
    for (const auto& e : envelopes)
        j["envelopes"].push_back({{"xi", e.xi}, {"family", family_name(e.family)}, {"shrinking", e.shrinking}});
    j["all_pass"] = all_pass();
    return j.dump(2);
}

KinkComparison compare_kink(const KinkProfile& kink, const FieldSnapshot& snap, const std::vector<double>& x0,
                            double sponge_width)
{
    KinkComparison out;
    out.t = snap.t;
    out.x0 = x0;
    for (double s : x0) {
        const cplx num = field_value(snap, kink.x_of(s, snap.t), sponge_width + 2.0 * snap.dx);
        const cplx pred = kink(s, snap.t);
        out.numeric.push_back(num);
        out.predicted.push_back(pred);
        out.sup_abs = std::max(out.sup_abs, std::abs(num - pred));
        out.sup_ref = std::max(out.sup_ref, std::abs(pred));
    }
    out.rel = out.sup_abs / std::max(out.sup_ref, 1e-300);
    return out;
}

}  // namespace nnls
