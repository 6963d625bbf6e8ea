#include "nnls/phase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nnls/errors.hpp"
#include "nnls/parallel.hpp"

namespace nnls {

namespace {

// Kronrod 21 nodes on [-1, 1] with the embedded Gauss 10 weights (zero off the Gauss nodes).
struct GkRule {
    std::vector<double> x, wk, wg;
};

const GkRule& gk_rule()
{
    static const GkRule rule = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        const auto& ka = gauss_kronrod<double, 21>::abscissa();
        const auto& kw = gauss_kronrod<double, 21>::weights();
        const auto& ga = gauss<double, 10>::abscissa();
        const auto& gw = gauss<double, 10>::weights();
        GkRule r;
        auto gauss_weight = [&](double a) {
            for (std::size_t j = 0; j < ga.size(); ++j)
                if (std::abs(ga[j] - a) < 1e-14) return gw[j];
            return 0.0;
        };
        for (std::size_t i = 0; i < ka.size(); ++i) {
            const double g = gauss_weight(ka[i]);
            if (ka[i] == 0.0) {
                r.x.push_back(0.0);
                r.wk.push_back(kw[i]);
                r.wg.push_back(g);
            } else {
                for (double s : {-1.0, 1.0}) {
                    r.x.push_back(s * ka[i]);
                    r.wk.push_back(kw[i]);
                    r.wg.push_back(g);
                }
            }
        }
        return r;
    }();
    return rule;
}

struct Panel {
    cplx kronrod;
    double error;
    double l1;
};

template <class F>
Panel panel(const F& f, double a, double b, std::vector<cplx>* values = nullptr)
{
    const GkRule& r = gk_rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx k = 0.0, g = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        const cplx v = f(c + h * r.x[i]);
        if (values) values->push_back(v);
        k += r.wk[i] * v;
        g += r.wg[i] * v;
        l1 += r.wk[i] * std::abs(v);
    }
    return {h * k, h * std::abs(k - g), h * l1};
}

void not_finite(double a, double b)
{
    std::ostringstream os;
    os << "non-finite integrand on [" << a << ", " << b << "]";
    throw Error(ErrorKind::NumericalFailure, os.str());
}

// Rounding floor: noise(a, b) bounds the integral of the evaluation noise over [a, b].
using Noise = std::function<double(double, double)>;

template <class F>
cplx adapt(const F& f, double a, double b, const PhaseOptions& opt, const Noise& noise, int depth = 0)
{
    const Panel p = panel(f, a, b);
    if (!std::isfinite(p.l1)) not_finite(a, b);
    double floor = opt.rel_tol * p.l1 + opt.abs_density * (b - a);
    if (noise) floor += noise(a, b);
    if (p.error <= floor) return p.kronrod;
    // Below this width the remaining discrepancy is rounding noise.
    if (b - a <= 1e-12 * std::max(1.0, std::abs(a))) return p.kronrod;
    if (depth >= opt.max_depth) {
        std::ostringstream os;
        os << "quadrature did not converge on [" << a << ", " << b << "]";
        throw Error(ErrorKind::NumericalFailure, os.str());
    }
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, opt, noise, depth + 1) + adapt(f, m, b, opt, noise, depth + 1);
}

// Integrates over [a, b] split at the given interior points and into pieces of at most max_len.
template <class F>
cplx integrate(const F& f, double a, double b, std::vector<double> cuts, double max_len,
               const PhaseOptions& opt, const Noise& noise = {})
{
    if (!(b > a)) return 0.0;
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cplx sum = 0.0;
    double prev = a;
    for (double c : cuts) {
        if (c <= prev || c > b) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil((c - prev) / max_len)));
        for (int i = 0; i < pieces; ++i) {
            const double u = prev + (c - prev) * i / pieces;
            const double v = i + 1 == pieces ? c : prev + (c - prev) * (i + 1) / pieces;
            sum += adapt(f, u, v, opt, noise);
        }
        prev = c;
    }
    return sum;
}

constexpr double kNear = 1.0;       // half-width of the live region around Re k
constexpr double kEndpoint = 1.0;   // length of the substituted endpoint segment
constexpr double kSubstMax = 45.0;  // e^{-45} below double resolution of the segment

}  // namespace

const char* branch_name(ImNuBranch b)
{
    switch (b) {
    case ImNuBranch::Low: return "low";
    case ImNuBranch::Middle: return "middle";
    case ImNuBranch::High: return "high";
    }
    return "?";
}

ImNuBranch im_nu_branch(cplx nu, int m)
{
    const double s = nu.imag() - m;
    if (!(s > -0.5 && s < 0.5)) {
        std::ostringstream os;
        os << "Im nu - m = " << s << " lies outside (-1/2, 1/2) for m = " << m;
        throw Error(ErrorKind::SectorInconsistency, os.str());
    }
    // Closed ends of the outer bands are honoured up to rounding.
    constexpr double tie = 1e-12;
    if (s <= -1.0 / 6.0 + tie) return ImNuBranch::Low;
    if (s < 1.0 / 6.0 - tie) return ImNuBranch::Middle;
    return ImNuBranch::High;
}

PhaseContext::PhaseContext(std::shared_ptr<const WindingProfile> winding, PhaseOptions opt)
    : w_(std::move(winding)), opt_(opt)
{
    if (!w_) throw Error(ErrorKind::Config, "phase context needs a winding profile");
    trivial_ = w_->spectrum()->amplitude() == 0.0;
}

void PhaseContext::check_xi(double xi) const
{
    if (!(xi >= w_->xi_floor())) {
        std::ostringstream os;
        os << "xi = " << xi << " must be at least " << w_->xi_floor();
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
}

void PhaseContext::check_k(cplx k, double b) const
{
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
        throw Error(ErrorKind::Config, "k must be finite");
    if (k.imag() == 0.0 && k.real() <= b) {
        std::ostringstream os;
        os << "k = " << k << " lies on the contour (-inf, " << b << "]";
        throw Error(ErrorKind::Branch, os.str());
    }
}

double PhaseContext::tail_error() const
{
    return w_->tail_bound() / (4.0 * pi);
}

const PhaseContext::FarRule& PhaseContext::far() const
{
    std::call_once(far_once_, [this] {
        const double K = w_->k_max();
        std::vector<double> ends;  // descending from -1
        double x = -1.0;
        if (-1.0 > -K) {
            ends.push_back(-1.0);
            while (x > -std::min(10.0, K) + 1e-12) {
                x = std::max(x - opt_.dense_panel, -std::min(10.0, K));
                ends.push_back(x);
            }
            while (x > -K) {
                x = std::max(1.25 * x, -K);
                ends.push_back(x);
            }
        }
        std::reverse(ends.begin(), ends.end());
        const std::size_t base = ends.empty() ? 0 : ends.size() - 1;

        struct Local {
            std::vector<double> hi, zeta;
            std::vector<cplx> wl, wdl;
            std::vector<std::size_t> count;
        };
        std::vector<Local> parts(base);
        const GkRule& r = gk_rule();
        const PhaseOptions& opt = opt_;
        const WindingProfile& w = *w_;

        parallel_for(base, opt.threads, [&](std::size_t i) {
            Local& out = parts[i];
            std::function<void(double, double, int)> rec = [&](double a, double b, int depth) {
                std::vector<double> zs;
                auto fl = [&](double z) {
                    zs.push_back(z);
                    return w.log_jump(z);
                };
                std::vector<cplx> lv, dv;
                const Panel pl = panel(fl, a, b, &lv);
                const Panel pd = panel([&](double z) { return w.log_jump_derivative(z); }, a, b, &dv);
                if (!std::isfinite(pl.l1) || !std::isfinite(pd.l1)) not_finite(a, b);
                const double slack = opt.abs_density * (b - a);
                const bool ok = pl.error <= opt.rel_tol * pl.l1 + slack &&
                                pd.error <= opt.rel_tol * pd.l1 + slack;
                if (!ok && depth < opt.max_depth) {
                    const double m = 0.5 * (a + b);
                    rec(a, m, depth + 1);
                    rec(m, b, depth + 1);
                    return;
                }
                if (!ok) not_finite(a, b);
                const double h = 0.5 * (b - a);
                for (std::size_t j = 0; j < zs.size(); ++j) {
                    out.zeta.push_back(zs[j]);
                    out.wl.push_back(h * r.wk[j] * lv[j]);
                    out.wdl.push_back(h * r.wk[j] * dv[j]);
                }
                out.hi.push_back(b);
                out.count.push_back(zs.size());
            };
            rec(ends[i], ends[i + 1], 0);
        });

        far_.offset.push_back(0);
        for (const Local& p : parts) {
            for (std::size_t j = 0; j < p.hi.size(); ++j) {
                far_.panel_hi.push_back(p.hi[j]);
                far_.offset.push_back(far_.offset.back() + p.count[j]);
            }
            far_.zeta.insert(far_.zeta.end(), p.zeta.begin(), p.zeta.end());
            far_.wl.insert(far_.wl.end(), p.wl.begin(), p.wl.end());
            far_.wdl.insert(far_.wdl.end(), p.wdl.begin(), p.wdl.end());
        }
        far_.panel_lo_ = ends.empty() ? -1.0 : ends.front();
    });
    return far_;
}

std::size_t PhaseContext::far_nodes() const
{
    return far().zeta.size();
}

std::size_t PhaseContext::far_panels_below(double x) const
{
    const FarRule& f = far();
    return static_cast<std::size_t>(std::upper_bound(f.panel_hi.begin(), f.panel_hi.end(), x) -
                                    f.panel_hi.begin());
}

cplx PhaseContext::log_delta(cplx k, double xi) const
{
    check_xi(xi);
    const double b = -xi;
    check_k(k, b);
    if (trivial_) return 0.0;
    const FarRule& f = far();
    const double K = w_->k_max();
    const double h = opt_.window;

    // Far-rule panels fully below b - 1 and away from Re k.
    const std::size_t nb = far_panels_below(b - kEndpoint);
    const double cover_hi = nb == 0 ? std::max(f.panel_lo_, -K) : f.panel_hi[nb - 1];
    auto panel_lo = [&](std::size_t i) { return i == 0 ? f.panel_lo_ : f.panel_hi[i - 1]; };
    std::size_t i0 = nb, i1 = nb;
    if (k.real() - kNear < cover_hi && k.real() + kNear > f.panel_lo_) {
        i0 = far_panels_below(k.real() - kNear);
        i1 = std::min(nb, far_panels_below(k.real() + kNear) + 1);
        if (i0 > i1) i0 = i1;
    }

    auto sum_far = [&](std::size_t from, std::size_t to) {
        cplx s = 0.0;
        for (std::size_t j = f.offset[from]; j < f.offset[to]; ++j) s += f.wl[j] / (f.zeta[j] - k);
        return s;
    };
    cplx total = sum_far(0, i0) + sum_far(i1, nb);

    // Subtraction window around the nearest contour point.
    const double anchor_re = std::clamp(k.real(), -K, b);
    const bool at_end = std::abs(k - b) <= 0.5 * h;
    const double z0 = at_end ? b : anchor_re;
    const bool subtract = std::abs(k - z0) < 0.5 * h;
    double wlo = 0.0, whi = 0.0;
    cplx l0 = 0.0;
    if (subtract) {
        wlo = at_end ? b - h : std::max(z0 - 0.5 * h, -K);
        whi = at_end ? b : std::min(z0 + 0.5 * h, b);
        l0 = w_->log_jump(z0);
        total += l0 * (std::log(k - whi) - std::log(k - wlo));
    }
    auto g = [&](double z) {
        cplx v = w_->log_jump(z);
        if (subtract && z >= wlo && z <= whi) v -= l0;
        return v / (z - k);
    };
    std::vector<double> cuts;
    Noise noise;
    if (subtract) {
        cuts = {wlo, whi, z0};
        // L - L0 loses absolute accuracy ~ eps |L0|, amplified by 1/|z - k|.
        const double scale = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(l0) + 1.0);
        noise = [&, scale](double a, double c) {
            const double x = std::clamp(k.real(), a, c);
            return scale * (c - a) / std::max(std::abs(cplx(x, 0.0) - k), 1e-300);
        };
    }
    if (i0 < i1)
        total += integrate(g, panel_lo(i0), f.panel_hi[i1 - 1], cuts, opt_.dense_panel, opt_, noise);
    total += integrate(g, cover_hi, b, cuts, opt_.dense_panel, opt_, noise);
    return total / (2.0 * pi * I);
}

cplx PhaseContext::delta(cplx k, double xi) const
{
    return std::exp(log_delta(k, xi));
}

cplx PhaseContext::chi(cplx k, double xi) const
{
    check_xi(xi);
    const double b = -xi;
    if (k != cplx(b, 0.0)) check_k(k, b);
    if (trivial_) return 0.0;
    const FarRule& f = far();
    const double K = w_->k_max();

    const std::size_t nb = far_panels_below(b - kEndpoint);
    const double cover_hi = nb == 0 ? std::max(f.panel_lo_, -K) : f.panel_hi[nb - 1];
    auto panel_lo = [&](std::size_t i) { return i == 0 ? f.panel_lo_ : f.panel_hi[i - 1]; };
    std::size_t i0 = nb, i1 = nb;
    if (k.real() - kNear < cover_hi && k.real() + kNear > f.panel_lo_) {
        i0 = far_panels_below(k.real() - kNear);
        i1 = std::min(nb, far_panels_below(k.real() + kNear) + 1);
        if (i0 > i1) i0 = i1;
    }
    auto sum_far = [&](std::size_t from, std::size_t to) {
        cplx s = 0.0;
        for (std::size_t j = f.offset[from]; j < f.offset[to]; ++j) s += f.wdl[j] * std::log(k - f.zeta[j]);
        return s;
    };
    cplx total = sum_far(0, i0) + sum_far(i1, nb);

    auto g = [&](double z) { return std::log(k - z) * w_->log_jump_derivative(z); };
    std::vector<double> cuts;
    if (k.real() < b) cuts.push_back(k.real());
    if (i0 < i1) total += integrate(g, panel_lo(i0), f.panel_hi[i1 - 1], cuts, opt_.dense_panel, opt_);
    const double e = std::max(cover_hi, b - kEndpoint);
    total += integrate(g, cover_hi, e, cuts, opt_.dense_panel, opt_);

    // zeta = b - exp(-s) on the last segment removes the endpoint logarithm.
    const double s0 = -std::log(b - e);
    const bool at_end = k == cplx(b, 0.0);
    auto gs = [&](double s) {
        const double u = std::exp(-s);
        const cplx lg = at_end ? cplx(-s, 0.0) : std::log(k - b + u);
        return lg * w_->log_jump_derivative(b - u) * u;
    };
    std::vector<double> scuts;
    if (k.real() < b && k.real() > e) scuts.push_back(-std::log(b - k.real()));
    total += integrate(gs, s0, kSubstMax, scuts, 1.0, opt_);
    return -total / (2.0 * pi * I);
}

cplx PhaseContext::nu(double xi) const
{
    check_xi(xi);
    if (trivial_) return 0.0;
    const cplx l = w_->log_jump(-xi);
    if (std::exp(l.real()) < 1e-12) {
        std::ostringstream os;
        os << "|1 - r1 r2| below 1e-12 at -xi = " << -xi;
        throw Error(ErrorKind::NearSingular, os.str());
    }
    return -l / (2.0 * pi);
}

PhaseValues PhaseContext::values(double xi) const
{
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = values_cache_.find(xi);
        if (it != values_cache_.end()) return it->second;
    }
    PhaseValues v;
    v.xi = xi;
    v.nu = nu(xi);
    v.chi_at_minus_xi = chi(cplx(-xi, 0.0), xi);
    v.delta0 = delta(0.0, xi);
    v.m = static_cast<int>(std::lround(v.nu.imag()));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return values_cache_.emplace(xi, v).first->second;
}

cplx PhaseContext::delta_cached(cplx k, double xi) const
{
    const auto key = std::make_tuple(xi, k.real(), k.imag());
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = delta_cache_.find(key);
        if (it != delta_cache_.end()) return it->second;
    }
    const cplx d = delta(k, xi);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return delta_cache_.emplace(key, d).first->second;
}

}  // namespace nnls
