#include "nnls/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "nnls/errors.hpp"
#include "nnls/parallel.hpp"

namespace nnls {

namespace {

cplx checked(const Analytic& f, cplx z)
{
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == 0.0) {
        std::ostringstream os;
        os << "evaluator vanishes or is not finite on the boundary at " << z;
        throw Error(ErrorKind::BoxTouchesZero, os.str());
    }
    return v;
}

double refine_phase(const Analytic& f, cplx z0, cplx f0, cplx z1, cplx f1, int depth)
{
    const double d = std::arg(f1 / f0);
    if (std::abs(d) <= pi / 4.0) return d;
    if (depth > 40) {
        std::ostringstream os;
        os << "irreducible phase jump on the boundary near " << z0;
        throw Error(ErrorKind::BoxTouchesZero, os.str());
    }
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = checked(f, zm);
    return refine_phase(f, z0, f0, zm, fm, depth + 1) + refine_phase(f, zm, fm, z1, f1, depth + 1);
}

double edge_phase(const Analytic& f, cplx a, cplx b, int samples)
{
    double total = 0.0;
    cplx z0 = a, f0 = checked(f, a);
    for (int i = 1; i <= samples; ++i) {
        const cplx z1 = a + (b - a) * (static_cast<double>(i) / samples);
        const cplx f1 = checked(f, z1);
        total += refine_phase(f, z0, f0, z1, f1, 0);
        z0 = z1;
        f0 = f1;
    }
    return total;
}

double diameter(const Box& b)
{
    return std::hypot(b.re_max - b.re_min, b.im_max - b.im_min);
}

bool inside(const Box& b, cplx z, double pad)
{
    const double pr = pad * (b.re_max - b.re_min), pi_ = pad * (b.im_max - b.im_min);
    return z.real() >= b.re_min - pr && z.real() <= b.re_max + pr &&
           z.imag() >= b.im_min - pi_ && z.imag() <= b.im_max + pi_;
}

cplx newton(const Analytic& f, cplx z, double tol)
{
    for (int it = 0; it < 100; ++it) {
        const cplx fz = f(z);
        const double h = std::min(1e-6 * std::max(1.0, std::abs(z)), 0.5 * std::abs(z.imag()));
        const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(std::abs(df)))
            throw Error(ErrorKind::RefinementFailure, "vanishing derivative in Newton refinement");
        const cplx step = fz / df;
        z -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z)) && std::abs(f(z)) <= tol) return z;
        if (std::abs(fz) < 0.01 * tol && std::abs(step) < 1e-12) return z;
    }
    if (std::abs(f(z)) <= tol) return z;
    std::ostringstream os;
    os << "Newton refinement did not reach |f| <= " << tol << " (last iterate " << z << ")";
    throw Error(ErrorKind::RefinementFailure, os.str());
}

void subdivide(const Analytic& f, const Box& box, int count, const ZeroSearchOptions& opt,
               int depth, std::vector<cplx>& out)
{
    if (count <= 0) return;
    if (count == 1 && diameter(box) <= opt.newton_diameter) {
        const cplx c{0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max)};
        const cplx z = newton(f, c, opt.tol);
        if (!inside(box, z, 0.25)) {
            std::ostringstream os;
            os << "Newton left its box (start " << c << ", result " << z << ")";
            throw Error(ErrorKind::RefinementFailure, os.str());
        }
        out.push_back(z);
        return;
    }
    if (depth > opt.max_depth || diameter(box) < 1e-9) {
        std::ostringstream os;
        os << count << " zeros could not be separated near (" << box.re_min << ", " << box.im_min
           << "): multiple or clustered zero";
        throw Error(ErrorKind::RefinementFailure, os.str());
    }
    const int per_edge = std::max(16, opt.edge_samples / 4);
    for (double frac : {0.5, 0.4731, 0.5279, 0.4417}) {
        const double rm = box.re_min + frac * (box.re_max - box.re_min);
        const double im = box.im_min + (1.0 - frac) * (box.im_max - box.im_min);
        const Box kids[4] = {{box.re_min, rm, box.im_min, im},
                             {rm, box.re_max, box.im_min, im},
                             {box.re_min, rm, im, box.im_max},
                             {rm, box.re_max, im, box.im_max}};
        int counts[4];
        try {
            int sum = 0;
            for (int i = 0; i < 4; ++i) {
                counts[i] = winding_number(f, kids[i], per_edge);
                sum += counts[i];
            }
            if (sum != count) continue;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BoxTouchesZero) continue;
            throw;
        }
        for (int i = 0; i < 4; ++i) subdivide(f, kids[i], counts[i], opt, depth + 1, out);
        return;
    }
    throw Error(ErrorKind::BoxTouchesZero, "every subdivision line passes through a zero");
}

}  // namespace

int winding_number(const Analytic& f, const Box& box, int edge_samples)
{
    const cplx c0{box.re_min, box.im_min}, c1{box.re_max, box.im_min};
    const cplx c2{box.re_max, box.im_max}, c3{box.re_min, box.im_max};
    const double total = edge_phase(f, c0, c1, edge_samples) + edge_phase(f, c1, c2, edge_samples) +
                         edge_phase(f, c2, c3, edge_samples) + edge_phase(f, c3, c0, edge_samples);
    const double w = total / (2.0 * pi);
    if (std::abs(w - std::round(w)) > 0.01) {
        std::ostringstream os;
        os << "boundary winding " << w << " is not an integer";
        throw Error(ErrorKind::BoxTouchesZero, os.str());
    }
    return static_cast<int>(std::lround(w));
}

ZeroSearch find_zeros(const Analytic& f, const Box& box, const ZeroSearchOptions& opt)
{
    if (!(box.re_min < box.re_max && box.im_min < box.im_max))
        throw Error(ErrorKind::Config, "empty search box");
    ZeroSearch res;
    res.count = winding_number(f, box, opt.edge_samples);
    if (res.count < 0)
        throw Error(ErrorKind::AssumptionViolation, "negative winding: evaluator has poles in the box");
    subdivide(f, box, res.count, opt, 0, res.zeros);
    std::sort(res.zeros.begin(), res.zeros.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (std::size_t i = 1; i < res.zeros.size(); ++i)
        if (std::abs(res.zeros[i] - res.zeros[i - 1]) < 1e-8)
            throw Error(ErrorKind::RefinementFailure, "two boxes refined to the same zero");
    return res;
}

ZeroSet upper_left_zeros(const std::vector<cplx>& zeros)
{
    ZeroSet z;
    for (cplx p : zeros)
        if (p.real() < 0.0 && p.imag() > 0.0) z.p.push_back(p);
    std::sort(z.p.begin(), z.p.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
    return z;
}

int pure_step_zero_count(const BackgroundParams& bg)
{
    require_generic(bg);
    if (bg.A == 0.0) return 0;
    return static_cast<int>(std::floor(bg.R * bg.A / pi)) + 1;
}

ZeroSet pure_step_zeros(const BackgroundParams& bg)
{
    const int n = pure_step_zero_count(bg);
    const double A = bg.A, R = bg.R;
    PureStepSpectrum spec(bg);
    ZeroSet z;
    // u = 2 R Re p in (-(2j-1) pi/2, -(j-1) pi); |k| = (A/2)|cos u| exp(-u tan u).
    auto h = [&](double u) {
        return std::abs(u) / (2.0 * R) - 0.5 * A * std::abs(std::cos(u)) * std::exp(-u * std::tan(u));
    };
    for (int j = 1; j <= n; ++j) {
        const double lo = -(2.0 * j - 1.0) * pi / 2.0 * (1.0 - 1e-15);
        const double hi = -(j - 1.0) * pi - (j == 1 ? 0.0 : 1e-15);
        double a = lo, b = hi;
        // Move the left end inward until h is finite and positive.
        double step = 1e-12;
        while (!(std::isfinite(h(a)) && h(a) > 0.0) && a < hi) {
            a = lo + step;
            step *= 4.0;
        }
        if (j == 1) b = -1e-300;
        if (!(h(a) > 0.0 && h(b) < 0.0)) {
            std::ostringstream os;
            os << "no sign change of the real-part equation on interval " << j;
            throw Error(ErrorKind::NumericalFailure, os.str());
        }
        boost::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            h, a, b, h(a), h(b), boost::math::tools::eps_tolerance<double>(52), iters);
        const double u = 0.5 * (r.first + r.second);
        const double re = u / (2.0 * R);
        cplx p{re, re * std::tan(u)};
        for (int it = 0; it < 20; ++it) {
            const cplx step_p = spec.a1(p) / spec.a1_derivative(p);
            p -= step_p;
            if (std::abs(step_p) < 1e-16 * std::abs(p)) break;
        }
        if (std::abs(spec.a1(p)) > 1e-10) {
            std::ostringstream os;
            os << "pure-step zero " << j << " not refined: |a1(p)| = " << std::abs(spec.a1(p));
            throw Error(ErrorKind::RefinementFailure, os.str());
        }
        z.p.push_back(p);
    }
    return z;
}

void attach_norming_constants(ZeroSet& zeros, const SpectralData& spec)
{
    zeros.eta.clear();
    for (cplx p : zeros.p) zeros.eta.push_back(spec.norming_constant(p));
}

WindingProfile::WindingProfile(SpectralPtr spec) : WindingProfile(std::move(spec), Options{}) {}

WindingProfile::WindingProfile(SpectralPtr spec, Options opt) : spec_(std::move(spec)), opt_(opt)
{
    const double limit = spec_->k_limit();
    double dense = std::min(opt_.dense_limit, limit);
    auto r1r2 = [&](double k) { return std::abs(1.0 - 1.0 / product(k)); };
    double K = dense;
    double worst = 0.0;
    while (true) {
        worst = 0.0;
        for (double f : {1.0, 1.1, 1.27, 1.5}) worst = std::max(worst, r1r2(-std::min(K * f, limit)));
        if (worst <= opt_.cutoff || K >= limit) break;
        K = std::min(2.0 * K, limit);
    }
    k_max_ = K;
    tail_bound_ = 2.0 * worst;

    std::vector<double> base;
    for (double z = K; z > dense; z /= opt_.geometric_ratio) base.push_back(-z);
    const int m = static_cast<int>(std::ceil((dense - opt_.xi_floor) / opt_.dense_step));
    for (int i = 0; i < m; ++i) base.push_back(-dense + (dense - opt_.xi_floor) * i / m);
    base.push_back(-opt_.xi_floor);

    std::vector<cplx> vals(base.size());
    parallel_for(base.size(), opt_.threads, [&](std::size_t i) { vals[i] = product(base[i]); });

    nodes_.reserve(base.size());
    args_.reserve(base.size());
    nodes_.push_back(base[0]);
    args_.push_back(std::arg(vals[0]));
    // Depth-first insertion of midpoints wherever the wrapped phase jump is too large.
    struct Item {
        double z;
        cplx v;
    };
    for (std::size_t i = 1; i < base.size(); ++i) {
        std::vector<Item> stack{{base[i], vals[i]}};
        double left_z = nodes_.back();
        cplx left_v = vals[i - 1];
        while (!stack.empty()) {
            const Item right = stack.back();
            const double d = std::arg(right.v / left_v);
            if (std::abs(d) > opt_.max_jump) {
                if (right.z - left_z < 1e-13 * std::abs(right.z)) {
                    std::ostringstream os;
                    os << "phase of a1 a2 jumps irreducibly near zeta = " << right.z
                       << " (zero on the contour)";
                    throw Error(ErrorKind::NearZeroOnContour, os.str());
                }
                const double zm = 0.5 * (left_z + right.z);
                stack.push_back({zm, product(zm)});
                continue;
            }
            stack.pop_back();
            nodes_.push_back(right.z);
            args_.push_back(args_.back() + d);
            left_z = right.z;
            left_v = right.v;
        }
    }
}

cplx WindingProfile::product(double zeta) const
{
    const AxisValues v = spec_->on_axis(zeta);
    const cplx p = v.a1 * v.a2;
    if (!(std::abs(p) > 1e-14) || !std::isfinite(std::abs(p))) {
        std::ostringstream os;
        os << "a1 a2 vanishes or is not finite at zeta = " << zeta;
        throw Error(ErrorKind::NearZeroOnContour, os.str());
    }
    return p;
}

double WindingProfile::branch_near(double zeta, cplx value) const
{
    const double principal = std::arg(value);
    if (zeta < nodes_.front()) return principal;
    if (zeta > nodes_.back()) {
        std::ostringstream os;
        os << "zeta = " << zeta << " lies inside the guard band (-" << opt_.xi_floor << ", 0)";
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), zeta);
    std::size_t j = it == nodes_.end() ? nodes_.size() - 1 : static_cast<std::size_t>(it - nodes_.begin());
    const std::size_t i = j - 1;
    const double t = (zeta - nodes_[i]) / (nodes_[j] - nodes_[i]);
    const double guess = args_[i] + t * (args_[j] - args_[i]);
    return principal + 2.0 * pi * std::round((guess - principal) / (2.0 * pi));
}

double WindingProfile::arg_at(double zeta) const
{
    return branch_near(zeta, product(zeta));
}

double WindingProfile::phi(double xi) const
{
    return arg_at(-xi);
}

cplx WindingProfile::log_jump(double zeta) const
{
    const cplx p = product(zeta);
    return -cplx(std::log(std::abs(p)), branch_near(zeta, p));
}

cplx WindingProfile::log_jump_derivative(double zeta) const
{
    return -spec_->product_derivative(zeta) / product(zeta);
}

OmegaSet find_omegas(const WindingProfile& w, int n)
{
    OmegaSet out;
    if (n <= 1) return out;
    out.omegas.assign(static_cast<std::size_t>(n - 1), 0.0);
    const auto& z = w.nodes();
    const auto& a = w.args();
    for (int m = 1; m <= n - 1; ++m) {
        const double level = (2.0 * m - 1.0) * pi;
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i + 1 < z.size(); ++i)
            if ((a[i] - level) * (a[i + 1] - level) < 0.0 || a[i + 1] == level) hits.push_back(i);
        if (hits.size() != 1) {
            std::ostringstream os;
            os << "winding level " << 2 * m - 1 << " pi is crossed " << hits.size()
               << " times (expected once)";
            throw Error(ErrorKind::MissingCrossing, os.str());
        }
        const std::size_t i = hits[0];
        auto g = [&](double xi) { return w.phi(xi) - level; };
        double lo = -z[i + 1], hi = -z[i];
        double glo = g(lo), ghi = g(hi);
        if (glo * ghi > 0.0) {
            std::ostringstream os;
            os << "winding level " << 2 * m - 1 << " pi: pointwise values do not bracket";
            throw Error(ErrorKind::MissingCrossing, os.str());
        }
        boost::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(50), iters);
        out.omegas[static_cast<std::size_t>(n - m - 1)] = 0.5 * (r.first + r.second);
    }
    for (std::size_t j = 1; j < out.omegas.size(); ++j)
        if (!(out.omegas[j] > out.omegas[j - 1]))
            throw Error(ErrorKind::AssumptionViolation, "thresholds omega_j are not increasing");
    return out;
}

std::vector<double> spectral_singularities(const SpectralData& spec, double K, double threshold)
{
    std::vector<double> ks;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        const double k = -K + 2.0 * K * i / n;
        if (std::abs(k) >= 1e-3) ks.push_back(k);
    }
    auto mag = [&](double k) { return std::abs(spec.a1(k)); };
    std::vector<double> m(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) m[i] = mag(ks[i]);
    std::vector<double> found;
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        if (!(m[i] <= m[i - 1] && m[i] <= m[i + 1])) continue;
        if (ks[i + 1] - ks[i - 1] > 3.0 * (2.0 * K / n)) continue;  // straddles the guard band
        const auto r = boost::math::tools::brent_find_minima(mag, ks[i - 1], ks[i + 1], 50);
        if (r.second < threshold) found.push_back(r.first);
    }
    return found;
}

AssumptionReport verify_assumptions(const SpectralData& spec, const ZeroSet& zeros,
                                    const OmegaSet& omegas, const WindingProfile* winding)
{
    AssumptionReport rep;
    auto note = [&](const std::string& s) { rep.diagnostics.push_back(s); };
    std::ostringstream os;
    os.precision(10);
    const double A = spec.amplitude();
    const int n = zeros.n();

    // (a) simple zeros, strict ordering, no real zeros, no extra zeros.
    rep.zeros_ok = true;
    if (n == 0) {
        rep.zeros_ok = false;
        note("n = 0: no zeros of a1, outside the scope of the asymptotic theorem");
    }
    for (int j = 0; j < n; ++j) {
        const cplx p = zeros.p[static_cast<std::size_t>(j)];
        os.str("");
        if (!(p.imag() > 0.0) || !(p.real() < 0.0)) {
            rep.zeros_ok = false;
            os << "p_" << j + 1 << " = " << p << " is not in the open upper-left quadrant";
            note(os.str());
            continue;
        }
        const double d = std::abs(spec.a1_derivative(p));
        if (!(d > 1e-8)) {
            rep.zeros_ok = false;
            os << "p_" << j + 1 << " = " << p << " is not simple (|a1'(p)| = " << d << ")";
            note(os.str());
        }
        if (j > 0 && !(zeros.p[static_cast<std::size_t>(j)].real() <
                       zeros.p[static_cast<std::size_t>(j - 1)].real() - 1e-8)) {
            rep.zeros_ok = false;
            os.str("");
            os << "Re p_" << j + 1 << " is not strictly below Re p_" << j;
            note(os.str());
        }
    }
    const double B = 2.0 * std::max(A, 1.0);
    for (double k : spectral_singularities(spec, B, 1e-6)) {
        rep.zeros_ok = false;
        os.str("");
        os << "a1 vanishes on the real axis at k = " << k << " (spectral singularity)";
        note(os.str());
    }
    try {
        const int count = winding_number([&](cplx k) { return spec.a1(k); }, {-B, B, 1e-3, B}, 512);
        if (count != 2 * n) {
            rep.zeros_ok = false;
            os.str("");
            os << "argument principle counts " << count << " zeros of a1 in the upper half-plane, "
               << "expected 2n = " << 2 * n << " (additional zeros are not supported)";
            note(os.str());
        }
    } catch (const Error& e) {
        rep.zeros_ok = false;
        note(std::string("zero count failed: ") + e.what());
    }

    // (b) a2 nonvanishing in the closed lower half-plane.
    double min_a2 = std::numeric_limits<double>::infinity();
    cplx at{};
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 20; ++j) {
            const cplx k{-B + 2.0 * B * i / 40, -B * j / 20.0};
            if (std::abs(k) < 1e-3) continue;
            const double v = std::abs(spec.a2(k));
            if (v < min_a2) {
                min_a2 = v;
                at = k;
            }
        }
    rep.a2_nonvanishing = min_a2 > 1e-6;
    if (!rep.a2_nonvanishing) {
        os.str("");
        os << "min |a2| = " << min_a2 << " at k = " << at;
        note(os.str());
    }

    // (c) interleaving and winding bands.
    rep.interleaving_ok = n >= 1 && static_cast<int>(omegas.omegas.size()) == n - 1;
    if (n >= 1 && static_cast<int>(omegas.omegas.size()) != n - 1) {
        os.str("");
        os << omegas.omegas.size() << " thresholds omega_j for n = " << n << " (expected n - 1)";
        note(os.str());
    }
    if (rep.interleaving_ok) {
        for (int j = 1; j <= n - 1; ++j) {
            const double w = omegas.omegas[static_cast<std::size_t>(j - 1)];
            const double upper = zeros.p[static_cast<std::size_t>(j - 1)].real();
            const double lower = zeros.p[static_cast<std::size_t>(j)].real();
            if (!(lower < -w - 1e-8 && -w < upper - 1e-8)) {
                rep.interleaving_ok = false;
                os.str("");
                os << "Re p_" << j + 1 << " < -omega_" << j << " < Re p_" << j << " violated";
                note(os.str());
            }
        }
    }

    rep.winding_bands_ok = false;
    if (n >= 1 && static_cast<int>(omegas.omegas.size()) == n - 1) {
        std::unique_ptr<WindingProfile> own;
        try {
            const WindingProfile* w = winding;
            if (!w) {
                own = std::make_unique<WindingProfile>(
                    SpectralPtr(&spec, [](const SpectralData*) {}));
                w = own.get();
            }
            rep.winding_bands_ok = true;
            std::vector<double> edges{w->xi_floor()};
            for (double o : omegas.omegas) edges.push_back(o);
            edges.push_back(w->k_max());
            for (int j = 1; j <= n; ++j) {
                const int m = n - j;
                const double lo = edges[static_cast<std::size_t>(j - 1)];
                const double hi = edges[static_cast<std::size_t>(j)];
                for (int s = 1; s < 32; ++s) {
                    const double t = s / 32.0;
                    const double xi = j == n ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
                    const double ph = w->phi(xi);
                    if (!(ph > (2.0 * m - 1.0) * pi && ph < (2.0 * m + 1.0) * pi)) {
                        rep.winding_bands_ok = false;
                        os.str("");
                        os << "winding " << ph / pi << " pi at xi = " << xi << " outside band m = " << m;
                        note(os.str());
                        break;
                    }
                }
            }
        } catch (const Error& e) {
            rep.winding_bands_ok = false;
            note(std::string("winding profile unavailable: ") + e.what());
        }
    } else {
        note("winding bands not checked: thresholds inconsistent with n");
    }
    return rep;
}

}  // namespace nnls
