#include "nnls/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nnls/errors.hpp"
#include "nnls/gamma.hpp"

namespace nnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double omega_at(const OmegaSet& omegas, int n, int j)
{
    if (j <= 0) return 0.0;
    if (j >= n) return kInf;
    return omegas.omegas.at(static_cast<std::size_t>(j - 1));
}

void require_zeros(const ZeroSet& zeros)
{
    if (zeros.n() == 0)
        throw Error(ErrorKind::AssumptionViolation, "sector structure needs at least one zero of a1");
}

cplx checked_rgamma(cplx z)
{
    if (gamma_pole_distance(z) < 1e-12) {
        std::ostringstream os;
        os << "Gamma argument " << z << " is at a pole";
        throw Error(ErrorKind::Pole, os.str());
    }
    return rcgamma(z);
}

cplx checked_reflection(cplx r, const char* name, double at)
{
    if (!(std::abs(r) >= 1e-14)) {
        std::ostringstream os;
        os << name << " at " << at << " is below 1e-14 in modulus";
        throw Error(ErrorKind::DegenerateReflection, os.str());
    }
    return r;
}

// prod_{s=0}^{last} g(p_{n-s})
template <class G>
cplx product(const ZeroSet& zeros, int last, const G& g)
{
    cplx out = 1.0;
    const int n = zeros.n();
    for (int s = 0; s <= last; ++s) out *= g(zero_p(zeros, n - s));
    return out;
}

}  // namespace

const char* family_name(Family f)
{
    switch (f) {
    case Family::PlateauRight: return "plateau-right";
    case Family::DecayFarLeft: return "decay-far-left";
    case Family::PlateauLeft: return "plateau-left";
    case Family::DecayInner: return "decay-inner";
    }
    return "?";
}

bool is_plateau(Family f)
{
    return f == Family::PlateauRight || f == Family::PlateauLeft;
}

const char* side_name(KinkSide s)
{
    return s == KinkSide::XPositive ? "x-positive" : "x-negative";
}

cplx zero_p(const ZeroSet& zeros, int j)
{
    const int n = zeros.n();
    if (j < 1 || j > n) throw Error(ErrorKind::Config, "zero index out of range");
    return zeros.p[static_cast<std::size_t>(j - 1)];
}

cplx zero_eta(const ZeroSet& zeros, int j)
{
    const int n = zeros.n();
    if (j < 1 || j > n || zeros.eta.size() != zeros.p.size())
        throw Error(ErrorKind::Config, "norming constant unavailable");
    return zeros.eta[static_cast<std::size_t>(j - 1)];
}

SectorMap sector_map(const ZeroSet& zeros, const OmegaSet& omegas, double guard_fraction)
{
    require_zeros(zeros);
    const int n = zeros.n();
    if (static_cast<int>(omegas.omegas.size()) != n - 1)
        throw Error(ErrorKind::Config, "need n - 1 winding thresholds");
    SectorMap map;
    for (int m = 0; m < n; ++m) {
        const double rp = zero_p(zeros, n - m).real();
        const double wo = omega_at(omegas, n, n - m), wi = omega_at(omegas, n, n - m - 1);
        map.sectors.push_back({Family::PlateauRight, m, -rp, wo});
        map.sectors.push_back({Family::DecayFarLeft, m, -wo, rp});
        map.sectors.push_back({Family::PlateauLeft, m, rp, -wi});
        map.sectors.push_back({Family::DecayInner, m, wi, -rp});
    }
    std::sort(map.sectors.begin(), map.sectors.end(),
              [](const Sector& a, const Sector& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i + 1 < map.sectors.size(); ++i) {
        if (!(map.sectors[i].hi == map.sectors[i + 1].lo) || !(map.sectors[i].lo < map.sectors[i].hi))
            throw Error(ErrorKind::AssumptionViolation, "zeros and thresholds do not interleave");
        map.boundaries.push_back(map.sectors[i].hi);
    }
    const std::size_t nb = map.boundaries.size();
    for (std::size_t i = 0; i < nb; ++i) {
        double gap = kInf;
        if (i > 0) gap = std::min(gap, map.boundaries[i] - map.boundaries[i - 1]);
        if (i + 1 < nb) gap = std::min(gap, map.boundaries[i + 1] - map.boundaries[i]);
        if (!std::isfinite(gap)) gap = std::abs(map.boundaries[i]);
        map.guard.push_back(guard_fraction * gap);
    }
    return map;
}

Sector classify(double xi, const SectorMap& map)
{
    if (!std::isfinite(xi)) throw Error(ErrorKind::Config, "xi must be finite");
    for (std::size_t i = 0; i < map.boundaries.size(); ++i) {
        if (std::abs(xi - map.boundaries[i]) <= map.guard[i]) {
            std::ostringstream os;
            os << "xi = " << xi << " lies within " << map.guard[i] << " of the sector boundary "
               << map.boundaries[i];
            throw Error(ErrorKind::TransitionZone, os.str());
        }
    }
    for (const Sector& s : map.sectors)
        if (xi > s.lo && xi < s.hi) return s;
    throw Error(ErrorKind::TransitionZone, "xi is not inside any sector");
}

Sector classify(double xi, const ZeroSet& zeros, const OmegaSet& omegas, double guard_fraction)
{
    return classify(xi, sector_map(zeros, omegas, guard_fraction));
}

C0Values c0_values(double xi, int m, const ZeroSet& zeros, double A, cplx delta0)
{
    require_zeros(zeros);
    if (xi == 0.0 && m > 0) throw Error(ErrorKind::SingularPoint, "c0 products are singular at xi = 0");
    if (A == 0.0) throw Error(ErrorKind::SingularPoint, "c0 sharp is singular for A = 0");
    const int n = zeros.n();
    const cplx d2 = delta0 * delta0;
    const cplx pr = product(zeros, m - 1, [&](cplx p) { return (xi / p) * (xi / p); });
    const cplx pm = zero_p(zeros, n - m);
    return {A * d2 / (2.0 * I) * pr, 2.0 * I * pm * pm / (A * d2) / pr};
}

cplx plateau(const Sector& sector, double xi, const ZeroSet& zeros, const PhaseContext& phase)
{
    const double A = phase.spectrum().amplitude();
    const int m = sector.m, n = zeros.n();
    switch (sector.family) {
    case Family::PlateauRight: {
        const cplx d0 = phase.values(xi).delta0;
        return A * d0 * d0 * product(zeros, m - 1, [&](cplx p) { return (xi / p) * (xi / p); });
    }
    case Family::PlateauLeft: {
        const cplx d0 = phase.values(-xi).delta0;
        const cplx pb = std::conj(zero_p(zeros, n - m));
        const cplx pr = product(zeros, m - 1, [&](cplx p) { return (std::conj(p) / xi) * (std::conj(p) / xi); });
        return -4.0 * pb * pb / (A * std::conj(d0 * d0)) * pr;
    }
    default:
        return 0.0;
    }
}

BetaGamma beta_gamma(cplx r1c, cplx r2c, cplx nu_check)
{
    checked_reflection(r1c, "modified r1", 0.0);
    checked_reflection(r2c, "modified r2", 0.0);
    const cplx common = std::sqrt(2.0 * pi) * std::exp(-0.5 * pi * nu_check);
    const cplx beta = common * std::exp(-0.75 * pi * I) * checked_rgamma(-I * nu_check) / r1c;
    const cplx gamma = common * std::exp(-0.25 * pi * I) * checked_rgamma(I * nu_check) / r2c;
    return {beta, gamma};
}

cplx alpha(int j, double xi, int m, const ZeroSet& zeros, const PhaseContext& phase)
{
    require_zeros(zeros);
    const bool right = j == 1 || j == 2 || j == 4;
    if (j < 1 || j > 6) throw Error(ErrorKind::Config, "alpha index must be 1..6");
    if (right ? !(xi > 0.0) : !(xi < 0.0)) {
        std::ostringstream os;
        os << "alpha_" << j << " needs xi " << (right ? "> 0" : "< 0") << ", got " << xi;
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
    const double d = std::abs(xi);
    const PhaseValues pv = phase.values(d);
    const AxisValues ax = phase.spectrum().on_axis(-d);
    const double A = phase.spectrum().amplitude();
    const double ln2 = std::log(2.0);
    const double sqpi = std::sqrt(pi);
    const int n = zeros.n();

    if (right) {
        const cplx nu = pv.nu, chi = pv.chi_at_minus_xi;
        const cplx base = -0.5 * pi * (nu - I * double(m));
        const cplx l2 = 3.0 * (I * nu + double(m)) * ln2;
        const cplx sq = product(zeros, m - 1, [&](cplx p) { return (xi + p) * (xi + p); });
        if (j == 1) {
            const cplx c0 = c0_values(xi, m, zeros, A, pv.delta0).c0;
            const cplx r2 = checked_reflection(ax.r2(), "r2", -d);
            return sqpi * c0 * c0 * sq / (xi * xi * r2) * checked_rgamma(I * nu + double(m)) *
                   std::exp(base + 0.75 * pi * I - 2.0 * chi + l2);
        }
        const cplx r1 = checked_reflection(ax.r1(), "r1", -d);
        const cplx g = checked_rgamma(-I * nu - double(m));
        const cplx e = std::exp(base + 0.25 * pi * I + 2.0 * chi - l2);
        if (j == 2) return sqpi / sq / r1 * g * e;
        const cplx pm = zero_p(zeros, n - m);
        return sqpi * xi * xi / (sq * (xi + pm) * (xi + pm)) / r1 * g * e;
    }

    const cplx nb = std::conj(pv.nu), cb = std::conj(pv.chi_at_minus_xi);
    const cplx base = -0.5 * pi * (nb + I * double(m));
    const cplx l2 = 3.0 * (I * nb - double(m)) * ln2;
    const cplx sq = product(zeros, m - 1, [&](cplx p) { return (std::conj(p) - xi) * (std::conj(p) - xi); });
    const cplx pm = std::conj(zero_p(zeros, n - m));
    const cplx sq_full = sq * (pm - xi) * (pm - xi);
    if (j == 3 || j == 5) {
        const cplx r2b = std::conj(checked_reflection(ax.r2(), "r2", -d));
        const cplx g = checked_rgamma(-I * nb + double(m));
        const cplx e = std::exp(base + 0.25 * pi * I - 2.0 * cb - l2);
        if (j == 3) return sqpi * sq / r2b * g * e;
        return sqpi * sq_full / (xi * xi * r2b) * g * e;
    }
    const cplx c0s = std::conj(c0_values(d, m, zeros, A, pv.delta0).c0_sharp);
    const cplx r1b = std::conj(checked_reflection(ax.r1(), "r1", -d));
    return sqpi * c0s * c0s / sq_full / r1b * checked_rgamma(I * nb - double(m)) *
           std::exp(base + 0.75 * pi * I + 2.0 * cb + l2);
}

cplx OscillatoryTerm::value(double t) const
{
    return amplitude * std::pow(t, t_power) * std::exp(I * (phase_coeff * t + logt_coeff * std::log(t)));
}

cplx AsymptoticPrediction::value() const
{
    cplx v = leading;
    for (const auto& term : oscillatory) v += term.value(t);
    return v;
}

RemainderClass remainder_class(int kind, double s)
{
    RemainderClass r;
    r.kind = kind;
    if (std::abs(s) < 1e-12) {
        r.exponent = -1.0;
        r.with_log = true;
        return r;
    }
    const double grown = -1.0 + 2.0 * std::abs(s);
    switch (kind) {
    case 1: r.exponent = s > 0.0 ? -1.0 : grown; break;
    case 2: r.exponent = s > 0.0 ? grown : -1.0; break;
    default: r.exponent = grown; break;
    }
    return r;
}

AsymptoticPrediction predict(double xi, double t, const ZeroSet& zeros, const OmegaSet& omegas,
                             const PhaseContext& phase, double guard_fraction)
{
    if (!(t > 0.0)) throw Error(ErrorKind::Config, "t must be positive");
    AsymptoticPrediction out;
    out.xi = xi;
    out.t = t;
    out.sector = classify(xi, zeros, omegas, guard_fraction);
    const int m = out.sector.m;
    const double d = std::abs(xi);
    const PhaseValues pv = phase.values(d);
    out.nu = pv.nu;
    out.branch = im_nu_branch(pv.nu, m);
    const double s = pv.nu.imag() - m;
    const double re = pv.nu.real();
    const double w = 4.0 * xi * xi;
    out.leading = plateau(out.sector, xi, zeros, phase);

    auto term = [&](int j, double power, double pc, double lc) {
        out.oscillatory.push_back({j, alpha(j, xi, m, zeros, phase), power, pc, lc});
    };
    const double down = -0.5 - s, up = -0.5 + s;
    switch (out.sector.family) {
    case Family::PlateauRight:
        if (out.branch != ImNuBranch::High) term(1, down, -w, re);
        if (out.branch != ImNuBranch::Low) term(2, up, w, -re);
        break;
    case Family::DecayInner:
        term(4, up, w, -re);
        break;
    case Family::DecayFarLeft:
        term(3, down, w, -re);
        break;
    case Family::PlateauLeft:
        if (out.branch != ImNuBranch::High) term(5, down, w, -re);
        if (out.branch != ImNuBranch::Low) term(6, up, -w, re);
        break;
    }
    if (is_plateau(out.sector.family)) {
        const int kind = out.branch == ImNuBranch::Low ? 1 : out.branch == ImNuBranch::Middle ? 3 : 2;
        out.remainder = remainder_class(kind, s);
    } else {
        out.remainder = remainder_class(2, s);
    }
    return out;
}

KinkProfile::KinkProfile(int m, KinkSide side, const ZeroSet& zeros, const PhaseContext& phase)
    : m_(m), side_(side)
{
    require_zeros(zeros);
    const int n = zeros.n();
    if (m < 0 || m >= n) throw Error(ErrorKind::Config, "kink index m must lie in 0..n-1");
    p_ = zero_p(zeros, n - m);
    eta_ = zero_eta(zeros, n - m);
    xi_ = -p_.real();
    a1dot_ = phase.spectrum().a1_derivative(p_);
    delta_p_ = phase.delta_cached(p_, xi_);
    c0_ = c0_values(xi_, m, zeros, phase.spectrum().amplitude(), phase.values(xi_).delta0).c0;
}

cplx KinkProfile::f_as(double x0, double t) const
{
    return eta_ * std::exp(2.0 * I * p_ * x0 - 4.0 * I * t * std::norm(p_)) / (a1dot_ * delta_p_ * delta_p_);
}

cplx KinkProfile::operator()(double x0, double t) const
{
    const cplx f = f_as(x0, t);
    cplx num, den;
    if (side_ == KinkSide::XPositive) {
        num = 2.0 * I * p_ * p_ * c0_;
        den = p_ * p_ + c0_ * f;
    } else {
        const cplx pb = std::conj(p_);
        num = -2.0 * I * pb * pb * std::conj(f);
        den = pb * pb + std::conj(c0_) * std::conj(f);
    }
    if (std::abs(den) < 1e-8) {
        std::ostringstream os;
        os << "kink denominator vanishes at x0 = " << x0 << ", t = " << t;
        throw Error(ErrorKind::BlowUpPoint, os.str());
    }
    return num / den;
}

double KinkProfile::x_of(double x0, double t) const
{
    return side_ == KinkSide::XPositive ? -4.0 * p_.real() * t + x0 : 4.0 * p_.real() * t - x0;
}

cplx KinkProfile::limit_plus() const
{
    return side_ == KinkSide::XPositive ? 2.0 * I * c0_ : cplx(0.0);
}

cplx KinkProfile::limit_minus() const
{
    const cplx pb = std::conj(p_);
    return side_ == KinkSide::XPositive ? cplx(0.0) : -2.0 * I * pb * pb / std::conj(c0_);
}

cplx kink(int m, KinkSide side, double x0, double t, const ZeroSet& zeros, const PhaseContext& phase)
{
    return KinkProfile(m, side, zeros, phase)(x0, t);
}

}  // namespace nnls
