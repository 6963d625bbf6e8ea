#include "nnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "nnls/errors.hpp"

namespace nnls {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

using State = std::array<double, 4>;

void require_nonzero(cplx k)
{
    if (k == 0.0) throw Error(ErrorKind::SingularPoint, "k = 0 is a singular point of N_+-");
}

// Background-normalized system C' = K(x) C for one Jost column.
struct ColumnSystem {
    const InitialProfile* profile;
    Mat2 n, n_inv;
    cplx k;
    cplx bg12, bg21;
    double sign;  // +1 for x, -1 when integrating in s = -x
    double lo = 0.0, hi = 0.0;  // current segment in s

    void operator()(const State& y, State& dy, double s) const
    {
        const double x = sign * s;
        // One-sided limits of the potential at segment ends.
        const double eps = 1e-12 * (1.0 + std::abs(s));
        const double xq = sign * std::clamp(s, lo + eps, hi - eps);
        const InitialProfile& q = *profile;
        const cplx du12 = q(xq) - bg12;
        const cplx du21 = std::conj(q(-xq)) - bg21;
        // M = N^{-1} dU N with dU = [[0, du12], [du21, 0]].
        const cplx u11 = du12 * n.a21, u12 = du12 * n.a22;
        const cplx u21 = du21 * n.a11, u22 = du21 * n.a12;
        const cplx m11 = n_inv.a11 * u11 + n_inv.a12 * u21;
        const cplx m12 = n_inv.a11 * u12 + n_inv.a12 * u22;
        const cplx m21 = n_inv.a21 * u11 + n_inv.a22 * u21;
        const cplx m22 = n_inv.a21 * u12 + n_inv.a22 * u22;
        const cplx e = std::exp(2.0 * I * k * x);
        const cplx c1{y[0], y[1]}, c2{y[2], y[3]};
        cplx d1 = m11 * c1 + m12 * e * c2;
        cplx d2 = m21 / e * c1 + m22 * c2;
        d1 *= sign;
        d2 *= sign;
        dy = {d1.real(), d1.imag(), d2.real(), d2.imag()};
    }
};

void integrate_segment(ColumnSystem sys, State& y, double s0, double s1,
                       const JostOptions& opt, long& steps)
{
    if (s1 <= s0) return;
    sys.lo = s0;
    sys.hi = s1;
    auto stepper = odeint::make_controlled(opt.atol, opt.rtol,
                                           odeint::runge_kutta_dopri5<State>());
    double s = s0;
    double ds = std::min(0.05, s1 - s0);
    while (s < s1) {
        if (s + ds > s1) ds = s1 - s;
        const double before = s;
        if (stepper.try_step(sys, y, s, ds) == odeint::success) {
            if (++steps > opt.max_steps)
                throw Error(ErrorKind::NumericalFailure, "Jost integration exceeded step budget");
            if (!std::isfinite(y[0] + y[1] + y[2] + y[3]))
                throw Error(ErrorKind::NumericalFailure, "Jost integration produced non-finite values");
        } else if (ds < 1e-14 * (1.0 + std::abs(before))) {
            throw Error(ErrorKind::NumericalFailure, "Jost integration step size underflow");
        }
    }
}

// Integrates one column of C (Psi1) or D (Psi2) and returns the Jost column at x = 0.
std::array<cplx, 2> jost_column(const InitialProfile& profile, cplx k, JostSide side, int col,
                                const JostOptions& opt)
{
    const double A = profile.background().A;
    const double X = profile.support_radius();
    ColumnSystem sys;
    sys.profile = &profile;
    sys.k = k;
    if (side == JostSide::Psi1) {
        sys.n = background_left(A, k);
        sys.bg12 = 0.0;
        sys.bg21 = A;
        sys.sign = 1.0;
    } else {
        sys.n = background_right(A, k);
        sys.bg12 = A;
        sys.bg21 = 0.0;
        sys.sign = -1.0;
    }
    sys.n_inv = sys.n.inverse();

    // Integration variable s runs from -X to 0 in both cases (s = x or s = -x).
    std::vector<double> cuts{-X};
    for (double b : profile.breakpoints()) {
        const double s = sys.sign * b;
        if (s > -X && s < 0.0) cuts.push_back(s);
    }
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());

    State y = col == 0 ? State{1, 0, 0, 0} : State{0, 0, 1, 0};
    long steps = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        integrate_segment(sys, y, cuts[i], cuts[i + 1], opt, steps);

    const cplx c1{y[0], y[1]}, c2{y[2], y[3]};
    return {sys.n.a11 * c1 + sys.n.a12 * c2, sys.n.a21 * c1 + sys.n.a22 * c2};
}

cplx det2(const std::array<cplx, 2>& u, const std::array<cplx, 2>& v)
{
    return u[0] * v[1] - u[1] * v[0];
}

// exp(s * M) for traceless M.
Mat2 expm_traceless(const Mat2& m, cplx s)
{
    const cplx mu = std::sqrt(m.a11 * m.a11 + m.a12 * m.a21);
    const cplx z = s * mu;
    cplx sinhc;
    if (std::abs(z) < 1e-6) {
        sinhc = 1.0 + z * z / 6.0;
    } else {
        sinhc = std::sinh(z) / z;
    }
    const cplx c = std::cosh(z);
    return Mat2{c, 0.0, 0.0, c} + (s * sinhc) * m;
}

}  // namespace

int JostMatrix::trusted_column() const
{
    const bool upper = k.imag() > 0.0;
    if (side == JostSide::Psi1) return upper ? 0 : 1;
    return upper ? 1 : 0;
}

Mat2 background_left(double A, cplx k)
{
    require_nonzero(k);
    return {1.0, 0.0, -A / (2.0 * I * k), 1.0};
}

Mat2 background_right(double A, cplx k)
{
    require_nonzero(k);
    return {1.0, A / (2.0 * I * k), 0.0, 1.0};
}

JostMatrix jost_at_origin(const InitialProfile& profile, cplx k, JostSide side,
                          const JostOptions& opt)
{
    require_nonzero(k);
    JostMatrix out;
    out.k = k;
    out.side = side;
    std::array<cplx, 2> c0{cplx(nan, nan), cplx(nan, nan)}, c1 = c0;
    if (out.full()) {
        c0 = jost_column(profile, k, side, 0, opt);
        c1 = jost_column(profile, k, side, 1, opt);
    } else if (out.trusted_column() == 0) {
        c0 = jost_column(profile, k, side, 0, opt);
    } else {
        c1 = jost_column(profile, k, side, 1, opt);
    }
    out.m = {c0[0], c1[0], c0[1], c1[1]};
    return out;
}

AxisValues spectral_functions(const JostMatrix& psi1, const JostMatrix& psi2)
{
    if (!psi1.full() || !psi2.full())
        throw Error(ErrorKind::OutOfDomain, "spectral_functions needs real k");
    const auto p1c1 = psi1.m.column(0), p1c2 = psi1.m.column(1);
    const auto p2c1 = psi2.m.column(0), p2c2 = psi2.m.column(1);
    return {det2(p1c1, p2c2), det2(p2c1, p1c2), det2(p2c1, p1c1), det2(p1c2, p2c2)};
}

cplx SpectralData::a1_derivative(cplx k) const
{
    const double h = 1e-3 * std::max(1.0, std::abs(k));
    return (a1(k - 2.0 * h) - 8.0 * a1(k - h) + 8.0 * a1(k + h) - a1(k + 2.0 * h)) / (12.0 * h);
}

cplx SpectralData::product_derivative(double k) const
{
    const double h = 1e-3 * std::max(1.0, std::abs(k));
    auto p = [&](double z) {
        const AxisValues v = on_axis(z);
        return v.a1 * v.a2;
    };
    return (p(k - 2.0 * h) - 8.0 * p(k - h) + 8.0 * p(k + h) - p(k + 2.0 * h)) / (12.0 * h);
}

PureStepSpectrum::PureStepSpectrum(const BackgroundParams& bg) : bg_(bg)
{
    validate(bg);
}

cplx PureStepSpectrum::a1(cplx k) const
{
    require_nonzero(k);
    return 1.0 - bg_.A * bg_.A / (4.0 * k * k) * std::exp(4.0 * I * k * bg_.R);
}

cplx PureStepSpectrum::a2(cplx k) const
{
    require_nonzero(k);
    return 1.0;
}

AxisValues PureStepSpectrum::on_axis(double k) const
{
    require_nonzero(k);
    const cplx b = -bg_.A / (2.0 * I * k) * std::exp(2.0 * I * k * bg_.R);
    return {a1(k), 1.0, b, b};
}

cplx PureStepSpectrum::a1_derivative(cplx k) const
{
    require_nonzero(k);
    const double A2 = bg_.A * bg_.A;
    return A2 / 4.0 * std::exp(4.0 * I * k * bg_.R) *
           (2.0 / (k * k * k) - 4.0 * I * bg_.R / (k * k));
}

cplx PureStepSpectrum::norming_constant(cplx p) const
{
    require_nonzero(p);
    const Mat2 p1 = psi1_origin(p), p2 = psi2_origin(p);
    // Second components of Psi1^(1) and Psi2^(2); the latter equals 1.
    return p1.a21 / p2.a22;
}

Mat2 PureStepSpectrum::psi1_origin(cplx k) const
{
    require_nonzero(k);
    return {1.0, 0.0, -bg_.A / (2.0 * I * k) * std::exp(2.0 * I * k * bg_.R), 1.0};
}

Mat2 PureStepSpectrum::psi2_origin(cplx k) const
{
    require_nonzero(k);
    return {1.0, bg_.A / (2.0 * I * k) * std::exp(2.0 * I * k * bg_.R), 0.0, 1.0};
}

NumericSpectrum::NumericSpectrum(InitialProfile profile, JostOptions opt, double k_limit)
    : profile_(std::move(profile)), opt_(opt), k_limit_(k_limit)
{
}

namespace {
void guard_band(cplx k)
{
    if (std::abs(k) < 1e-3) {
        std::ostringstream os;
        os << "|k| = " << std::abs(k) << " is inside the guard band |k| < 1e-3 around k = 0";
        throw Error(ErrorKind::SingularPoint, os.str());
    }
}
}  // namespace

cplx NumericSpectrum::a1(cplx k) const
{
    guard_band(k);
    if (k.imag() < 0.0) throw Error(ErrorKind::OutOfDomain, "a1 is defined for Im k >= 0");
    if (k.imag() == 0.0) return on_axis(k.real()).a1;
    const auto v = jost_column(profile_, k, JostSide::Psi1, 0, opt_);
    const auto w = jost_column(profile_, k, JostSide::Psi2, 1, opt_);
    return det2(v, w);
}

cplx NumericSpectrum::a2(cplx k) const
{
    guard_band(k);
    if (k.imag() > 0.0) throw Error(ErrorKind::OutOfDomain, "a2 is defined for Im k <= 0");
    if (k.imag() == 0.0) return on_axis(k.real()).a2;
    const auto v = jost_column(profile_, k, JostSide::Psi2, 0, opt_);
    const auto w = jost_column(profile_, k, JostSide::Psi1, 1, opt_);
    return det2(v, w);
}

AxisValues NumericSpectrum::on_axis(double k) const
{
    guard_band(k);
    return spectral_functions(jost_at_origin(profile_, k, JostSide::Psi1, opt_),
                              jost_at_origin(profile_, k, JostSide::Psi2, opt_));
}

cplx NumericSpectrum::norming_constant(cplx p) const
{
    return nnls::norming_constant(profile_, p, opt_);
}

TransferOracle transfer_matrix_oracle(const BackgroundParams& bg, cplx k)
{
    require_nonzero(k);
    const double A = bg.A, R = bg.R;
    // On (-R, R) the step potential vanishes identically.
    const Mat2 inner{-I * k, 0.0, 0.0, I * k};
    const Mat2 phase_m{std::exp(I * k * R), 0.0, 0.0, std::exp(-I * k * R)};
    const Mat2 phase_p{std::exp(-I * k * R), 0.0, 0.0, std::exp(I * k * R)};
    const Mat2 phi1_left = background_left(A, k) * phase_m;   // Phi_-(-R)
    const Mat2 phi2_right = background_right(A, k) * phase_p; // Phi_+(R)
    TransferOracle out;
    out.psi1 = expm_traceless(inner, R) * phi1_left;
    out.psi2 = expm_traceless(inner, -R) * phi2_right;
    out.S = out.psi2.inverse() * out.psi1;
    return out;
}

cplx norming_constant(const InitialProfile& profile, cplx p, const JostOptions& opt)
{
    require_nonzero(p);
    if (!(p.imag() > 0.0))
        throw Error(ErrorKind::NotAZero, "zeros of a1 lie in the open upper half-plane");
    const auto v = jost_column(profile, p, JostSide::Psi1, 0, opt);
    const auto w = jost_column(profile, p, JostSide::Psi2, 1, opt);
    const double nv = std::hypot(std::abs(v[0]), std::abs(v[1]));
    const double nw = std::hypot(std::abs(w[0]), std::abs(w[1]));
    const double sine = std::abs(det2(v, w)) / (nv * nw);
    if (sine > 1e-6) {
        std::ostringstream os;
        os << "Jost columns at p = " << p << " are not parallel (sin angle = " << sine << ")";
        throw Error(ErrorKind::NotAZero, os.str());
    }
    return std::abs(w[1]) >= std::abs(w[0]) ? v[1] / w[1] : v[0] / w[0];
}

Reflection reflection(const SpectralData& s, double k)
{
    const AxisValues v = s.on_axis(k);
    if (std::abs(v.a1) < 1e-12 || std::abs(v.a2) < 1e-12) {
        std::ostringstream os;
        os << "spectral singularity: a1 or a2 vanishes at real k = " << k;
        throw Error(ErrorKind::AssumptionViolation, os.str());
    }
    return {v.r1(), v.r2()};
}

}  // namespace nnls
