#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "nnls/errors.hpp"
#include "nnls/spectrum.hpp"

using namespace nnls;

namespace {

// Plain bisection on |k| = (A/2)|cos 2kR| exp(-2kR tan 2kR) for Re p_j.
double bisect_real_part(double A, double R, int j)
{
    auto h = [&](double k) {
        const double u = 2.0 * k * R;
        return std::abs(k) - 0.5 * A * std::abs(std::cos(u)) * std::exp(-u * std::tan(u));
    };
    double lo = -(2.0 * j - 1.0) * pi / (4.0 * R) + 1e-9, hi = -(j - 1.0) * pi / (2.0 * R) - 1e-14;
    if (j == 1) hi = -1e-14;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Analytic closed_a1(const BackgroundParams& bg)
{
    auto s = std::make_shared<PureStepSpectrum>(bg);
    return [s](cplx k) { return s->a1(k); };
}

Box upper_box(double A)
{
    return {-A, A, 1e-3, A};
}

// Unwrapped arg(a1 a2) over [z0, z1] on a uniform grid fine enough for the pure step.
double unwrap_uniform(const SpectralData& s, double z0, double z1, int n)
{
    double total = 0.0;
    auto val = [&](double z) {
        const auto v = s.on_axis(z);
        return v.a1 * v.a2;
    };
    cplx prev = val(z0);
    for (int i = 1; i <= n; ++i) {
        const cplx cur = val(z0 + (z1 - z0) * i / n);
        total += std::arg(cur / prev);
        prev = cur;
    }
    return total;
}

}  // namespace

TEST(Spectrum, PureStepZeroCountsAndIntervals)
{
    for (double R : {0.5, 2.0, 4.0, 7.0, 9.7}) {
        const BackgroundParams bg{1.0, R};
        const auto z = pure_step_zeros(bg);
        EXPECT_EQ(z.n(), static_cast<int>(std::ceil(R / pi))) << R;
        PureStepSpectrum s(bg);
        for (int j = 1; j <= z.n(); ++j) {
            const cplx p = z.p[j - 1];
            EXPECT_LE(std::abs(s.a1(p)), 1e-10);
            EXPECT_GT(p.real(), -(2.0 * j - 1.0) * pi / (4.0 * R));
            EXPECT_LT(p.real(), -(j - 1.0) * pi / (2.0 * R));
            EXPECT_GT(p.imag(), 0.0);
            EXPECT_NEAR(p.real(), bisect_real_part(1.0, R, j), 1e-12);
            EXPECT_NEAR(p.imag(), p.real() * std::tan(2.0 * p.real() * R), 1e-12);
        }
    }
}

TEST(Spectrum, SingleZeroForA2R1)
{
    const auto z = pure_step_zeros({2.0, 1.0});
    ASSERT_EQ(z.n(), 1);
    const cplx p = z.p[0];
    EXPECT_GT(p.real(), -pi / 4.0);
    EXPECT_LT(p.real(), 0.0);
    EXPECT_NEAR(p.imag(), p.real() * std::tan(2.0 * p.real()), 1e-12);
    EXPECT_NEAR(p.real(), bisect_real_part(2.0, 1.0, 1), 1e-12);
}

TEST(Spectrum, ArgumentPrincipleSearchMatchesPureStep)
{
    for (double R : {2.0, 7.0, 9.7}) {
        const BackgroundParams bg{1.0, R};
        const auto res = find_zeros(closed_a1(bg), upper_box(1.0));
        const auto ref = pure_step_zeros(bg);
        EXPECT_EQ(res.count, 2 * ref.n());
        EXPECT_EQ(static_cast<int>(res.zeros.size()), res.count);
        const auto left = upper_left_zeros(res.zeros);
        ASSERT_EQ(left.n(), ref.n());
        for (int j = 0; j < ref.n(); ++j) EXPECT_LT(std::abs(left.p[j] - ref.p[j]), 1e-9);
        PureStepSpectrum s(bg);
        for (cplx p : res.zeros) {
            EXPECT_LE(std::abs(s.a1(p)), 1e-10);
            EXPECT_LE(std::abs(s.a1(-std::conj(p))), 1e-9);
        }
    }
}

TEST(Spectrum, RandomizedCountsMatchRefinedZeros)
{
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> ua(0.5, 2.0), ur(0.3, 5.0);
    int draws = 0;
    while (draws < 50) {
        const BackgroundParams bg{ua(gen), ur(gen)};
        if (bifurcation_distance(bg) < 0.02) continue;
        ++draws;
        const auto res = find_zeros(closed_a1(bg), upper_box(bg.A));
        EXPECT_EQ(res.count, static_cast<int>(res.zeros.size()));
        EXPECT_EQ(res.count, 2 * pure_step_zero_count(bg)) << bg.A << " " << bg.R;
    }
}

TEST(Spectrum, ZeroAmplitudeHasNoZeros)
{
    const auto res = find_zeros(closed_a1({0.0, 2.0}), {-1.0, 1.0, 1e-3, 1.0});
    EXPECT_EQ(res.count, 0);
    EXPECT_TRUE(res.zeros.empty());
    EXPECT_EQ(pure_step_zero_count({0.0, 2.0}), 0);
}

TEST(Spectrum, BoxThroughZeroIsRejected)
{
    const BackgroundParams bg{1.0, 2.0};
    const cplx p = pure_step_zeros(bg).p[0];
    try {
        winding_number(closed_a1(bg), {p.real(), 0.5, 0.01, 0.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BoxTouchesZero);
    }
}

TEST(Spectrum, BifurcationGuardAndCountIncrement)
{
    try {
        pure_step_zeros({1.0, pi});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BifurcationProximity);
    }
    EXPECT_EQ(pure_step_zeros({1.0, pi - 1e-3}).n(), 1);
    EXPECT_EQ(pure_step_zeros({1.0, pi + 1e-3}).n(), 2);
    // The new zero is born from the real zero -A/2.
    const auto z = pure_step_zeros({1.0, pi + 1e-4});
    EXPECT_LT(std::abs(z.p[1] - cplx(-0.5, 0.0)), 1e-4);
}

TEST(Spectrum, NormingConstantsClosedForm)
{
    const BackgroundParams bg{1.0, 7.0};
    auto z = pure_step_zeros(bg);
    attach_norming_constants(z, PureStepSpectrum(bg));
    ASSERT_EQ(z.eta.size(), z.p.size());
    for (int j = 0; j < z.n(); ++j) {
        const cplx p = z.p[j];
        const cplx eta = -(bg.A / (2.0 * I * p)) * std::exp(2.0 * I * p * bg.R);
        EXPECT_LT(std::abs(z.eta[j] - eta), 1e-12 * std::abs(eta));
    }
}

TEST(Spectrum, WindingQuantizationAndOmegas)
{
    const BackgroundParams bg{1.0, 7.0};
    auto spec = std::make_shared<PureStepSpectrum>(bg);
    WindingProfile w(spec);
    const int n = pure_step_zero_count(bg);
    ASSERT_EQ(n, 3);
    for (int m = 1; m <= n - 1; ++m) {
        const double omega = (n - m) * pi / (2.0 * bg.R);
        EXPECT_NEAR(w.phi(omega), (2.0 * m - 1.0) * pi, 1e-3 * pi);
    }
    const auto om = find_omegas(w, n);
    ASSERT_EQ(om.omegas.size(), 2u);
    for (int j = 1; j <= n - 1; ++j) EXPECT_NEAR(om.omegas[j - 1], j * pi / (2.0 * bg.R), 1e-6);
    // Band membership.
    std::vector<double> edges{1e-3, om.omegas[0], om.omegas[1], 5.0};
    for (int j = 1; j <= n; ++j) {
        const int m = n - j;
        for (double t : {0.1, 0.5, 0.9}) {
            const double xi = edges[j - 1] + t * (edges[j] - edges[j - 1]);
            EXPECT_GT(w.phi(xi), (2.0 * m - 1.0) * pi);
            EXPECT_LT(w.phi(xi), (2.0 * m + 1.0) * pi);
        }
    }
}

TEST(Spectrum, WindingAdditivity)
{
    const BackgroundParams bg{1.0, 4.0};
    auto spec = std::make_shared<PureStepSpectrum>(bg);
    WindingProfile w(spec);
    for (auto [x1, x2] : {std::pair{2.0, 0.05}, {0.9, 0.31}, {0.3, 0.002}}) {
        const double lhs = w.phi(x2) - w.phi(x1);
        const double rhs = unwrap_uniform(*spec, -x1, -x2, 200000);
        EXPECT_NEAR(lhs, rhs, 1e-8) << x1 << " " << x2;
    }
}

TEST(Spectrum, WindingZeroAmplitude)
{
    WindingProfile w(std::make_shared<PureStepSpectrum>(BackgroundParams{0.0, 1.0}));
    for (double xi : {0.01, 0.5, 3.0}) EXPECT_EQ(w.phi(xi), 0.0);
    EXPECT_TRUE(find_omegas(w, 1).omegas.empty());
}

TEST(Spectrum, MissingCrossingRejected)
{
    WindingProfile w(std::make_shared<PureStepSpectrum>(BackgroundParams{1.0, 2.0}));
    try {
        find_omegas(w, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MissingCrossing);
        EXPECT_EQ(e.error_class(), ErrorClass::Assumption);
    }
}

TEST(Spectrum, ZeroOnContourRejected)
{
    try {
        WindingProfile w(std::make_shared<PureStepSpectrum>(BackgroundParams{1.0, pi}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NearZeroOnContour);
    }
}

TEST(Spectrum, AssumptionsHoldForPureStep)
{
    for (double R : {2.0, 7.0}) {
        const BackgroundParams bg{1.0, R};
        PureStepSpectrum s(bg);
        auto spec = std::make_shared<PureStepSpectrum>(bg);
        WindingProfile w(spec);
        const auto z = pure_step_zeros(bg);
        const auto om = find_omegas(w, z.n());
        const auto rep = verify_assumptions(s, z, om, &w);
        EXPECT_TRUE(rep.all_ok()) << (rep.diagnostics.empty() ? "" : rep.diagnostics[0]);
    }
}

TEST(Spectrum, AssumptionsFlagRealZerosAtBifurcation)
{
    const BackgroundParams bg{1.0, pi};
    PureStepSpectrum s(bg);
    ZeroSet z;
    z.p = {pure_step_zeros({1.0, pi - 1e-3}).p[0]};
    const auto rep = verify_assumptions(s, z, {});
    EXPECT_FALSE(rep.zeros_ok);
    const auto sing = spectral_singularities(s, 2.0);
    ASSERT_EQ(sing.size(), 2u);
    EXPECT_NEAR(sing[0], -0.5, 1e-6);
    EXPECT_NEAR(sing[1], 0.5, 1e-6);
    int flagged = 0;
    for (const auto& d : rep.diagnostics)
        if (d.find("vanishes on the real axis") != std::string::npos) ++flagged;
    EXPECT_EQ(flagged, 2);
    EXPECT_FALSE(rep.all_ok());
}

TEST(Spectrum, AssumptionsFlagZeroAmplitude)
{
    PureStepSpectrum s({0.0, 1.0});
    const auto rep = verify_assumptions(s, {}, {});
    EXPECT_FALSE(rep.zeros_ok);
    EXPECT_FALSE(rep.all_ok());
    ASSERT_FALSE(rep.diagnostics.empty());
    EXPECT_NE(rep.diagnostics[0].find("n = 0"), std::string::npos);
}

TEST(Spectrum, NumericWindingMatchesClosedForm)
{
    const BackgroundParams bg{1.0, 2.0};
    auto num = std::make_shared<NumericSpectrum>(InitialProfile::pure_step(bg, -3.0, 3.0, 0.01));
    WindingProfile wn(num);
    WindingProfile we(std::make_shared<PureStepSpectrum>(bg));
    for (double xi : {0.05, 0.3, 0.6, 1.0}) EXPECT_NEAR(wn.phi(xi), we.phi(xi), 1e-7) << xi;
    EXPECT_LE(wn.k_max(), 200.0);
    EXPECT_GT(wn.tail_bound(), 0.0);
}
