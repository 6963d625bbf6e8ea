#pragma once

#include <memory>

#include "nnls/profile.hpp"
#include "nnls/types.hpp"

namespace nnls {

enum class JostSide { Psi1, Psi2 };

// Psi_j(0, k). For non-real k only the analytically continued column is computed;
// the other column is filled with NaN.
struct JostMatrix {
    Mat2 m;
    cplx k;
    JostSide side = JostSide::Psi1;

    bool full() const { return k.imag() == 0.0; }
    int trusted_column() const;  // 0 or 1; meaningful when !full()
};

struct JostOptions {
    double rtol = 1e-13;
    double atol = 1e-14;
    long max_steps = 2000000;
};

// Background matrices N_- and N_+ at spectral parameter k.
Mat2 background_left(double A, cplx k);
Mat2 background_right(double A, cplx k);

JostMatrix jost_at_origin(const InitialProfile& profile, cplx k, JostSide side,
                          const JostOptions& opt = {});

// Scattering values on the real line. conj_b_minus = conj(b(-k)) = S_12(k).
struct AxisValues {
    cplx a1, a2, b, conj_b_minus;

    cplx r1() const { return b / a1; }
    cplx r2() const { return conj_b_minus / a2; }
    double identity_residual() const { return std::abs(a1 * a2 - b * conj_b_minus - 1.0); }
};

AxisValues spectral_functions(const JostMatrix& psi1, const JostMatrix& psi2);

// Analytic scattering data of a step-like potential.
class SpectralData {
public:
    virtual ~SpectralData() = default;

    virtual double amplitude() const = 0;
    // a1 on the closed upper half-plane minus 0.
    virtual cplx a1(cplx k) const = 0;
    // a2 on the closed lower half-plane minus 0.
    virtual cplx a2(cplx k) const = 0;
    virtual AxisValues on_axis(double k) const = 0;
    virtual cplx a1_derivative(cplx k) const;
    // d/dk (a1 a2) on the real axis.
    virtual cplx product_derivative(double k) const;
    // eta with Psi1^(1)(0, p) = eta * Psi2^(2)(0, p) at a zero p of a1.
    virtual cplx norming_constant(cplx p) const = 0;
    // Largest |k| at which evaluation is considered reliable.
    virtual double k_limit() const { return 1e7; }

    cplx b(double k) const { return on_axis(k).b; }
};

using SpectralPtr = std::shared_ptr<const SpectralData>;

// Closed forms for the pure step q_{R,A}.
class PureStepSpectrum : public SpectralData {
public:
    explicit PureStepSpectrum(const BackgroundParams& bg);

    double amplitude() const override { return bg_.A; }
    cplx a1(cplx k) const override;
    cplx a2(cplx k) const override;
    AxisValues on_axis(double k) const override;
    cplx a1_derivative(cplx k) const override;
    cplx product_derivative(double k) const override { return a1_derivative(k); }
    cplx norming_constant(cplx p) const override;

    const BackgroundParams& background() const { return bg_; }

    // Closed-form Jost values at the origin.
    Mat2 psi1_origin(cplx k) const;
    Mat2 psi2_origin(cplx k) const;

private:
    BackgroundParams bg_;
};

// Scattering data computed by integrating the Jost equations.
class NumericSpectrum : public SpectralData {
public:
    explicit NumericSpectrum(InitialProfile profile, JostOptions opt = {},
                             double k_limit = 200.0);

    double amplitude() const override { return profile_.background().A; }
    cplx a1(cplx k) const override;
    cplx a2(cplx k) const override;
    AxisValues on_axis(double k) const override;
    cplx norming_constant(cplx p) const override;
    double k_limit() const override { return k_limit_; }

    const InitialProfile& profile() const { return profile_; }

private:
    InitialProfile profile_;
    JostOptions opt_;
    double k_limit_;
};

// Pure-step scattering assembled from exact matrix exponentials of the piecewise-constant
// Lax matrix.
struct TransferOracle {
    Mat2 psi1, psi2, S;
};
TransferOracle transfer_matrix_oracle(const BackgroundParams& bg, cplx k);

// eta from the ratio of the two Jost columns at a zero of a1; throws NotAZero when the
// columns are not parallel to 1e-6.
cplx norming_constant(const InitialProfile& profile, cplx p, const JostOptions& opt = {});

struct Reflection {
    cplx r1, r2;
};
// Throws AssumptionViolation on a real zero of a1 or a2.
Reflection reflection(const SpectralData& s, double k);

}  // namespace nnls
