#pragma once

#include <array>
#include <complex>
#include <numbers>

namespace nnls {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Row-major 2x2 complex matrix.
struct Mat2 {
    cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

    static Mat2 identity() { return {}; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    Mat2 inverse() const;
    std::array<cplx, 2> column(int j) const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator*(cplx s, const Mat2& a);
double max_abs(const Mat2& a);

// Step background: q -> 0 as x -> -inf, q -> A as x -> +inf; R is the step location.
struct BackgroundParams {
    double A = 1.0;
    double R = 1.0;
};

// Throws ErrorKind::Config when A or R is negative or not finite.
void validate(const BackgroundParams& bg);

// Distance of R*A/pi from the nearest integer.
double bifurcation_distance(const BackgroundParams& bg);

// Throws ErrorKind::BifurcationProximity when R*A/pi is within 1e-6*pi of an integer.
void require_generic(const BackgroundParams& bg);

}  // namespace nnls
