#include "nnls/types.hpp"

#include <cmath>
#include <sstream>

#include "nnls/errors.hpp"

namespace nnls {

Mat2 Mat2::inverse() const
{
    const cplx d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

std::array<cplx, 2> Mat2::column(int j) const
{
    return j == 0 ? std::array<cplx, 2>{a11, a21} : std::array<cplx, 2>{a12, a22};
}

Mat2 operator*(const Mat2& a, const Mat2& b)
{
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

Mat2 operator+(const Mat2& a, const Mat2& b)
{
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

Mat2 operator*(cplx s, const Mat2& a)
{
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

double max_abs(const Mat2& a)
{
    return std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
}

void validate(const BackgroundParams& bg)
{
    if (!std::isfinite(bg.A) || !std::isfinite(bg.R) || bg.A < 0.0 || bg.R < 0.0) {
        std::ostringstream os;
        os << "background parameters must be finite and nonnegative (A=" << bg.A
           << ", R=" << bg.R << ")";
        throw Error(ErrorKind::Config, os.str());
    }
}

double bifurcation_distance(const BackgroundParams& bg)
{
    const double s = bg.R * bg.A / pi;
    return std::abs(s - std::round(s));
}

void require_generic(const BackgroundParams& bg)
{
    validate(bg);
    if (bg.A > 0.0 && bifurcation_distance(bg) < 1e-6 * pi) {
        const double n = std::round(bg.R * bg.A / pi);
        std::ostringstream os;
        os.precision(12);
        os << "R*A/pi = " << bg.R * bg.A / pi << " is at the bifurcation value " << n
           << "; a1 has the real zeros k = +-" << bg.A / 2.0;
        throw Error(ErrorKind::BifurcationProximity, os.str());
    }
}

}  // namespace nnls
