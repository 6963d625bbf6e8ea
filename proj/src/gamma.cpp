#include "nnls/gamma.hpp"

#include <cmath>
#include <sstream>

#include "nnls/errors.hpp"

namespace nnls {

namespace {

constexpr double g = 7.0;
constexpr double coef[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Lanczos sum for Re z >= 1/2.
cplx lanczos(cplx z)
{
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
    const cplx t = z + g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

double gamma_pole_distance(cplx z)
{
    if (z.real() > 0.5) return std::abs(z);
    const double n = std::round(z.real());
    return std::abs(z - std::min(n, 0.0));
}

cplx cgamma(cplx z)
{
    if (gamma_pole_distance(z) == 0.0) {
        std::ostringstream os;
        os << "Gamma has a pole at z = " << z.real();
        throw Error(ErrorKind::Pole, os.str());
    }
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * lanczos(1.0 - z));
    return lanczos(z);
}

cplx rcgamma(cplx z)
{
    if (z.real() < 0.5) return std::sin(pi * z) * lanczos(1.0 - z) / pi;
    return 1.0 / lanczos(z);
}

}  // namespace nnls
