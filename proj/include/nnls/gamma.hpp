#pragma once

#include "nnls/types.hpp"

namespace nnls {

// Complex Gamma via Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
// Throws ErrorKind::Pole at nonpositive integers.
cplx cgamma(cplx z);

// 1/Gamma(z), entire; exactly 0 at the poles of Gamma.
cplx rcgamma(cplx z);

// Distance from z to the nearest pole of Gamma (nonpositive integers).
double gamma_pole_distance(cplx z);

}  // namespace nnls
