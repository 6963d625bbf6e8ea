#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nnls/scattering.hpp"

namespace nnls {

// Zeros of a1 in the open upper-left quadrant: Re p_n < ... < Re p_1 < 0, Im p_j > 0.
// The mirrors -conj(p_j) are implied.
struct ZeroSet {
    std::vector<cplx> p;
    std::vector<cplx> eta;  // empty until attach_norming_constants
    int n() const { return static_cast<int>(p.size()); }
};

// omega_1 < ... < omega_{n-1}; omega_0 = 0 and omega_n = +inf are implied.
struct OmegaSet {
    std::vector<double> omegas;
};

struct AssumptionReport {
    bool zeros_ok = false;
    bool a2_nonvanishing = false;
    bool interleaving_ok = false;
    bool winding_bands_ok = false;
    std::vector<std::string> diagnostics;

    bool all_ok() const { return zeros_ok && a2_nonvanishing && interleaving_ok && winding_bands_ok; }
};

struct Box {
    double re_min, re_max, im_min, im_max;
};

using Analytic = std::function<cplx(cplx)>;

struct ZeroSearchOptions {
    int edge_samples = 256;
    double newton_diameter = 1e-2;
    double tol = 1e-10;
    int max_depth = 40;
};

struct ZeroSearch {
    std::vector<cplx> zeros;  // sorted by Re, then Im
    int count = 0;            // argument-principle count over the box
};

// Argument-principle count over the box boundary; throws BoxTouchesZero when the
// boundary phase change is not within 0.01 of a multiple of 2 pi.
int winding_number(const Analytic& f, const Box& box, int edge_samples = 256);

// Recursive argument-principle subdivision followed by Newton refinement.
ZeroSearch find_zeros(const Analytic& f, const Box& box, const ZeroSearchOptions& opt = {});

// Keeps the zeros with Re p < 0 ordered by decreasing Re p.
ZeroSet upper_left_zeros(const std::vector<cplx>& zeros);

// Pure-step zeros from the transcendental real-part equation, then Newton on a1.
// Throws BifurcationProximity near R = n pi / A.
ZeroSet pure_step_zeros(const BackgroundParams& bg);

// Number of zero pairs for the pure step away from bifurcations.
int pure_step_zero_count(const BackgroundParams& bg);

void attach_norming_constants(ZeroSet& zeros, const SpectralData& spec);

// Continuous argument of a1 a2 on (-K_max, -xi_floor], starting from the principal
// value at -K_max where |r1 r2| is below the cutoff.
class WindingProfile {
public:
    struct Options {
        double xi_floor = 1e-3;
        double cutoff = 1e-10;
        double dense_limit = 10.0;
        double dense_step = 0.01;
        double geometric_ratio = 1.005;
        double max_jump = pi / 4.0;
        unsigned threads = 1;
    };

    explicit WindingProfile(SpectralPtr spec);
    WindingProfile(SpectralPtr spec, Options opt);

    // Total continuous variation of arg(a1 a2) over (-inf, -xi).
    double phi(double xi) const;
    // Continuous arg(a1 a2) at zeta <= -xi_floor.
    double arg_at(double zeta) const;
    // ln(1 - r1 r2) = -ln(a1 a2) with the continuous branch.
    cplx log_jump(double zeta) const;
    // d/dzeta ln(1 - r1 r2).
    cplx log_jump_derivative(double zeta) const;

    double k_max() const { return k_max_; }
    double xi_floor() const { return opt_.xi_floor; }
    // Bound on |ln(1 - r1 r2)| at the cutoff.
    double tail_bound() const { return tail_bound_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& args() const { return args_; }
    const SpectralPtr& spectrum() const { return spec_; }

private:
    cplx product(double zeta) const;
    double branch_near(double zeta, cplx value) const;

    SpectralPtr spec_;
    Options opt_;
    double k_max_ = 0.0;
    double tail_bound_ = 0.0;
    std::vector<double> nodes_;  // ascending, from -k_max to -xi_floor
    std::vector<double> args_;
};

// omega_{n-m} solves phi(omega) = (2m - 1) pi, m = 1..n-1.
OmegaSet find_omegas(const WindingProfile& winding, int n);

// Real k in [-K, K] (outside the guard band) where |a1| has a local minimum below threshold.
std::vector<double> spectral_singularities(const SpectralData& spec, double K,
                                          double threshold = 1e-6);

AssumptionReport verify_assumptions(const SpectralData& spec, const ZeroSet& zeros,
                                    const OmegaSet& omegas,
                                    const WindingProfile* winding = nullptr);

}  // namespace nnls
