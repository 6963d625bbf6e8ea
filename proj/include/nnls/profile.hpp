#pragma once

#include <memory>
#include <vector>

#include "nnls/types.hpp"

namespace boost::math::interpolators {
template <class Real>
class cardinal_cubic_b_spline;
}

namespace nnls {

// Initial datum q0 on a uniform grid, equal to 0 left of x_min and to A right of x_max.
// The pure step q_{R,A} is represented analytically; sampled data are interpolated by
// cubic B-splines with zero end slopes.
class InitialProfile {
public:
    static InitialProfile pure_step(const BackgroundParams& bg, double x_min, double x_max,
                                    double dx);
    static InitialProfile from_samples(const BackgroundParams& bg, double x_min, double dx,
                                       std::vector<cplx> samples, double tol = 1e-8);

    cplx operator()(double x) const;

    const BackgroundParams& background() const { return bg_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }
    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<double> grid() const;
    bool is_pure_step() const { return analytic_; }

    // Points where q(x) or conj(q(-x)) may be non-smooth, sorted.
    std::vector<double> breakpoints() const;

    // Half-width beyond which the potential equals the background on both sides.
    double support_radius() const;

private:
    InitialProfile() = default;
    void build_splines();

    BackgroundParams bg_;
    double x_min_ = 0.0;
    double x_max_ = 0.0;
    double dx_ = 0.0;
    std::vector<cplx> samples_;
    bool analytic_ = false;
    std::shared_ptr<const boost::math::interpolators::cardinal_cubic_b_spline<double>> re_;
    std::shared_ptr<const boost::math::interpolators::cardinal_cubic_b_spline<double>> im_;
};

}  // namespace nnls
