#include "nnls/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "nnls/errors.hpp"

namespace nnls {

using boost::math::interpolators::cardinal_cubic_b_spline;

InitialProfile InitialProfile::pure_step(const BackgroundParams& bg, double x_min, double x_max,
                                         double dx)
{
    validate(bg);
    if (!(x_min < -bg.R && bg.R < x_max) || !(dx > 0.0)) {
        std::ostringstream os;
        os << "pure step needs x_min < -R < R < x_max and dx > 0 (x_min=" << x_min
           << ", x_max=" << x_max << ", R=" << bg.R << ", dx=" << dx << ")";
        throw Error(ErrorKind::Config, os.str());
    }
    InitialProfile p;
    p.bg_ = bg;
    p.x_min_ = x_min;
    p.dx_ = dx;
    const auto n = static_cast<std::size_t>(std::llround((x_max - x_min) / dx)) + 1;
    p.x_max_ = x_min + static_cast<double>(n - 1) * dx;
    p.analytic_ = true;
    p.samples_.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        p.samples_[j] = p(x_min + static_cast<double>(j) * dx);
    return p;
}

InitialProfile InitialProfile::from_samples(const BackgroundParams& bg, double x_min, double dx,
                                            std::vector<cplx> samples, double tol)
{
    validate(bg);
    if (samples.size() < 4 || !(dx > 0.0))
        throw Error(ErrorKind::Config, "profile needs at least 4 samples and dx > 0");
    for (const auto& v : samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::Config, "profile contains non-finite samples");
    const double scale = std::max(bg.A, 1.0);
    if (std::abs(samples.front()) > tol * scale || std::abs(samples.back() - bg.A) > tol * scale) {
        std::ostringstream os;
        os << "profile must equal 0 at x_min and A at x_max (q(x_min)=" << samples.front()
           << ", q(x_max)=" << samples.back() << ", A=" << bg.A << ")";
        throw Error(ErrorKind::Config, os.str());
    }
    InitialProfile p;
    p.bg_ = bg;
    p.x_min_ = x_min;
    p.dx_ = dx;
    p.x_max_ = x_min + static_cast<double>(samples.size() - 1) * dx;
    p.samples_ = std::move(samples);
    p.build_splines();
    return p;
}

void InitialProfile::build_splines()
{
    std::vector<double> re(samples_.size()), im(samples_.size());
    for (std::size_t j = 0; j < samples_.size(); ++j) {
        re[j] = samples_[j].real();
        im[j] = samples_[j].imag();
    }
    re_ = std::make_shared<cardinal_cubic_b_spline<double>>(re.data(), re.size(), x_min_, dx_,
                                                            0.0, 0.0);
    im_ = std::make_shared<cardinal_cubic_b_spline<double>>(im.data(), im.size(), x_min_, dx_,
                                                            0.0, 0.0);
}

cplx InitialProfile::operator()(double x) const
{
    if (analytic_) {
        if (x > bg_.R) return bg_.A;
        if (x < bg_.R) return 0.0;
        return 0.5 * bg_.A;
    }
    if (x <= x_min_) return 0.0;
    if (x >= x_max_) return bg_.A;
    return {(*re_)(x), (*im_)(x)};
}

std::vector<double> InitialProfile::grid() const
{
    std::vector<double> g(samples_.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = x_min_ + static_cast<double>(j) * dx_;
    return g;
}

std::vector<double> InitialProfile::breakpoints() const
{
    std::vector<double> b;
    if (analytic_) {
        b = {-bg_.R, bg_.R};
    } else {
        b = {x_min_, x_max_, -x_min_, -x_max_};
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

double InitialProfile::support_radius() const
{
    if (analytic_) return bg_.R;
    return std::max(std::abs(x_min_), std::abs(x_max_));
}

}  // namespace nnls
