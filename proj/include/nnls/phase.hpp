#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "nnls/spectrum.hpp"
#include "nnls/types.hpp"

namespace nnls {

struct PhaseValues {
    double xi = 0.0;
    cplx nu;
    cplx chi_at_minus_xi;
    cplx delta0;
    int m = 0;  // nearest integer to Im nu
};

struct PhasePoint {
    cplx k;
    double xi = 0.0;
    cplx theta() const { return 4.0 * k * xi + 2.0 * k * k; }
};

enum class ImNuBranch { Low, Middle, High };

const char* branch_name(ImNuBranch b);

// Classifies Im nu - m into (-1/2, -1/6], (-1/6, 1/6), [1/6, 1/2).
ImNuBranch im_nu_branch(cplx nu, int m);

struct PhaseOptions {
    // Accept a panel when |K21 - G10| <= rel_tol * int|f| + abs_density * length.
    double rel_tol = 1e-10;
    double abs_density = 1e-16;
    int max_depth = 60;
    // Width of the subtraction window around the anchor point.
    double window = 1.0;
    // Panel length in the dense part of the precomputed far-field rule.
    double dense_panel = 0.25;
    unsigned threads = 1;
};

// Scalar RH function delta(k, xi) built on the continuous ln(1 - r1 r2).
class PhaseContext {
public:
    explicit PhaseContext(std::shared_ptr<const WindingProfile> winding, PhaseOptions opt = {});

    // nu(-xi) = -ln(1 - r1 r2)(-xi) / (2 pi).
    cplx nu(double xi) const;
    // Integration-by-parts route; the endpoint k = -xi is allowed.
    cplx chi(cplx k, double xi) const;
    // Cauchy-integral route: ln delta(k, xi).
    cplx log_delta(cplx k, double xi) const;
    cplx delta(cplx k, double xi) const;

    // Cached per xi.
    PhaseValues values(double xi) const;
    cplx delta_cached(cplx k, double xi) const;

    // Bound on |ln delta| contributed by zeta < -k_max (not included).
    double tail_error() const;
    std::size_t far_nodes() const;
    const WindingProfile& winding() const { return *w_; }
    const SpectralData& spectrum() const { return *w_->spectrum(); }
    bool trivial() const { return trivial_; }

private:
    struct FarRule {
        std::vector<double> panel_hi;       // ascending upper panel ends
        std::vector<std::size_t> offset;    // first node of each panel, size panels + 1
        std::vector<double> zeta;
        std::vector<cplx> wl;   // weight * L
        std::vector<cplx> wdl;  // weight * L'
        double panel_lo_ = -1.0;
    };

    void check_xi(double xi) const;
    void check_k(cplx k, double b) const;
    const FarRule& far() const;
    std::size_t far_panels_below(double x) const;

    std::shared_ptr<const WindingProfile> w_;
    PhaseOptions opt_;
    bool trivial_ = false;

    mutable std::once_flag far_once_;
    mutable FarRule far_;

    mutable std::mutex cache_mutex_;
    mutable std::map<double, PhaseValues> values_cache_;
    mutable std::map<std::tuple<double, double, double>, cplx> delta_cache_;
};

}  // namespace nnls
