#pragma once

#include <vector>

#include "nnls/phase.hpp"
#include "nnls/spectrum.hpp"
#include "nnls/types.hpp"

namespace nnls {

// Family tags follow the four sector types of the long-time picture.
enum class Family { PlateauRight, DecayFarLeft, PlateauLeft, DecayInner };

const char* family_name(Family f);
bool is_plateau(Family f);

struct Sector {
    Family family = Family::PlateauRight;
    int m = 0;
    double lo = 0.0, hi = 0.0;  // open interval in xi (may be infinite)
};

// Zeros indexed as p_j, j = 1..n, with Re p_n < ... < Re p_1 < 0 (ZeroSet order).
cplx zero_p(const ZeroSet& zeros, int j);
cplx zero_eta(const ZeroSet& zeros, int j);

struct SectorMap {
    std::vector<Sector> sectors;      // ascending in xi
    std::vector<double> boundaries;   // ascending finite boundaries
    std::vector<double> guard;        // guard half-width per boundary
};

SectorMap sector_map(const ZeroSet& zeros, const OmegaSet& omegas, double guard_fraction = 0.05);

// Throws TransitionZone inside a guard band.
Sector classify(double xi, const ZeroSet& zeros, const OmegaSet& omegas,
                double guard_fraction = 0.05);
Sector classify(double xi, const SectorMap& map);

struct C0Values {
    cplx c0;
    cplx c0_sharp;
};

// xi > 0 is the direction at which delta(0, xi) = delta0 was evaluated.
C0Values c0_values(double xi, int m, const ZeroSet& zeros, double A, cplx delta0);

cplx plateau(const Sector& sector, double xi, const ZeroSet& zeros, const PhaseContext& phase);

struct BetaGamma {
    cplx beta;
    cplx gamma;
};

// Parabolic-cylinder coefficients from the modified reflections and nu_check = nu - i m.
BetaGamma beta_gamma(cplx r1_check, cplx r2_check, cplx nu_check);

// Modulating function alpha_j at xi (sign of xi must match the family of j).
cplx alpha(int j, double xi, int m, const ZeroSet& zeros, const PhaseContext& phase);

struct OscillatoryTerm {
    int alpha_index = 0;
    cplx amplitude;
    double t_power = 0.0;
    double phase_coeff = 0.0;  // coefficient of t in the exponent (times i)
    double logt_coeff = 0.0;   // coefficient of ln t in the exponent (times i)
    cplx value(double t) const;
};

struct RemainderClass {
    int kind = 0;           // 1, 2 or 3
    double exponent = 0.0;  // O(t^exponent), times ln t when with_log
    bool with_log = false;
};

struct AsymptoticPrediction {
    double xi = 0.0;
    double t = 0.0;
    Sector sector;
    ImNuBranch branch = ImNuBranch::Middle;
    cplx nu;  // nu at the direction |xi|
    cplx leading;
    std::vector<OscillatoryTerm> oscillatory;
    RemainderClass remainder;
    cplx value() const;
};

AsymptoticPrediction predict(double xi, double t, const ZeroSet& zeros, const OmegaSet& omegas,
                             const PhaseContext& phase, double guard_fraction = 0.05);

// Remainder class for R_kind with s = Im nu - m at the relevant direction.
RemainderClass remainder_class(int kind, double s);

enum class KinkSide { XPositive, XNegative };

const char* side_name(KinkSide s);

// Profile along x = -4 Re p t + x0 (XPositive) or x = 4 Re p t - x0 (XNegative), p = p_{n-m}.
class KinkProfile {
public:
    KinkProfile(int m, KinkSide side, const ZeroSet& zeros, const PhaseContext& phase);

    cplx f_as(double x0, double t) const;
    cplx operator()(double x0, double t) const;
    // Position x of the ray point for given x0, t.
    double x_of(double x0, double t) const;

    int m() const { return m_; }
    KinkSide side() const { return side_; }
    double xi() const { return xi_; }
    cplx p() const { return p_; }
    cplx c0() const { return c0_; }
    // Limits as x0 -> +inf and x0 -> -inf.
    cplx limit_plus() const;
    cplx limit_minus() const;

private:
    int m_;
    KinkSide side_;
    double xi_;
    cplx p_, eta_, a1dot_, delta_p_, c0_;
};

cplx kink(int m, KinkSide side, double x0, double t, const ZeroSet& zeros, const PhaseContext& phase);

}  // namespace nnls
