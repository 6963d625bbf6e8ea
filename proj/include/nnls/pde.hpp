#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nnls/asymptotics.hpp"
#include "nnls/profile.hpp"
#include "nnls/types.hpp"

namespace nnls {

struct SimulationConfig {
    double L = 250.0;             // half-width, must be a multiple of dx
    double dx = 0.05;
    double dt = 0.0;              // 0 selects c_stab * dx^2
    double c_stab = 0.25;
    double t_end = 40.0;
    double sponge_width = 40.0;
    double sponge_strength = 30.0;
    double ramp_width = 0.0;      // tanh ramp for the pure step; 0 selects 4 dx
    std::vector<double> snapshot_times;
    double blowup_factor = 1e3;   // abort when max|q| exceeds this times max(A, 1)
    int check_every = 8;          // steps between blow-up checks
    bool reverse_time = false;    // integrate q_t = -F(q) (exact discrete mirror partner)
    unsigned threads = 1;
};

// Throws Config on an inconsistent configuration.
void validate(const SimulationConfig& cfg);

struct FieldSnapshot {
    double t = 0.0;
    double L = 0.0;
    double dx = 0.0;
    std::vector<cplx> q;              // x_i = -L + i dx
    double sponge_deviation = 0.0;    // max |q - q_bg| over the outer half of the sponge layers so far

    std::size_t size() const { return q.size(); }
    double x(std::size_t i) const { return -L + static_cast<double>(i) * dx; }
};

// Background values far left / far right.
struct FarField {
    cplx left = 0.0;
    cplx right = 0.0;
};

// Method-of-lines solver of i q_t + q_xx - 2 q^2 conj(q(-x)) = 0 on [-L, L].
class Simulator {
public:
    Simulator(const std::function<cplx(double)>& q0, FarField bg, SimulationConfig cfg);

    // Advances to time t (>= current) with fixed steps, the last one shortened.
    // Throws BlowUpError on overflow.
    void advance_to(double t);
    FieldSnapshot snapshot() const;

    double time() const { return t_; }
    double dt() const { return dt_; }
    const SimulationConfig& config() const { return cfg_; }
    const std::vector<cplx>& field() const { return q_; }
    // Largest max|q| seen at a blow-up check.
    double peak() const { return peak_; }

private:
    void rhs(const std::vector<cplx>& q, std::vector<cplx>& out) const;
    void step(double h);
    void check(double t_prev);

    SimulationConfig cfg_;
    FarField bg_;
    std::size_t n_ = 0;
    double dt_ = 0.0;
    double t_ = 0.0;
    double peak_ = 0.0;
    double sponge_dev_ = 0.0;
    long steps_ = 0;
    std::vector<cplx> q_, k1_, k2_, k3_, k4_, tmp_;
    std::vector<double> sponge_;
    std::vector<char> outer_;  // outer half of the sponge layers
    std::vector<cplx> target_;
};

// Initial datum used for simulation: the pure step becomes a tanh ramp of width w.
std::function<cplx(double)> simulation_datum(const InitialProfile& profile, double ramp_width);

// Snapshots at cfg.snapshot_times (t_end appended when missing).
std::vector<FieldSnapshot> simulate(const InitialProfile& profile, const SimulationConfig& cfg);
std::vector<FieldSnapshot> simulate(const std::function<cplx(double)>& q0, FarField bg,
                                    const SimulationConfig& cfg);

// Cubic Lagrange interpolation of q at x; throws OutOfDomain outside |x| <= L - margin.
cplx field_value(const FieldSnapshot& snap, double x, double margin);

// q at x = 4 xi t from the snapshot with time t (to 1e-9); the trusted region excludes
// the sponge layers.
cplx ray_value(const std::vector<FieldSnapshot>& snaps, double xi, double t, double sponge_width);

// Conserved functional sum_i q_i conj(q_{-i}) dx.
cplx mirror_functional(const FieldSnapshot& snap);

struct RayRecord {
    double xi = 0.0, t = 0.0;
    Family family = Family::PlateauRight;
    cplx q_num, leading, predicted;
    double abs_err = 0.0;   // |q_num - leading|
    double rel_err = 0.0;   // abs_err / max(|leading|, 1e-300) for plateaus, abs_err otherwise
};

struct SlopeRecord {
    double xi = 0.0;
    Family family = Family::DecayInner;
    double fitted = 0.0;
    double predicted = 0.0;
    double tolerance = 0.15;
    bool pass = false;
};

struct EnvelopeRecord {
    double xi = 0.0;
    Family family = Family::PlateauRight;
    bool shrinking = false;
};

struct ErrorReport {
    std::vector<RayRecord> rays;
    std::vector<SlopeRecord> slopes;
    std::vector<EnvelopeRecord> envelopes;
    bool all_pass() const;
    std::string to_json() const;
};

// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Local maxima of a sequence (endpoints included) are strictly decreasing.
bool envelope_shrinks(const std::vector<double>& err);

ErrorReport compare(const std::vector<AsymptoticPrediction>& predictions,
                    const std::vector<FieldSnapshot>& snaps, double sponge_width,
                    double slope_tolerance = 0.15);

struct KinkComparison {
    double t = 0.0;
    double sup_abs = 0.0;
    double sup_ref = 0.0;
    double rel = 0.0;  // sup_abs / sup_ref
    std::vector<double> x0;
    std::vector<cplx> numeric, predicted;
};

KinkComparison compare_kink(const KinkProfile& kink, const FieldSnapshot& snap,
                            const std::vector<double>& x0, double sponge_width);

}  // namespace nnls
