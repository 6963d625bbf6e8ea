#include "nnls/analysis.hpp"

#include "nnls/errors.hpp"
#include "nnls/io.hpp"
#include "nnls/scattering.hpp"

namespace nnls {

InitialProfile initial_profile(const ExperimentConfig& cfg)
{
    if (cfg.pure_step()) {
        const double R = cfg.bg.R;
        return InitialProfile::pure_step(cfg.bg, -R - 2.0, R + 2.0, 0.01);
    }
    return read_profile_csv(cfg.profile_path(), cfg.bg);
}

SpectralPtr make_spectrum(const ExperimentConfig& cfg)
{
    if (cfg.pure_step()) return std::make_shared<PureStepSpectrum>(cfg.bg);
    return std::make_shared<NumericSpectrum>(initial_profile(cfg));
}

Analysis analyse(const ExperimentConfig& cfg, bool need_phase)
{
    Analysis a;
    if (cfg.pure_step() && cfg.bg.A > 0.0) require_generic(cfg.bg);
    a.spec = make_spectrum(cfg);
    WindingProfile::Options wopt;
    wopt.threads = cfg.threads;
    a.winding = std::make_shared<WindingProfile>(a.spec, wopt);
    if (cfg.bg.A > 0.0) {
        if (cfg.pure_step()) {
            a.zeros = pure_step_zeros(cfg.bg);
        } else {
            const auto spec = a.spec;
            a.zeros = upper_left_zeros(find_zeros([spec](cplx k) { return spec->a1(k); }, cfg.zero_box).zeros);
        }
        attach_norming_constants(a.zeros, *a.spec);
    }
    a.omegas = find_omegas(*a.winding, a.zeros.n());
    a.report = verify_assumptions(*a.spec, a.zeros, a.omegas, a.winding.get());
    if (need_phase) {
        if (!a.report.all_ok()) {
            std::string msg = "assumptions fail; asymptotics refused";
            for (const auto& d : a.report.diagnostics) msg += "; " + d;
            throw Error(ErrorKind::AssumptionViolation, msg);
        }
        PhaseOptions popt = cfg.phase;
        popt.threads = cfg.threads;
        a.phase = std::make_shared<PhaseContext>(a.winding, popt);
    }
    return a;
}

}  // namespace nnls
