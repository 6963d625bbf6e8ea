#pragma once

#include <memory>

#include "nnls/config.hpp"
#include "nnls/phase.hpp"
#include "nnls/profile.hpp"
#include "nnls/spectrum.hpp"

namespace nnls {

// Spectral pipeline for one configuration: spectrum, zeros with norming constants,
// thresholds, assumption report and, on request, the phase context.
struct Analysis {
    SpectralPtr spec;
    std::shared_ptr<const WindingProfile> winding;
    ZeroSet zeros;
    OmegaSet omegas;
    AssumptionReport report;
    std::shared_ptr<PhaseContext> phase;
};

InitialProfile initial_profile(const ExperimentConfig& cfg);
SpectralPtr make_spectrum(const ExperimentConfig& cfg);

// Throws BifurcationProximity near R = n pi / A for the pure step, and AssumptionViolation
// when need_phase is set and the report is not clean.
Analysis analyse(const ExperimentConfig& cfg, bool need_phase);

}  // namespace nnls
