#pragma once

#include <iosfwd>
#include <string>

#include "nnls/config.hpp"

namespace nnls::cli {

struct Flags {
    bool kink = false;
};

// Runs one subcommand and returns the process exit code. Writes files below cfg.out and a
// short summary to `log`.
int run(const std::string& command, const ExperimentConfig& cfg, const Flags& flags, std::ostream& log);

int scatter(const ExperimentConfig& cfg, std::ostream& log);
int zeros(const ExperimentConfig& cfg, std::ostream& log);
int predict(const ExperimentConfig& cfg, const Flags& flags, std::ostream& log);
int simulate(const ExperimentConfig& cfg, std::ostream& log);
int compare(const ExperimentConfig& cfg, const Flags& flags, std::ostream& log);
int report(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace nnls::cli
