#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nnls/pde.hpp"
#include "nnls/phase.hpp"
#include "nnls/spectrum.hpp"
#include "nnls/types.hpp"

namespace nnls {

// a:b:n, n equally spaced values from a to b inclusive.
struct GridSpec {
    double a = 0.0, b = 0.0;
    int n = 1;
    std::vector<double> values() const;
};

GridSpec parse_grid(const std::string& text);
std::vector<double> parse_list(const std::string& text);

struct KinkSpec {
    GridSpec x0{-5.0, 5.0, 101};
    std::vector<double> t;  // empty: use t_list
};

struct ExperimentConfig {
    BackgroundParams bg{1.0, 2.0};
    std::string profile = "pure-step";  // or a CSV path with columns x,re,im
    GridSpec k_grid{0.05, 20.0, 200};   // magnitudes; both signs are evaluated
    bool k_log = true;
    GridSpec xi_grid{-1.0, 1.0, 21};
    std::vector<double> t_list{10.0, 20.0, 40.0};
    SimulationConfig sim;
    PhaseOptions phase;
    double guard_fraction = 0.05;
    double slope_tolerance = 0.15;
    Box zero_box{-5.0, -1e-3, 1e-4, 5.0};
    KinkSpec kink;
    unsigned threads = 1;
    std::filesystem::path out = "out";
    std::filesystem::path base_dir = ".";

    // CSV profile path resolved against the config file directory.
    std::filesystem::path profile_path() const;
    bool pure_step() const { return profile == "pure-step"; }
};

// Applies one key = value pair; throws Config on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Lines of key = value; '#' starts a comment.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

// Checks referenced files and parameter ranges.
void validate(const ExperimentConfig& cfg);

// Known keys with their default values, one "key = value" per line.
std::string default_config_text();

}  // namespace nnls
