#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "olla/bounds.hpp"

namespace olla {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One policy row of an experiment. `algo` names the implementation
// (pbs, mab, median_elimination, thompson, ucb, clustering, no_olla,
// fixed); `name` labels the rows it produces.
struct PolicySpec {
    std::string name;
    std::string algo;
    double target_bler = -1.0;  // < 0: use 1 - exploration.beta
    int nack_run_threshold = 5;
    int ack_run_threshold = 50;
    int offset_range = 8;  // clustering clamp range
    int fixed_offset = 0;

    bool is_target_search() const { return algo == "pbs" || algo == "mab"; }
};

struct UeDistribution {
    double mean_sinr_min = 0.0;
    double mean_sinr_max = 30.0;
    int cqi_bias_min = 1;
    int cqi_bias_max = 3;
    double ar_coefficient = 0.99;
    double sinr_std = 2.0;
};

struct ExperimentConfig {
    int num_ues = 45;
    long duration_subframes = 5000;
    std::vector<PolicySpec> policies;
    ExplorationParams exploration;
    std::string mcs_table_path;  // empty: built-in table
    UeDistribution ue;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";

    // Exploration parameters a given policy row runs with (its target BLER
    // substituted into beta).
    ExplorationParams exploration_for(const PolicySpec& spec) const;

    void validate() const;  // throws ConfigError
};

struct SynthConfig {
    long trials = 500;
    std::string policy = "pbs";
    std::vector<double> arm_betas;
    long horizon = 50000;  // for policies whose exploration never ends
    ExplorationParams exploration;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";

    void validate() const;
};

// Key/value override as passed on the command line (--set key=value).
struct Override {
    std::string key;
    std::string value;
};

// Both loaders read a line-oriented `key = value` file with '#' comments
// and dotted keys; unknown keys are rejected. Overrides are applied on top
// in order. Relative mcs_table paths resolve against the config file's
// directory.
ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<Override>& overrides = {});
SynthConfig load_synth_config(const std::string& path,
                              const std::vector<Override>& overrides = {});

Override parse_override(const std::string& key_equals_value);

}  // namespace olla
