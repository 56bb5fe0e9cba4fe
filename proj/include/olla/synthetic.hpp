#pragma once

#include <cstdint>
#include <vector>

#include "olla/policies.hpp"

namespace olla {

// Stationary Bernoulli bandit with one arm per offset, success
// probabilities nonincreasing in the offset.
struct SyntheticBandit {
    std::vector<double> success;  // indexed -big_l .. +big_l, size 2*big_l+1
    int big_l = 0;

    static SyntheticBandit from_success(std::vector<double> success);

    double success_at(int offset) const { return success[static_cast<std::size_t>(offset + big_l)]; }
};

struct ExplorationTrial {
    int selected_arm = 0;
    double selected_true_beta = 0.0;
    bool eps_optimal = false;
    long exploration_samples = 0;
    bool completed = false;  // exploration finished within the step cap
};

// Drive a policy against the bandit until its exploration terminates (or
// max_steps elapse) and score the arm it settled on against the
// [beta - eps, beta + eps] band.
ExplorationTrial run_exploration_trial(OllaPolicy& policy, const SyntheticBandit& bandit,
                                       const ExplorationParams& params, std::uint64_t seed,
                                       long max_steps);

// Play a never-terminating policy for `horizon` steps; returns the arm
// index (offset) chosen at each step.
std::vector<int> run_arm_sequence(OllaPolicy& policy, const SyntheticBandit& bandit,
                                  std::uint64_t seed, long horizon);

}  // namespace olla
