#include "olla/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "olla/rng.hpp"

namespace olla {

SyntheticBandit SyntheticBandit::from_success(std::vector<double> success) {
    if (success.empty() || success.size() % 2 == 0)
        throw std::invalid_argument("synthetic bandit needs an odd number of arms (2L+1)");
    for (std::size_t i = 0; i < success.size(); ++i) {
        if (success[i] < 0.0 || success[i] > 1.0)
            throw std::invalid_argument("synthetic bandit: arm success outside [0, 1]");
        if (i > 0 && success[i] > success[i - 1])
            throw std::invalid_argument(
                "synthetic bandit: arm success must be nonincreasing in the offset");
    }
    SyntheticBandit b;
    b.big_l = static_cast<int>(success.size() / 2);
    b.success = std::move(success);
    return b;
}

ExplorationTrial run_exploration_trial(OllaPolicy& policy, const SyntheticBandit& bandit,
                                       const ExplorationParams& params, std::uint64_t seed,
                                       long max_steps) {
    Rng rng(seed);
    long steps = 0;
    while (policy.phase() == Phase::exploring && steps < max_steps) {
        PolicyDecision d = policy.decide();
        policy.observe(rng.bernoulli(bandit.success_at(d.offset)));
        ++steps;
    }
    ExplorationTrial trial;
    trial.completed = policy.phase() != Phase::exploring;
    trial.selected_arm = policy.selected_arm();
    trial.selected_true_beta = bandit.success_at(trial.selected_arm);
    // inclusive band; the slack keeps arms sitting exactly on an edge inside
    trial.eps_optimal =
        std::abs(trial.selected_true_beta - params.beta) <= params.epsilon + 1e-12;
    trial.exploration_samples = policy.exploration_samples();
    return trial;
}

std::vector<int> run_arm_sequence(OllaPolicy& policy, const SyntheticBandit& bandit,
                                  std::uint64_t seed, long horizon) {
    Rng rng(seed);
    std::vector<int> arms;
    arms.reserve(static_cast<std::size_t>(horizon));
    for (long t = 0; t < horizon; ++t) {
        PolicyDecision d = policy.decide();
        arms.push_back(d.offset);
        policy.observe(rng.bernoulli(bandit.success_at(d.offset)));
    }
    return arms;
}

}  // namespace olla
