#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "olla/bounds.hpp"

namespace olla {

// ACK/NACK tally for one arm (or one phase).
struct ArmStats {
    long acks = 0;
    long nacks = 0;

    long pulls() const { return acks + nacks; }
    double beta_hat() const { return static_cast<double>(acks) / static_cast<double>(pulls()); }
    void add(bool ack) { ack ? ++acks : ++nacks; }
    void reset() { acks = nacks = 0; }
};

enum class Phase { exploring, switching, fixed };

const char* to_string(Phase phase);

// One step of the decision trace. Elimination markers report arms
// discarded by the preceding observation: eliminated_below = v means every
// offset < v was dropped, eliminated_above = v means every offset > v was.
struct PolicyDecision {
    int offset = 0;
    Phase phase = Phase::fixed;
    std::optional<int> eliminated_below;
    std::optional<int> eliminated_above;
};

// Online offset-selection policy. Per transmission the caller asks for a
// decision, transmits at the decided offset, and feeds back the ACK/NACK.
class OllaPolicy {
public:
    virtual ~OllaPolicy() = default;

    virtual PolicyDecision decide() = 0;
    virtual void observe(bool ack) = 0;
    virtual Phase phase() const = 0;

    // Feedback consumed while still exploring.
    virtual long exploration_samples() const = 0;

    // The arm the policy has settled on: the fixed arm, or the anchor arm
    // of a switching pair. While exploring, the arm currently under test.
    virtual int selected_arm() const = 0;

    virtual std::string name() const = 0;
};

// State of the two-arm switching controller: alternate between two
// adjacent offsets so the cumulative success rate tracks the target.
struct SwitchingState {
    int lower = 0;
    int higher = 0;
    // true when the pair was entered because the measured success rate sat
    // below the target; decides the first play before any feedback exists
    bool entered_below = false;
    ArmStats cum;  // switching-phase feedback only
};

// Offset to play next: the lower (more conservative) arm while the
// cumulative estimate is short of the target, the higher one otherwise.
// Ties at exactly the target play the higher arm.
int switching_offset(const SwitchingState& state, double target_beta);

// Consume one observation and return the offset for the next play.
int switching_step(SwitchingState& state, double target_beta, bool ack);

// Halving search over the ordered arms: sample the median of the surviving
// interval required_samples() times, discard the half the estimate rules
// out, stop when one arm is left.
std::unique_ptr<OllaPolicy> make_pbs_policy(const ExplorationParams& params);

// The deployable algorithm: the halving search plus confidence-interval
// early elimination (from 20 samples per arm) and a terminal two-arm
// switching phase that pins the success rate to the target.
std::unique_ptr<OllaPolicy> make_mab_policy(const ExplorationParams& params);

// Round-based median elimination baseline; parameterized like the others
// but ignorant of the arm ordering. Kept for sample-count comparisons.
std::unique_ptr<OllaPolicy> make_median_elimination_policy(const ExplorationParams& params);

// Exact number of samples the median-elimination schedule consumes before
// fixing on one arm (the count does not depend on the observations).
long median_elimination_total_samples(const ExplorationParams& params);

// Beta-posterior sampling over all arms (uniform prior), plays the argmax
// draw. Converges to the most conservative offset.
std::unique_ptr<OllaPolicy> make_thompson_policy(int big_l, std::uint64_t seed);

// Classic index policy: one sweep over all arms, then argmax of
// mean + sqrt(2 ln n / pulls). Ties go to the lowest offset.
std::unique_ptr<OllaPolicy> make_ucb_policy(int big_l);

// Run-length heuristic: a run of consecutive NACKs steps the offset down,
// a run of consecutive ACKs steps it up, clamped to [-range, range].
std::unique_ptr<OllaPolicy> make_clustering_policy(int nack_run_threshold,
                                                   int ack_run_threshold,
                                                   int offset_range);

// Offset 0 forever.
std::unique_ptr<OllaPolicy> make_no_olla_policy();

// Pinned offset, used to estimate per-arm ground truth.
std::unique_ptr<OllaPolicy> make_fixed_offset_policy(int offset);

}  // namespace olla
