#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "olla/mcs_table.hpp"
#include "olla/policies.hpp"
#include "olla/rng.hpp"

namespace olla {

// Per-user ground truth: mean SINR, AR(1) channel dynamics, reporting bias
// and the BLER the user is supposed to run at. sinr_std is the stationary
// standard deviation of the SINR process.
struct UeProfile {
    int ue_id = 0;
    double mean_sinr_db = 10.0;
    double ar_coefficient = 0.99;  // in [0, 1)
    double sinr_std_db = 2.0;
    int cqi_bias = 0;  // in [-5, 5], CQI steps added to every report
    double target_bler = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ChannelState {
    double sinr_db = 0.0;
    long time_index = 0;
};

// Draw the initial SINR from the stationary distribution.
ChannelState initial_channel_state(const UeProfile& profile, Rng& rng);

// sinr' = mean + a*(sinr - mean) + w,  w ~ Normal(0, sigma^2 * (1 - a^2)).
ChannelState step_channel(const ChannelState& state, const UeProfile& profile, Rng& rng);

// CQI-position-c anchor in the MCS table: floor(c * 27 / 15).
int cqi_anchor_mcs(int cqi);

// BLER level a reported CQI is supposed to sustain at its anchor MCS.
inline constexpr double kCqiTargetBler = 0.10;

// Highest CQI whose anchor MCS meets the 10% BLER criterion at this SINR,
// shifted by the profile's reporting bias and clamped to [0, 15].
int report_cqi(double sinr_db, const UeProfile& profile, const McsTable& table);

// m = clamp(f(cqi) + offset, 0, 27).
int map_cqi_to_mcs(int cqi, int offset, const McsTable& table);

// One transmission outcome at the true instantaneous SINR.
bool transmit(int mcs, double true_sinr_db, const McsTable& table, Rng& rng);

struct TransmissionRecord {
    long time_index = 0;
    int ue_id = 0;
    int cqi = 0;
    int offset = 0;
    int mcs = 0;
    bool ack = false;
    double bits = 0.0;
    Phase phase = Phase::fixed;
};

// CQI reports refresh every 5 subframes; transmissions happen every
// subframe against the latest report.
inline constexpr long kCqiPeriodSubframes = 5;

// One UE driven by one policy: advances the channel, refreshes the CQI on
// schedule, asks the policy for an offset, transmits, and feeds back the
// outcome.
class UeSession {
public:
    UeSession(UeProfile profile, const McsTable& table, OllaPolicy& policy);

    TransmissionRecord step();

    const UeProfile& profile() const { return profile_; }

private:
    UeProfile profile_;
    const McsTable& table_;
    OllaPolicy& policy_;
    Rng rng_;
    ChannelState channel_;
    int cqi_ = 0;
    long next_time_ = 0;
};

}  // namespace olla
