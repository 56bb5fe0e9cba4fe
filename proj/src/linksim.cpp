#include "olla/linksim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace olla {

void UeProfile::validate() const {
    if (ar_coefficient < 0.0 || ar_coefficient >= 1.0)
        throw std::invalid_argument("ue profile: ar_coefficient must lie in [0, 1)");
    if (sinr_std_db < 0.0)
        throw std::invalid_argument("ue profile: sinr_std must be >= 0");
    if (cqi_bias < -5 || cqi_bias > 5)
        throw std::invalid_argument("ue profile: cqi_bias must lie in [-5, 5]");
    if (target_bler <= 0.0 || target_bler >= 0.5)
        throw std::invalid_argument("ue profile: target_bler must lie in (0, 0.5)");
}

ChannelState initial_channel_state(const UeProfile& profile, Rng& rng) {
    ChannelState s;
    s.sinr_db = profile.mean_sinr_db + profile.sinr_std_db * rng.gaussian();
    s.time_index = 0;
    return s;
}

ChannelState step_channel(const ChannelState& state, const UeProfile& profile, Rng& rng) {
    double a = profile.ar_coefficient;
    double innovation_std = profile.sinr_std_db * std::sqrt(1.0 - a * a);
    ChannelState next;
    next.sinr_db = profile.mean_sinr_db + a * (state.sinr_db - profile.mean_sinr_db) +
                   innovation_std * rng.gaussian();
    next.time_index = state.time_index + 1;
    return next;
}

int cqi_anchor_mcs(int cqi) {
    return std::min(McsTable::kNumMcs - 1, cqi * 27 / 15);
}

int report_cqi(double sinr_db, const UeProfile& profile, const McsTable& table) {
    int raw = 0;
    for (int c = McsTable::kNumCqi - 1; c >= 1; --c) {
        if (table.bler(cqi_anchor_mcs(c), sinr_db) <= kCqiTargetBler) {
            raw = c;
            break;
        }
    }
    return std::clamp(raw + profile.cqi_bias, 0, McsTable::kNumCqi - 1);
}

int map_cqi_to_mcs(int cqi, int offset, const McsTable& table) {
    return std::clamp(cqi_anchor_mcs(cqi) + offset, 0, table.max_mcs());
}

bool transmit(int mcs, double true_sinr_db, const McsTable& table, Rng& rng) {
    return rng.bernoulli(1.0 - table.bler(mcs, true_sinr_db));
}

UeSession::UeSession(UeProfile profile, const McsTable& table, OllaPolicy& policy)
    : profile_(std::move(profile)), table_(table), policy_(policy), rng_(profile_.seed) {
    profile_.validate();
    channel_ = initial_channel_state(profile_, rng_);
}

TransmissionRecord UeSession::step() {
    if (next_time_ > 0) channel_ = step_channel(channel_, profile_, rng_);
    if (next_time_ % kCqiPeriodSubframes == 0)
        cqi_ = report_cqi(channel_.sinr_db, profile_, table_);

    PolicyDecision decision = policy_.decide();
    int mcs = map_cqi_to_mcs(cqi_, decision.offset, table_);
    bool ack = transmit(mcs, channel_.sinr_db, table_, rng_);
    policy_.observe(ack);

    TransmissionRecord rec;
    rec.time_index = next_time_;
    rec.ue_id = profile_.ue_id;
    rec.cqi = cqi_;
    rec.offset = decision.offset;
    rec.mcs = mcs;
    rec.ack = ack;
    rec.bits = ack ? table_.rate(mcs) : 0.0;
    rec.phase = decision.phase;
    ++next_time_;
    return rec;
}

}  // namespace olla
