#include "olla/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

namespace olla {

namespace {

// Lower-middle element of the inclusive offset interval [low, high].
int median_arm(int low, int high) {
    int sum = low + high;
    return sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
}

int clamp_arm(int arm, int big_l) { return std::clamp(arm, -big_l, big_l); }

enum class Move { down, up };

// Samples per arm before confidence intervals are consulted.
constexpr long kWaldGate = 20;

class SearchPolicyBase : public OllaPolicy {
public:
    explicit SearchPolicyBase(const ExplorationParams& params)
        : params_(params),
          n_required_(required_samples(params)),
          l_low_(-params.big_l),
          l_high_(params.big_l) {
        if (l_low_ >= l_high_) {
            fix(0);
        } else {
            l_index_ = median_arm(l_low_, l_high_);
        }
    }

    PolicyDecision decide() override {
        PolicyDecision d;
        d.offset = current_offset();
        d.phase = phase_;
        d.eliminated_below = std::exchange(pending_below_, std::nullopt);
        d.eliminated_above = std::exchange(pending_above_, std::nullopt);
        return d;
    }

    Phase phase() const override { return phase_; }
    long exploration_samples() const override { return exploration_samples_; }

    int selected_arm() const override {
        switch (phase_) {
            case Phase::exploring: return l_index_;
            case Phase::switching: return anchor_;
            case Phase::fixed: return fixed_arm_;
        }
        return fixed_arm_;
    }

protected:
    virtual int current_offset() const {
        return phase_ == Phase::exploring ? l_index_ : fixed_arm_;
    }

    void eliminate_up() {  // measured too conservative, drop this arm and lower ones
        l_low_ = l_index_ + 1;
        pending_below_ = l_low_;
        advance(Move::up);
    }

    void eliminate_down() {  // measured too lossy, drop this arm and higher ones
        l_high_ = l_index_ - 1;
        pending_above_ = l_high_;
        advance(Move::down);
    }

    void advance(Move move) {
        if (l_low_ < l_high_) {
            l_index_ = median_arm(l_low_, l_high_);
            current_.reset();
        } else if (l_low_ == l_high_) {
            fix(l_low_);
        } else {
            on_interval_crossed(move);
        }
    }

    // The surviving interval became empty. Plain search pins the arm next
    // to the last elimination; the full algorithm overrides this to start
    // switching against its inward neighbour.
    virtual void on_interval_crossed(Move move) {
        fix(clamp_arm(move == Move::up ? l_low_ : l_high_, params_.big_l));
    }

    void fix(int arm) {
        fixed_arm_ = clamp_arm(arm, params_.big_l);
        phase_ = Phase::fixed;
        // markers are an exploring-phase signal only
        pending_below_.reset();
        pending_above_.reset();
    }

    ExplorationParams params_;
    long n_required_ = 0;
    int l_low_ = 0;
    int l_high_ = 0;
    int l_index_ = 0;
    int fixed_arm_ = 0;
    int anchor_ = 0;
    ArmStats current_;
    Phase phase_ = Phase::exploring;
    long exploration_samples_ = 0;
    std::optional<int> pending_below_;
    std::optional<int> pending_above_;
};

class PbsPolicy final : public SearchPolicyBase {
public:
    using SearchPolicyBase::SearchPolicyBase;

    void observe(bool ack) override {
        if (phase_ != Phase::exploring) return;
        current_.add(ack);
        ++exploration_samples_;
        if (current_.pulls() < n_required_) return;
        // beta_hat == beta counts as the conservative side: the arm meets
        // the target, so the best arm can only be at a higher offset
        if (current_.beta_hat() >= params_.beta) {
            eliminate_up();
        } else {
            eliminate_down();
        }
    }

    std::string name() const override { return "pbs"; }
};

class MabPolicy final : public SearchPolicyBase {
public:
    explicit MabPolicy(const ExplorationParams& params)
        : SearchPolicyBase(params), delta1_(per_step_failure_budget(params)) {}

    void observe(bool ack) override {
        switch (phase_) {
            case Phase::fixed:
                return;
            case Phase::switching:
                switching_.cum.add(ack);
                return;
            case Phase::exploring:
                break;
        }
        current_.add(ack);
        ++exploration_samples_;
        long n = current_.pulls();
        if (n >= kWaldGate && n < n_required_) {
            ConfidenceInterval ci = wald_interval(current_.beta_hat(), n, delta1_);
            if (ci.upper < params_.beta - params_.epsilon) {
                eliminate_down();
            } else if (ci.lower > params_.beta + params_.epsilon) {
                eliminate_up();
            }
            return;
        }
        if (n == n_required_) conclude_full_sample();
    }

    std::string name() const override { return "mab"; }

protected:
    int current_offset() const override {
        if (phase_ == Phase::switching) return switching_offset(switching_, params_.beta);
        return SearchPolicyBase::current_offset();
    }

    void on_interval_crossed(Move move) override {
        int arm = clamp_arm(move == Move::up ? l_low_ : l_high_, params_.big_l);
        int inward = move == Move::up ? arm - 1 : arm + 1;
        enter_switching(std::min(arm, inward), std::max(arm, inward),
                        /*entered_below=*/move == Move::down, arm);
    }

private:
    void conclude_full_sample() {
        double bh = current_.beta_hat();
        double lo = params_.beta - params_.epsilon;
        double hi = params_.beta + params_.epsilon;
        if (bh < lo) {
            eliminate_down();
        } else if (bh > hi) {
            eliminate_up();
        } else if (bh < params_.beta) {
            enter_switching(l_index_ - 1, l_index_, /*entered_below=*/true, l_index_);
        } else {
            // includes beta_hat == beta: prefer the higher-rate pair
            enter_switching(l_index_, l_index_ + 1, /*entered_below=*/false, l_index_);
        }
    }

    void enter_switching(int lower, int higher, bool entered_below, int anchor) {
        int big_l = params_.big_l;
        if (lower < -big_l || higher > big_l) {
            // pair would step outside the arm range: pin the boundary arm
            fix(std::clamp(anchor, -big_l, big_l));
            return;
        }
        switching_.lower = lower;
        switching_.higher = higher;
        switching_.entered_below = entered_below;
        switching_.cum.reset();
        anchor_ = anchor;
        phase_ = Phase::switching;
        pending_below_.reset();
        pending_above_.reset();
    }

    double delta1_;
    SwitchingState switching_;
};

class MedianEliminationPolicy final : public OllaPolicy {
public:
    explicit MedianEliminationPolicy(const ExplorationParams& params) : params_(params) {
        params.validate();
        for (int l = -params.big_l; l <= params.big_l; ++l) survivors_.push_back(l);
        stats_.resize(survivors_.size());
        eps_round_ = params.epsilon / 4.0;
        delta_round_ = params.delta / 2.0;
        if (survivors_.size() == 1) {
            fixed_arm_ = survivors_.front();
            phase_ = Phase::fixed;
        } else {
            per_arm_target_ = round_sample_count(eps_round_, delta_round_);
        }
    }

    PolicyDecision decide() override {
        PolicyDecision d;
        d.phase = phase_;
        d.offset = phase_ == Phase::exploring ? survivors_[position_] : fixed_arm_;
        return d;
    }

    void observe(bool ack) override {
        if (phase_ != Phase::exploring) return;
        stats_[position_].add(ack);
        ++exploration_samples_;
        if (stats_[position_].pulls() < per_arm_target_) return;
        ++position_;
        if (position_ == survivors_.size()) finish_round();
    }

    Phase phase() const override { return phase_; }
    long exploration_samples() const override { return exploration_samples_; }
    int selected_arm() const override {
        return phase_ == Phase::fixed ? fixed_arm_ : survivors_[position_];
    }
    std::string name() const override { return "median_elimination"; }

    static long round_sample_count(double eps, double delta) {
        return static_cast<long>(std::ceil(4.0 / (eps * eps) * std::log(3.0 / delta)));
    }

private:
    void finish_round() {
        // keep the arms at or below the median estimate (lower-middle
        // order statistic), which halves the surviving set every round
        std::vector<std::size_t> order(survivors_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return stats_[a].beta_hat() < stats_[b].beta_hat();
        });
        std::size_t keep = (survivors_.size() + 1) / 2;
        std::vector<int> next;
        for (std::size_t i = 0; i < keep; ++i) next.push_back(survivors_[order[i]]);
        std::sort(next.begin(), next.end());
        survivors_ = std::move(next);
        if (survivors_.size() == 1) {
            fixed_arm_ = survivors_.front();
            phase_ = Phase::fixed;
            return;
        }
        stats_.assign(survivors_.size(), ArmStats{});
        position_ = 0;
        delta_round_ /= 2.0;
        eps_round_ *= 0.75;
        per_arm_target_ = round_sample_count(eps_round_, delta_round_);
    }

    ExplorationParams params_;
    std::vector<int> survivors_;
    std::vector<ArmStats> stats_;
    std::size_t position_ = 0;
    long per_arm_target_ = 0;
    double eps_round_ = 0.0;
    double delta_round_ = 0.0;
    int fixed_arm_ = 0;
    Phase phase_ = Phase::exploring;
    long exploration_samples_ = 0;
};

class ThompsonPolicy final : public OllaPolicy {
public:
    ThompsonPolicy(int big_l, std::uint64_t seed)
        : big_l_(big_l), stats_(2 * big_l + 1), gen_(seed) {}

    PolicyDecision decide() override {
        double best = -1.0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < stats_.size(); ++i) {
            double theta = beta_draw(stats_[i].acks + 1.0, stats_[i].nacks + 1.0);
            if (theta > best) {
                best = theta;
                best_idx = i;
            }
        }
        last_idx_ = best_idx;
        PolicyDecision d;
        d.offset = static_cast<int>(best_idx) - big_l_;
        d.phase = Phase::exploring;
        return d;
    }

    void observe(bool ack) override {
        stats_[last_idx_].add(ack);
        ++exploration_samples_;
    }

    Phase phase() const override { return Phase::exploring; }
    long exploration_samples() const override { return exploration_samples_; }

    int selected_arm() const override {
        auto it = std::max_element(stats_.begin(), stats_.end(),
                                   [](const ArmStats& a, const ArmStats& b) {
                                       return a.pulls() < b.pulls();
                                   });
        return static_cast<int>(it - stats_.begin()) - big_l_;
    }

    std::string name() const override { return "thompson"; }

private:
    double beta_draw(double a, double b) {
        std::gamma_distribution<double> ga(a, 1.0);
        std::gamma_distribution<double> gb(b, 1.0);
        double x = ga(gen_);
        double y = gb(gen_);
        double s = x + y;
        return s > 0.0 ? x / s : 0.5;
    }

    int big_l_;
    std::vector<ArmStats> stats_;
    std::mt19937_64 gen_;
    std::size_t last_idx_ = 0;
    long exploration_samples_ = 0;
};

class UcbPolicy final : public OllaPolicy {
public:
    explicit UcbPolicy(int big_l) : big_l_(big_l), stats_(2 * big_l + 1) {}

    PolicyDecision decide() override {
        std::size_t num_arms = stats_.size();
        if (total_plays_ < static_cast<long>(num_arms)) {
            last_idx_ = static_cast<std::size_t>(total_plays_);
        } else {
            double best = -1.0;
            std::size_t best_idx = 0;
            double log_n = std::log(static_cast<double>(total_plays_));
            for (std::size_t i = 0; i < num_arms; ++i) {
                double mean = stats_[i].beta_hat();
                double bonus = std::sqrt(2.0 * log_n / static_cast<double>(stats_[i].pulls()));
                double index = mean + bonus;
                if (index > best) {  // strict: ties resolve to the lowest offset
                    best = index;
                    best_idx = i;
                }
            }
            last_idx_ = best_idx;
        }
        PolicyDecision d;
        d.offset = static_cast<int>(last_idx_) - big_l_;
        d.phase = Phase::exploring;
        return d;
    }

    void observe(bool ack) override {
        stats_[last_idx_].add(ack);
        ++total_plays_;
        ++exploration_samples_;
    }

    Phase phase() const override { return Phase::exploring; }
    long exploration_samples() const override { return exploration_samples_; }

    int selected_arm() const override {
        auto it = std::max_element(stats_.begin(), stats_.end(),
                                   [](const ArmStats& a, const ArmStats& b) {
                                       return a.pulls() < b.pulls();
                                   });
        return static_cast<int>(it - stats_.begin()) - big_l_;
    }

    std::string name() const override { return "ucb"; }

private:
    int big_l_;
    std::vector<ArmStats> stats_;
    std::size_t last_idx_ = 0;
    long total_plays_ = 0;
    long exploration_samples_ = 0;
};

class ClusteringPolicy final : public OllaPolicy {
public:
    ClusteringPolicy(int nack_threshold, int ack_threshold, int range)
        : nack_threshold_(nack_threshold), ack_threshold_(ack_threshold), range_(range) {
        if (nack_threshold < 1 || ack_threshold < 1)
            throw std::invalid_argument("clustering: run thresholds must be >= 1");
        if (range < 0) throw std::invalid_argument("clustering: offset range must be >= 0");
    }

    PolicyDecision decide() override {
        PolicyDecision d;
        d.offset = offset_;
        d.phase = Phase::fixed;
        return d;
    }

    void observe(bool ack) override {
        if (ack) {
            nack_run_ = 0;
            if (++ack_run_ == ack_threshold_) {
                offset_ = std::min(offset_ + 1, range_);
                ack_run_ = 0;
            }
        } else {
            ack_run_ = 0;
            if (++nack_run_ == nack_threshold_) {
                offset_ = std::max(offset_ - 1, -range_);
                nack_run_ = 0;
            }
        }
    }

    Phase phase() const override { return Phase::fixed; }
    long exploration_samples() const override { return 0; }
    int selected_arm() const override { return offset_; }
    std::string name() const override { return "clustering"; }

private:
    int nack_threshold_;
    int ack_threshold_;
    int range_;
    int offset_ = 0;
    int ack_run_ = 0;
    int nack_run_ = 0;
};

class FixedOffsetPolicy final : public OllaPolicy {
public:
    explicit FixedOffsetPolicy(int offset, std::string name)
        : offset_(offset), name_(std::move(name)) {}

    PolicyDecision decide() override {
        PolicyDecision d;
        d.offset = offset_;
        d.phase = Phase::fixed;
        return d;
    }

    void observe(bool) override {}
    Phase phase() const override { return Phase::fixed; }
    long exploration_samples() const override { return 0; }
    int selected_arm() const override { return offset_; }
    std::string name() const override { return name_; }

private:
    int offset_;
    std::string name_;
};

}  // namespace

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::exploring: return "exploring";
        case Phase::switching: return "switching";
        case Phase::fixed: return "fixed";
    }
    return "fixed";
}

int switching_offset(const SwitchingState& state, double target_beta) {
    if (state.cum.pulls() == 0) return state.entered_below ? state.lower : state.higher;
    return state.cum.beta_hat() < target_beta ? state.lower : state.higher;
}

int switching_step(SwitchingState& state, double target_beta, bool ack) {
    state.cum.add(ack);
    return switching_offset(state, target_beta);
}

std::unique_ptr<OllaPolicy> make_pbs_policy(const ExplorationParams& params) {
    params.validate();
    return std::make_unique<PbsPolicy>(params);
}

std::unique_ptr<OllaPolicy> make_mab_policy(const ExplorationParams& params) {
    params.validate();
    return std::make_unique<MabPolicy>(params);
}

std::unique_ptr<OllaPolicy> make_median_elimination_policy(const ExplorationParams& params) {
    return std::make_unique<MedianEliminationPolicy>(params);
}

long median_elimination_total_samples(const ExplorationParams& params) {
    params.validate();
    long survivors = params.num_arms();
    double eps = params.epsilon / 4.0;
    double delta = params.delta / 2.0;
    long total = 0;
    while (survivors > 1) {
        total += survivors * MedianEliminationPolicy::round_sample_count(eps, delta);
        survivors = (survivors + 1) / 2;
        eps *= 0.75;
        delta /= 2.0;
    }
    return total;
}

std::unique_ptr<OllaPolicy> make_thompson_policy(int big_l, std::uint64_t seed) {
    if (big_l < 0) throw std::invalid_argument("thompson: big_l must be >= 0");
    return std::make_unique<ThompsonPolicy>(big_l, seed);
}

std::unique_ptr<OllaPolicy> make_ucb_policy(int big_l) {
    if (big_l < 0) throw std::invalid_argument("ucb: big_l must be >= 0");
    return std::make_unique<UcbPolicy>(big_l);
}

std::unique_ptr<OllaPolicy> make_clustering_policy(int nack_run_threshold,
                                                   int ack_run_threshold,
                                                   int offset_range) {
    return std::make_unique<ClusteringPolicy>(nack_run_threshold, ack_run_threshold,
                                              offset_range);
}

std::unique_ptr<OllaPolicy> make_no_olla_policy() {
    return std::make_unique<FixedOffsetPolicy>(0, "no_olla");
}

std::unique_ptr<OllaPolicy> make_fixed_offset_policy(int offset) {
    return std::make_unique<FixedOffsetPolicy>(offset, "fixed");
}

}  // namespace olla
