// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// binary exits nonzero if any fail.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "olla/bounds.hpp"
#include "olla/config.hpp"
#include "olla/harness.hpp"
#include "olla/policies.hpp"
#include "olla/rng.hpp"
#include "olla/synthetic.hpp"

using namespace olla;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s [%d] %s  (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

ExplorationParams params7() {
    ExplorationParams p;
    p.beta = 0.9;
    p.epsilon = 0.05;
    p.delta = 0.05;
    p.big_l = 3;
    return p;
}

SyntheticBandit bandit7() {
    return SyntheticBandit::from_success({0.98, 0.96, 0.93, 0.90, 0.85, 0.78, 0.70});
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// 1. Per-arm sample count and distinct-arm budget at the worked parameters.
void check_sample_complexity() {
    ExplorationParams p = params7();
    long n = required_samples(p);
    int k = max_distinct_arms(p);
    bool pass = n >= 360 && n <= 380 && k == 3;
    report(1, pass, "sample complexity formula",
           fmt("N=%ld expected in [360,380], k=%d expected 3, worst-case total %ld", n, k,
               n * k));
}

// 2. Ordered search explores far less than median elimination.
void check_complexity_reduction() {
    ExplorationParams p = params7();
    SyntheticBandit bandit = bandit7();
    long pbs_total = 0;
    long med_total = 0;
    const int seeds = 100;
    for (int seed = 1; seed <= seeds; ++seed) {
        auto pbs = make_pbs_policy(p);
        ExplorationTrial t1 = run_exploration_trial(
            *pbs, bandit, p, derive_seed(90, seed, "pbs"), 1000000);
        pbs_total += t1.exploration_samples;

        auto med = make_median_elimination_policy(p);
        ExplorationTrial t2 = run_exploration_trial(
            *med, bandit, p, derive_seed(90, seed, "med"),
            median_elimination_total_samples(p) + 1);
        med_total += t2.exploration_samples;
    }
    bool pass = pbs_total * 5 <= med_total;
    report(2, pass, "exploration cost vs median elimination",
           fmt("pbs=%ld median-elimination=%ld ratio=%.1fx over %d paired seeds", pbs_total,
               med_total, static_cast<double>(med_total) / static_cast<double>(pbs_total),
               seeds));
}

// 3. The returned arm is inside the band with the promised frequency.
void check_pac_guarantee() {
    ExplorationParams p = params7();
    SyntheticBandit bandit = bandit7();
    const int trials = 500;
    int ok_pbs = 0, ok_mab = 0;
    for (int trial = 0; trial < trials; ++trial) {
        auto pbs = make_pbs_policy(p);
        if (run_exploration_trial(*pbs, bandit, p, derive_seed(301, trial, "pbs"), 1000000)
                .eps_optimal)
            ++ok_pbs;
        auto mab = make_mab_policy(p);
        if (run_exploration_trial(*mab, bandit, p, derive_seed(301, trial, "mab"), 1000000)
                .eps_optimal)
            ++ok_mab;
    }
    double f_pbs = static_cast<double>(ok_pbs) / trials;
    double f_mab = static_cast<double>(ok_mab) / trials;
    bool pass = f_pbs >= 0.95 && f_mab >= 0.95;
    report(3, pass, "pac guarantee on the seven-arm bandit",
           fmt("pbs %.3f, mab %.3f of %d trials returned an arm with true beta in "
               "[0.85,0.95]; need >= 0.95",
               f_pbs, f_mab, trials));
}

// 4. Chernoff bounds dominate exact binomial tails across the lattice.
void check_tail_soundness() {
    long violations = 0;
    long checked = 0;
    for (long n : {10L, 50L, 100L, 500L}) {
        for (int bi = 1; bi <= 19; ++bi) {
            for (int qi = 1; qi <= 19; ++qi) {
                double beta = 0.05 * bi;
                double beta_l = 0.05 * qi;
                if (beta > beta_l) {
                    ++checked;
                    double exact = exact_binomial_tail(
                        n, beta_l, static_cast<long>(std::ceil(n * beta)), TailSide::right);
                    if (exact > right_tail_bound(n, beta, beta_l) + 1e-12) ++violations;
                } else if (beta < beta_l) {
                    ++checked;
                    double exact = exact_binomial_tail(
                        n, beta_l, static_cast<long>(std::floor(n * beta)), TailSide::left);
                    if (exact > left_tail_bound(n, beta, beta_l) + 1e-12) ++violations;
                }
            }
        }
    }
    report(4, violations == 0, "tail bounds dominate exact tails",
           fmt("%ld grid points, %ld violations", checked, violations));
}

struct DefaultRun {
    MetricsReport report;
    std::string dir;
};

DefaultRun run_default(const std::string& dir) {
    ExperimentConfig cfg =
        load_experiment_config(std::string(OLLA_CONFIG_DIR) + "/default.cfg");
    cfg.output_dir = dir;
    DefaultRun run;
    run.report = run_experiment(cfg);
    run.dir = dir;
    return run;
}

// 5. Error-rate control on the default population.
void check_bler_control(const MetricsReport& rep) {
    double mab10 = rep.summary_of("mab10").avg_bler;
    double mab75 = rep.summary_of("mab75").avg_bler;
    double clustering = rep.summary_of("clustering").avg_bler;
    double no_olla = rep.summary_of("no_olla").avg_bler;

    int at_or_below = 0, mab_ues = 0;
    for (const UeMetrics& m : rep.per_ue) {
        if (m.policy != "mab10" && m.policy != "mab75") continue;
        ++mab_ues;
        if (m.achieved_bler() <= m.target_bler) ++at_or_below;
    }
    double frac = static_cast<double>(at_or_below) / mab_ues;

    report(5, mab10 >= 0.07 && mab10 <= 0.12, "bler control: mab10 average",
           fmt("avg=%.4f expected in [0.07,0.12]", mab10));
    report(5, mab75 >= 0.05 && mab75 <= 0.095, "bler control: mab75 average",
           fmt("avg=%.4f expected in [0.05,0.095]", mab75));
    report(5, frac >= 0.70, "bler control: UEs at or below their target",
           fmt("%.3f of %d mab UEs, need >= 0.70", frac, mab_ues));
    report(5, clustering <= 0.05, "bler control: clustering average",
           fmt("avg=%.4f expected <= 0.05", clustering));
    report(5, no_olla >= 0.15, "bler control: no-olla average",
           fmt("avg=%.4f expected >= 0.15", no_olla));
}

// 6. Throughput ordering across the schemes.
void check_throughput_ordering(const MetricsReport& rep) {
    double mab10 = rep.summary_of("mab10").avg_throughput_mbps;
    double no_olla = rep.summary_of("no_olla").avg_throughput_mbps;
    double clustering = rep.summary_of("clustering").avg_throughput_mbps;
    report(6, mab10 > no_olla, "throughput ordering: mab10 > no_olla",
           fmt("mab10=%.3f no_olla=%.3f Mbps", mab10, no_olla));
    report(6, no_olla > clustering, "throughput ordering: no_olla > clustering",
           fmt("no_olla=%.3f clustering=%.3f Mbps", no_olla, clustering));
}

// 7. Index policies drift to the most conservative arm.
void check_conservative_convergence() {
    SyntheticBandit bandit = bandit7();
    const long horizon = 50000;
    const long window = 10000;

    auto tail_fraction = [&](const std::vector<int>& arms) {
        long hits = 0;
        for (std::size_t i = arms.size() - window; i < arms.size(); ++i)
            if (arms[i] == -3) ++hits;
        return static_cast<double>(hits) / static_cast<double>(window);
    };

    auto thompson = make_thompson_policy(3, 7151);
    double f_thompson = tail_fraction(run_arm_sequence(*thompson, bandit, 4242, horizon));
    auto ucb = make_ucb_policy(3);
    double f_ucb = tail_fraction(run_arm_sequence(*ucb, bandit, 4243, horizon));

    report(7, f_thompson > 0.90, "thompson converges to the most conservative arm",
           fmt("arm -3 fraction over final 10k: %.3f, need > 0.90", f_thompson));
    report(7, f_ucb > 0.50, "ucb converges to the most conservative arm",
           fmt("arm -3 fraction over final 10k: %.3f, need > 0.50", f_ucb));
}

// 8. The switching controller pins the long-run success rate.
void check_switching_controller() {
    SwitchingState s;
    s.lower = 0;
    s.higher = 1;
    s.entered_below = false;
    const double truth[2] = {0.93, 0.88};
    Rng rng(8080);
    int offset = switching_offset(s, 0.90);
    const long steps = 100000;
    for (long t = 0; t < steps; ++t) {
        bool ack = rng.bernoulli(truth[offset]);
        offset = switching_step(s, 0.90, ack);
    }
    double achieved = s.cum.beta_hat();
    bool pass = achieved >= 0.88 && achieved <= 0.92;
    report(8, pass, "switching controller long-run success rate",
           fmt("achieved %.4f over %ld steps, expected in [0.88,0.92]", achieved, steps));
}

// 9. Same seed, same bytes.
void check_determinism(const DefaultRun& a, const DefaultRun& b) {
    auto read_all = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool pass = true;
    std::string detail;
    for (const char* file : {"traces.csv", "report.csv", "per_ue.csv"}) {
        bool same = read_all(std::filesystem::path(a.dir) / file) ==
                    read_all(std::filesystem::path(b.dir) / file);
        if (!same) pass = false;
        detail += fmt("%s %s ", file, same ? "identical" : "DIFFERS");
    }
    report(9, pass, "byte-identical outputs under the same master seed", detail);
}

}  // namespace

int main() {
    check_sample_complexity();
    check_complexity_reduction();
    check_pac_guarantee();
    check_tail_soundness();

    DefaultRun run_a = run_default("acceptance_out/run_a");
    DefaultRun run_b = run_default("acceptance_out/run_b");
    check_bler_control(run_a.report);
    check_throughput_ordering(run_a.report);
    check_conservative_convergence();
    check_switching_controller();
    check_determinism(run_a, run_b);

    if (g_failures == 0) {
        std::printf("all acceptance checks passed\n");
    } else {
        std::printf("%d acceptance check(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
