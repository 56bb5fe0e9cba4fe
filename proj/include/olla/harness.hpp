#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "olla/config.hpp"
#include "olla/linksim.hpp"
#include "olla/policies.hpp"

namespace olla {

struct UeMetrics {
    std::string policy;
    int ue_id = 0;
    double mean_sinr = 0.0;
    int cqi_bias = 0;
    double target_bler = 0.0;
    long acks = 0;
    long nacks = 0;
    double throughput_mbps = 0.0;
    double mean_offset = 0.0;
    long exploration_samples = 0;

    double achieved_bler() const {
        long n = acks + nacks;
        return n == 0 ? 0.0 : static_cast<double>(nacks) / static_cast<double>(n);
    }
};

struct PolicySummary {
    std::string policy;
    double avg_throughput_mbps = 0.0;
    double avg_bler = 0.0;
    double avg_offset = 0.0;
    double avg_exploration_samples = 0.0;
};

struct MetricsReport {
    std::vector<UeMetrics> per_ue;        // canonical (policy, ue_id) order
    std::vector<PolicySummary> summary;   // config policy order

    std::vector<UeMetrics> ues_of(const std::string& policy) const;
    const PolicySummary& summary_of(const std::string& policy) const;
    std::vector<std::pair<double, double>> bler_cdf(const std::string& policy) const;
    std::vector<std::pair<double, double>> throughput_cdf(const std::string& policy) const;
};

// Instantiate the policy a spec describes, seeded deterministically.
std::unique_ptr<OllaPolicy> make_policy(const PolicySpec& spec, const ExperimentConfig& config,
                                        std::uint64_t seed);

// Deterministic profile for one (policy, ue) pair of the experiment.
UeProfile draw_ue_profile(const ExperimentConfig& config, const PolicySpec& spec, int ue_id);

// Run every (policy, ue) session for duration_subframes, write traces.csv,
// per_ue.csv and report.csv into config.output_dir, and return the
// aggregated metrics. Identical configs produce byte-identical files.
MetricsReport run_experiment(const ExperimentConfig& config);

// Empirical CDF at the sorted sample points. Throws on an empty input.
std::vector<std::pair<double, double>> compute_cdf(const std::vector<double>& values);

// Cross-policy averages as an aligned text table.
std::string comparison_table(const MetricsReport& report);

void write_traces_csv(std::ostream& out, const std::vector<TransmissionRecord>& records,
                      const std::string& policy);
void write_traces_header(std::ostream& out);
std::vector<std::pair<std::string, TransmissionRecord>> read_traces_csv(
    const std::string& path);

// Rebuild per-UE metrics from a traces.csv written by run_experiment.
MetricsReport report_from_traces(const std::string& traces_path);

void write_report_csv(const std::string& path, const MetricsReport& report);
void write_per_ue_csv(const std::string& path, const MetricsReport& report);

// CDF plot of one metric across policies (simple standalone SVG).
void write_cdf_svg(const std::string& path, const std::string& title,
                   const std::string& x_label,
                   const std::map<std::string, std::vector<double>>& per_policy_values);

}  // namespace olla
