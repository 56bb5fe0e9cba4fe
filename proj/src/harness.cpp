#include "olla/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "olla/rng.hpp"

namespace olla {

namespace {

std::string format(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

Phase phase_from_string(const std::string& s) {
    if (s == "exploring") return Phase::exploring;
    if (s == "switching") return Phase::switching;
    if (s == "fixed") return Phase::fixed;
    throw std::runtime_error("bad phase '" + s + "' in trace");
}

}  // namespace

std::vector<UeMetrics> MetricsReport::ues_of(const std::string& policy) const {
    std::vector<UeMetrics> out;
    for (const UeMetrics& m : per_ue)
        if (m.policy == policy) out.push_back(m);
    return out;
}

const PolicySummary& MetricsReport::summary_of(const std::string& policy) const {
    for (const PolicySummary& s : summary)
        if (s.policy == policy) return s;
    throw std::out_of_range("no summary for policy '" + policy + "'");
}

std::vector<std::pair<double, double>> MetricsReport::bler_cdf(const std::string& policy) const {
    std::vector<double> values;
    for (const UeMetrics& m : per_ue)
        if (m.policy == policy) values.push_back(m.achieved_bler());
    return compute_cdf(values);
}

std::vector<std::pair<double, double>> MetricsReport::throughput_cdf(
    const std::string& policy) const {
    std::vector<double> values;
    for (const UeMetrics& m : per_ue)
        if (m.policy == policy) values.push_back(m.throughput_mbps);
    return compute_cdf(values);
}

std::unique_ptr<OllaPolicy> make_policy(const PolicySpec& spec, const ExperimentConfig& config,
                                        std::uint64_t seed) {
    ExplorationParams params = config.exploration_for(spec);
    if (spec.algo == "pbs") return make_pbs_policy(params);
    if (spec.algo == "mab") return make_mab_policy(params);
    if (spec.algo == "median_elimination") return make_median_elimination_policy(params);
    if (spec.algo == "thompson") return make_thompson_policy(params.big_l, seed);
    if (spec.algo == "ucb") return make_ucb_policy(params.big_l);
    if (spec.algo == "clustering")
        return make_clustering_policy(spec.nack_run_threshold, spec.ack_run_threshold,
                                      spec.offset_range);
    if (spec.algo == "no_olla") return make_no_olla_policy();
    if (spec.algo == "fixed") return make_fixed_offset_policy(spec.fixed_offset);
    throw ConfigError("unknown algo '" + spec.algo + "'");
}

UeProfile draw_ue_profile(const ExperimentConfig& config, const PolicySpec& spec, int ue_id) {
    Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(ue_id),
                        spec.name + "/profile"));
    UeProfile profile;
    profile.ue_id = ue_id;
    // stratified over the population: UE i jitters inside the i-th slice of
    // the SINR range, so every run covers the cell evenly
    double slice = (static_cast<double>(ue_id) + rng.uniform()) /
                   static_cast<double>(config.num_ues);
    profile.mean_sinr_db = config.ue.mean_sinr_min +
                           (config.ue.mean_sinr_max - config.ue.mean_sinr_min) * slice;
    profile.cqi_bias = rng.uniform_int(config.ue.cqi_bias_min, config.ue.cqi_bias_max);
    profile.ar_coefficient = config.ue.ar_coefficient;
    profile.sinr_std_db = config.ue.sinr_std;
    profile.target_bler =
        spec.target_bler >= 0.0 ? spec.target_bler : 1.0 - config.exploration.beta;
    profile.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(ue_id),
                               spec.name + "/channel");
    return profile;
}

void write_traces_header(std::ostream& out) {
    out << "time_index,ue_id,policy,cqi,offset,mcs,ack,bits,phase\n";
}

void write_traces_csv(std::ostream& out, const std::vector<TransmissionRecord>& records,
                      const std::string& policy) {
    for (const TransmissionRecord& r : records) {
        out << r.time_index << ',' << r.ue_id << ',' << policy << ',' << r.cqi << ','
            << r.offset << ',' << r.mcs << ',' << (r.ack ? 1 : 0) << ','
            << format("%.0f", r.bits) << ',' << to_string(r.phase) << '\n';
    }
}

std::vector<std::pair<std::string, TransmissionRecord>> read_traces_csv(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open traces '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "time_index,ue_id,policy,cqi,offset,mcs,ack,bits,phase")
        throw std::runtime_error("traces '" + path + "': bad header");
    std::vector<std::pair<std::string, TransmissionRecord>> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        TransmissionRecord r;
        std::string policy;
        std::getline(row, field, ',');
        r.time_index = std::stol(field);
        std::getline(row, field, ',');
        r.ue_id = std::stoi(field);
        std::getline(row, policy, ',');
        std::getline(row, field, ',');
        r.cqi = std::stoi(field);
        std::getline(row, field, ',');
        r.offset = std::stoi(field);
        std::getline(row, field, ',');
        r.mcs = std::stoi(field);
        std::getline(row, field, ',');
        r.ack = field == "1";
        std::getline(row, field, ',');
        r.bits = std::stod(field);
        std::getline(row, field, ',');
        r.phase = phase_from_string(field);
        out.emplace_back(std::move(policy), r);
    }
    return out;
}

namespace {

UeMetrics finish_metrics(UeMetrics m, double bits_total, double offset_sum, long duration) {
    m.throughput_mbps = bits_total * 1000.0 / 1e6 / static_cast<double>(duration);
    m.mean_offset = offset_sum / static_cast<double>(duration);
    return m;
}

std::vector<PolicySummary> summarize(const std::vector<UeMetrics>& per_ue,
                                     const std::vector<std::string>& policy_order) {
    std::vector<PolicySummary> out;
    for (const std::string& name : policy_order) {
        PolicySummary s;
        s.policy = name;
        long count = 0;
        for (const UeMetrics& m : per_ue) {
            if (m.policy != name) continue;
            ++count;
            s.avg_throughput_mbps += m.throughput_mbps;
            s.avg_bler += m.achieved_bler();
            s.avg_offset += m.mean_offset;
            s.avg_exploration_samples += static_cast<double>(m.exploration_samples);
        }
        if (count > 0) {
            s.avg_throughput_mbps /= count;
            s.avg_bler /= count;
            s.avg_offset /= count;
            s.avg_exploration_samples /= count;
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    McsTable table =
        config.mcs_table_path.empty() ? McsTable::built_in() : McsTable::load_csv(config.mcs_table_path);

    std::filesystem::create_directories(config.output_dir);
    std::ofstream traces(std::filesystem::path(config.output_dir) / "traces.csv");
    if (!traces)
        throw std::runtime_error("cannot write traces into '" + config.output_dir + "'");
    write_traces_header(traces);

    MetricsReport report;
    std::vector<std::string> policy_order;
    for (const PolicySpec& spec : config.policies) {
        policy_order.push_back(spec.name);
        for (int ue = 0; ue < config.num_ues; ++ue) {
            UeProfile profile = draw_ue_profile(config, spec, ue);
            std::uint64_t policy_seed = derive_seed(
                config.master_seed, static_cast<std::uint64_t>(ue), spec.name + "/policy");
            std::unique_ptr<OllaPolicy> policy = make_policy(spec, config, policy_seed);
            UeSession session(profile, table, *policy);

            UeMetrics m;
            m.policy = spec.name;
            m.ue_id = ue;
            m.mean_sinr = profile.mean_sinr_db;
            m.cqi_bias = profile.cqi_bias;
            m.target_bler = profile.target_bler;
            double bits_total = 0.0;
            double offset_sum = 0.0;
            std::vector<TransmissionRecord> records;
            records.reserve(static_cast<std::size_t>(config.duration_subframes));
            for (long t = 0; t < config.duration_subframes; ++t) {
                TransmissionRecord rec = session.step();
                rec.ack ? ++m.acks : ++m.nacks;
                bits_total += rec.bits;
                offset_sum += rec.offset;
                if (rec.phase == Phase::exploring) ++m.exploration_samples;
                records.push_back(rec);
            }
            write_traces_csv(traces, records, spec.name);
            report.per_ue.push_back(
                finish_metrics(std::move(m), bits_total, offset_sum, config.duration_subframes));
        }
    }
    report.summary = summarize(report.per_ue, policy_order);

    write_per_ue_csv((std::filesystem::path(config.output_dir) / "per_ue.csv").string(), report);
    write_report_csv((std::filesystem::path(config.output_dir) / "report.csv").string(), report);
    return report;
}

std::vector<std::pair<double, double>> compute_cdf(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("compute_cdf: empty input");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
    return cdf;
}

MetricsReport report_from_traces(const std::string& traces_path) {
    auto rows = read_traces_csv(traces_path);
    if (rows.empty()) throw std::runtime_error("traces '" + traces_path + "' hold no records");

    MetricsReport report;
    std::vector<std::string> policy_order;
    UeMetrics* current = nullptr;
    double bits_total = 0.0;
    double offset_sum = 0.0;
    long rows_in_session = 0;
    auto flush = [&]() {
        if (!current) return;
        *current = finish_metrics(std::move(*current), bits_total, offset_sum, rows_in_session);
        bits_total = offset_sum = 0.0;
        rows_in_session = 0;
    };
    for (const auto& [policy, rec] : rows) {
        bool new_session = !current || current->policy != policy || current->ue_id != rec.ue_id;
        if (new_session) {
            flush();
            UeMetrics m;
            m.policy = policy;
            m.ue_id = rec.ue_id;
            report.per_ue.push_back(std::move(m));
            current = &report.per_ue.back();
            if (std::find(policy_order.begin(), policy_order.end(), policy) == policy_order.end())
                policy_order.push_back(policy);
        }
        rec.ack ? ++current->acks : ++current->nacks;
        bits_total += rec.bits;
        offset_sum += rec.offset;
        if (rec.phase == Phase::exploring) ++current->exploration_samples;
        ++rows_in_session;
    }
    flush();
    report.summary = summarize(report.per_ue, policy_order);
    return report;
}

void write_report_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report '" + path + "'");
    out << "policy,avg_throughput_mbps,avg_bler,avg_offset,avg_exploration_samples\n";
    for (const PolicySummary& s : report.summary) {
        out << s.policy << ',' << format("%.6f", s.avg_throughput_mbps) << ','
            << format("%.6f", s.avg_bler) << ',' << format("%.4f", s.avg_offset) << ','
            << format("%.1f", s.avg_exploration_samples) << '\n';
    }
}

void write_per_ue_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write per-ue metrics '" + path + "'");
    out << "policy,ue_id,mean_sinr,cqi_bias,target_bler,achieved_bler,throughput_mbps,"
           "mean_offset,exploration_samples\n";
    for (const UeMetrics& m : report.per_ue) {
        out << m.policy << ',' << m.ue_id << ',' << format("%.3f", m.mean_sinr) << ','
            << m.cqi_bias << ',' << format("%.4f", m.target_bler) << ','
            << format("%.6f", m.achieved_bler()) << ',' << format("%.6f", m.throughput_mbps)
            << ',' << format("%.4f", m.mean_offset) << ',' << m.exploration_samples << '\n';
    }
}

std::string comparison_table(const MetricsReport& report) {
    std::ostringstream out;
    out << format("%-16s %18s %10s %12s %14s\n", "policy", "avg_tput_mbps", "avg_bler",
                  "avg_offset", "avg_expl_smpl");
    for (const PolicySummary& s : report.summary) {
        out << format("%-16s %18.4f %10.4f %12.3f %14.1f\n", s.policy.c_str(),
                      s.avg_throughput_mbps, s.avg_bler, s.avg_offset,
                      s.avg_exploration_samples);
    }
    return out.str();
}

void write_cdf_svg(const std::string& path, const std::string& title,
                   const std::string& x_label,
                   const std::map<std::string, std::vector<double>>& per_policy_values) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    const double width = 640, height = 420;
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = 0.0, x_max = 1e-9;
    for (const auto& [name, values] : per_policy_values)
        for (double v : values) x_max = std::max(x_max, v);
    x_max *= 1.05;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write svg '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";

    auto x_of = [&](double v) { return left + (v - x_min) / (x_max - x_min) * plot_w; };
    auto y_of = [&](double frac) { return top + (1.0 - frac) * plot_h; };

    out << format("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left, top, left, top + plot_h);
    out << format("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  left, top + plot_h, left + plot_w, top + plot_h);
    for (int i = 0; i <= 5; ++i) {
        double frac = i / 5.0;
        out << format("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"10\">%.1f"
                      "</text>\n",
                      left - 6, y_of(frac) + 3, frac);
        out << format("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#dddddd\"/>\n",
                      left, y_of(frac), left + plot_w, y_of(frac));
        double xv = x_min + frac * (x_max - x_min);
        out << format("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"10\">"
                      "%.3g</text>\n",
                      x_of(xv), top + plot_h + 16, xv);
    }

    int color_idx = 0;
    double legend_y = top + 8;
    for (const auto& [name, values] : per_policy_values) {
        if (values.empty()) continue;
        const char* color = kColors[color_idx % 8];
        ++color_idx;
        auto cdf = compute_cdf(values);
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        out << format("%.1f,%.1f ", x_of(cdf.front().first), y_of(0.0));
        for (const auto& [v, frac] : cdf) out << format("%.1f,%.1f ", x_of(v), y_of(frac));
        out << "\"/>\n";
        out << format("<rect x=\"%.1f\" y=\"%.1f\" width=\"14\" height=\"3\" fill=\"%s\"/>\n",
                      left + plot_w - 150, legend_y, color);
        out << format("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">%s</text>\n",
                      left + plot_w - 130, legend_y + 5, name.c_str());
        legend_y += 16;
    }
    out << "</svg>\n";
}

}  // namespace olla
