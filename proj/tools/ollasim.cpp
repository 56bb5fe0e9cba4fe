#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "olla/bounds.hpp"
#include "olla/config.hpp"
#include "olla/harness.hpp"
#include "olla/policies.hpp"
#include "olla/rng.hpp"
#include "olla/synthetic.hpp"

namespace {

using namespace olla;

int usage(const std::string& message) {
    if (!message.empty()) std::cerr << "error: " << message << "\n";
    std::cerr << "usage: ollasim <command> [options]\n"
                 "\n"
                 "commands:\n"
                 "  samples --beta B --epsilon E --delta D --big-l L\n"
                 "      print the per-arm sample count and search budget\n"
                 "  synth  --config PATH [--seed U64] [--out DIR] [--set KEY=VALUE]...\n"
                 "      run seeded trials of one policy on a synthetic bandit\n"
                 "  sim    --config PATH [--seed U64] [--out DIR] [--set KEY=VALUE]...\n"
                 "      run the link simulation described by the config\n"
                 "  report --dir DIR [--out DIR]\n"
                 "      rebuild the comparison table and CDF plots from traces.csv\n";
    return 2;
}

struct CommonArgs {
    std::string config;
    std::string dir;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::vector<Override> overrides;
};

bool parse_common(int argc, char** argv, int start, CommonArgs& args, std::string& err) {
    for (int i = start; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&](const char* flag) -> const char* {
            if (i + 1 >= argc) {
                err = std::string(flag) + " expects a value";
                return nullptr;
            }
            return argv[++i];
        };
        if (arg == "--config") {
            const char* v = next("--config");
            if (!v) return false;
            args.config = v;
        } else if (arg == "--dir") {
            const char* v = next("--dir");
            if (!v) return false;
            args.dir = v;
        } else if (arg == "--out") {
            const char* v = next("--out");
            if (!v) return false;
            args.out = v;
        } else if (arg == "--seed") {
            const char* v = next("--seed");
            if (!v) return false;
            try {
                args.seed = std::stoull(v);
            } catch (const std::exception&) {
                err = std::string("--seed expects an unsigned integer, got '") + v + "'";
                return false;
            }
        } else if (arg == "--set") {
            const char* v = next("--set");
            if (!v) return false;
            try {
                args.overrides.push_back(parse_override(v));
            } catch (const std::exception& e) {
                err = e.what();
                return false;
            }
        } else {
            err = "unknown option '" + arg + "'";
            return false;
        }
    }
    return true;
}

void apply_common(const CommonArgs& args, std::vector<Override>& overrides) {
    overrides = args.overrides;
    if (args.seed) overrides.push_back({"master_seed", std::to_string(*args.seed)});
    if (args.out) overrides.push_back({"output_dir", *args.out});
}

int cmd_samples(int argc, char** argv) {
    std::map<std::string, double> values = {
        {"--beta", 0.9}, {"--epsilon", 0.05}, {"--delta", 0.05}, {"--big-l", 3}};
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        auto it = values.find(arg);
        if (it == values.end()) return usage("unknown option '" + arg + "' for samples");
        if (i + 1 >= argc) return usage(arg + " expects a value");
        try {
            it->second = std::stod(argv[++i]);
        } catch (const std::exception&) {
            return usage(arg + " expects a number");
        }
    }
    ExplorationParams params;
    params.beta = values["--beta"];
    params.epsilon = values["--epsilon"];
    params.delta = values["--delta"];
    params.big_l = static_cast<int>(values["--big-l"]);
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        return usage(e.what());
    }
    long n = required_samples(params);
    int k = max_distinct_arms(params);
    std::printf("beta                 %.6f\n", params.beta);
    std::printf("epsilon              %.6f\n", params.epsilon);
    std::printf("delta                %.6f\n", params.delta);
    std::printf("offset range L       %d  (%d arms)\n", params.big_l, params.num_arms());
    std::printf("delta_1 per step     %.6f\n", per_step_failure_budget(params));
    std::printf("kl(beta, beta-eps)   %.6f\n",
                kl_bernoulli(params.beta, params.beta - params.epsilon));
    std::printf("kl(beta, beta+eps)   %.6f\n",
                kl_bernoulli(params.beta, params.beta + params.epsilon));
    std::printf("per-arm samples N    %ld\n", n);
    std::printf("max distinct arms k  %d\n", k);
    std::printf("worst-case total N*k %ld\n", n * k);
    return 0;
}

long synth_step_cap(const SynthConfig& cfg, const ExplorationParams& params) {
    if (cfg.policy == "median_elimination")
        return median_elimination_total_samples(params) + 1;
    long per_arm = required_samples(params);
    long arms = std::max(1, max_distinct_arms(params));
    return 2 * per_arm * (arms + 1) + 1000;
}

int cmd_synth(const CommonArgs& args) {
    if (args.config.empty()) return usage("synth requires --config");
    std::vector<Override> overrides;
    apply_common(args, overrides);
    SynthConfig cfg = load_synth_config(args.config, overrides);

    ExplorationParams params = cfg.exploration;
    params.big_l = static_cast<int>(cfg.arm_betas.size() / 2);
    SyntheticBandit bandit = SyntheticBandit::from_success(cfg.arm_betas);
    bool indexing = cfg.policy == "thompson" || cfg.policy == "ucb";

    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream csv(std::filesystem::path(cfg.output_dir) / "synth_trials.csv");
    if (!csv) {
        std::cerr << "error: cannot write into '" << cfg.output_dir << "'\n";
        return 1;
    }
    csv << "trial,seed,selected_arm,true_beta,eps_optimal,samples\n";

    long eps_optimal = 0;
    double total_samples = 0.0;
    for (long trial = 0; trial < cfg.trials; ++trial) {
        std::uint64_t env_seed = derive_seed(cfg.master_seed, trial, "synth/env");
        std::uint64_t policy_seed = derive_seed(cfg.master_seed, trial, "synth/policy");
        std::unique_ptr<OllaPolicy> policy;
        if (cfg.policy == "pbs") policy = make_pbs_policy(params);
        else if (cfg.policy == "mab") policy = make_mab_policy(params);
        else if (cfg.policy == "median_elimination")
            policy = make_median_elimination_policy(params);
        else if (cfg.policy == "thompson") policy = make_thompson_policy(params.big_l, policy_seed);
        else policy = make_ucb_policy(params.big_l);

        ExplorationTrial result;
        if (indexing) {
            run_arm_sequence(*policy, bandit, env_seed, cfg.horizon);
            result.selected_arm = policy->selected_arm();
            result.selected_true_beta = bandit.success_at(result.selected_arm);
            result.eps_optimal =
                std::abs(result.selected_true_beta - params.beta) <= params.epsilon;
            result.exploration_samples = cfg.horizon;
        } else {
            result = run_exploration_trial(*policy, bandit, params, env_seed,
                                           synth_step_cap(cfg, params));
        }
        eps_optimal += result.eps_optimal ? 1 : 0;
        total_samples += static_cast<double>(result.exploration_samples);
        char row[160];
        std::snprintf(row, sizeof(row), "%ld,%llu,%d,%.4f,%d,%ld\n", trial,
                      static_cast<unsigned long long>(env_seed), result.selected_arm,
                      result.selected_true_beta, result.eps_optimal ? 1 : 0,
                      result.exploration_samples);
        csv << row;
    }
    double freq = static_cast<double>(eps_optimal) / static_cast<double>(cfg.trials);
    std::printf("policy                 %s\n", cfg.policy.c_str());
    std::printf("trials                 %ld\n", cfg.trials);
    std::printf("eps-optimal frequency  %.4f\n", freq);
    std::printf("mean samples per trial %.1f\n", total_samples / static_cast<double>(cfg.trials));
    std::printf("per-trial results      %s/synth_trials.csv\n", cfg.output_dir.c_str());
    return 0;
}

int cmd_sim(const CommonArgs& args) {
    if (args.config.empty()) return usage("sim requires --config");
    std::vector<Override> overrides;
    apply_common(args, overrides);
    ExperimentConfig cfg = load_experiment_config(args.config, overrides);
    MetricsReport report = run_experiment(cfg);
    std::cout << comparison_table(report);
    std::cout << "outputs: " << cfg.output_dir << "/traces.csv, report.csv, per_ue.csv\n";
    return 0;
}

int cmd_report(const CommonArgs& args) {
    if (args.dir.empty()) return usage("report requires --dir");
    std::string traces = (std::filesystem::path(args.dir) / "traces.csv").string();
    if (!std::filesystem::exists(traces)) {
        std::cerr << "error: no traces.csv in '" << args.dir << "'\n";
        return 1;
    }
    MetricsReport report = report_from_traces(traces);
    std::string out_dir = args.out.value_or(args.dir);
    std::filesystem::create_directories(out_dir);

    write_report_csv((std::filesystem::path(out_dir) / "report.csv").string(), report);
    std::string table = comparison_table(report);
    std::ofstream txt(std::filesystem::path(out_dir) / "comparison.txt");
    txt << table;

    std::map<std::string, std::vector<double>> bler, tput;
    for (const UeMetrics& m : report.per_ue) {
        bler[m.policy].push_back(m.achieved_bler());
        tput[m.policy].push_back(m.throughput_mbps);
    }
    write_cdf_svg((std::filesystem::path(out_dir) / "bler_cdf.svg").string(), "Per-UE BLER CDF",
                  "block error rate", bler);
    write_cdf_svg((std::filesystem::path(out_dir) / "throughput_cdf.svg").string(),
                  "Per-UE throughput CDF", "throughput [Mbps]", tput);

    std::cout << table;
    std::cout << "outputs: " << out_dir
              << "/report.csv, comparison.txt, bler_cdf.svg, throughput_cdf.svg\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage("missing command");
    std::string command = argv[1];
    try {
        if (command == "samples") return cmd_samples(argc, argv);
        if (command == "synth" || command == "sim" || command == "report") {
            CommonArgs args;
            std::string err;
            if (!parse_common(argc, argv, 2, args, err)) return usage(err);
            if (command == "synth") return cmd_synth(args);
            if (command == "sim") return cmd_sim(args);
            return cmd_report(args);
        }
        return usage("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
