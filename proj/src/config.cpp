#include "olla/config.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "olla/policies.hpp"

namespace olla {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Ordered key/value pairs from file plus overrides; later entries win.
struct RawConfig {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        const std::string* hit = nullptr;
        for (const auto& [k, v] : entries)
            if (k == key) hit = &v;
        return hit;
    }
};

RawConfig read_raw(const std::string& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    RawConfig raw;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        raw.entries.emplace_back(key, value);
    }
    for (const Override& o : overrides) raw.entries.emplace_back(o.key, o.value);
    return raw;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    }
    if (used != value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    return v;
}

long parse_long(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    }
    if (used != value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    long v = parse_long(key, value);
    if (v < INT_MIN || v > INT_MAX) throw ConfigError("key '" + key + "': out of range");
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + value + "' is not an unsigned integer");
    }
    if (used != value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not an unsigned integer");
    return v;
}

const std::set<std::string> kKnownAlgos = {"pbs",      "mab", "median_elimination",
                                           "thompson", "ucb", "clustering",
                                           "no_olla",  "fixed"};

std::string resolve_relative(const std::string& config_path, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_absolute()) return value;
    return (std::filesystem::path(config_path).parent_path() / p).string();
}

}  // namespace

ExplorationParams ExperimentConfig::exploration_for(const PolicySpec& spec) const {
    ExplorationParams p = exploration;
    if (spec.target_bler >= 0.0) p.beta = 1.0 - spec.target_bler;
    return p;
}

void ExperimentConfig::validate() const {
    if (num_ues < 1) throw ConfigError("num_ues must be >= 1");
    if (duration_subframes < 1) throw ConfigError("duration_subframes must be >= 1");
    if (policies.empty()) throw ConfigError("at least one policy is required");
    std::set<std::string> names;
    for (const PolicySpec& spec : policies) {
        if (spec.name.empty()) throw ConfigError("policy name must not be empty");
        if (!names.insert(spec.name).second)
            throw ConfigError("duplicate policy name '" + spec.name + "'");
        if (!kKnownAlgos.count(spec.algo))
            throw ConfigError("policy '" + spec.name + "': unknown algo '" + spec.algo + "'");
        if (spec.target_bler >= 0.0 && (spec.target_bler <= 0.0 || spec.target_bler >= 0.5))
            throw ConfigError("policy '" + spec.name + "': target_bler must lie in (0, 0.5)");
        if (spec.nack_run_threshold < 1 || spec.ack_run_threshold < 1)
            throw ConfigError("policy '" + spec.name + "': run thresholds must be >= 1");
        if (spec.offset_range < 0)
            throw ConfigError("policy '" + spec.name + "': offset_range must be >= 0");

        ExplorationParams params = exploration_for(spec);
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("policy '" + spec.name + "': " + e.what());
        }
        long need = 0;
        if (spec.is_target_search()) {
            need = required_samples(params) * std::max(1, max_distinct_arms(params));
        } else if (spec.algo == "median_elimination") {
            need = median_elimination_total_samples(params);
        }
        if (need > duration_subframes)
            throw ConfigError("policy '" + spec.name + "': duration_subframes=" +
                              std::to_string(duration_subframes) +
                              " cannot fit exploration; need at least " + std::to_string(need));
    }
    if (ue.mean_sinr_min > ue.mean_sinr_max)
        throw ConfigError("ue.mean_sinr_min must be <= ue.mean_sinr_max");
    if (ue.cqi_bias_min > ue.cqi_bias_max)
        throw ConfigError("ue.cqi_bias_min must be <= ue.cqi_bias_max");
    if (ue.cqi_bias_min < -5 || ue.cqi_bias_max > 5)
        throw ConfigError("ue.cqi_bias range must lie within [-5, 5]");
    if (ue.ar_coefficient < 0.0 || ue.ar_coefficient >= 1.0)
        throw ConfigError("ue.ar_coefficient must lie in [0, 1)");
    if (ue.sinr_std < 0.0) throw ConfigError("ue.sinr_std must be >= 0");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

void SynthConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (!kKnownAlgos.count(policy) || policy == "fixed" || policy == "clustering" ||
        policy == "no_olla")
        throw ConfigError("synth policy must be one of pbs, mab, median_elimination, "
                          "thompson, ucb");
    if (arm_betas.empty() || arm_betas.size() % 2 == 0)
        throw ConfigError("arm_betas must list an odd number of arms (2L+1)");
    for (std::size_t i = 0; i < arm_betas.size(); ++i) {
        if (arm_betas[i] < 0.0 || arm_betas[i] > 1.0)
            throw ConfigError("arm_betas entries must lie in [0, 1]");
        if (i > 0 && arm_betas[i] > arm_betas[i - 1])
            throw ConfigError("arm_betas must be nonincreasing in the offset");
    }
    ExplorationParams p = exploration;
    p.big_l = static_cast<int>(arm_betas.size() / 2);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<Override>& overrides) {
    RawConfig raw = read_raw(path, overrides);
    ExperimentConfig cfg;

    const std::string* policy_list = raw.find("policies");
    if (!policy_list) throw ConfigError(path + ": missing required key 'policies'");
    std::vector<std::string> names = split_list(*policy_list);
    if (names.empty()) throw ConfigError(path + ": 'policies' lists no names");
    for (const std::string& name : names) {
        PolicySpec spec;
        spec.name = name;
        cfg.policies.push_back(spec);
    }

    auto policy_by_name = [&](const std::string& name) -> PolicySpec* {
        for (PolicySpec& spec : cfg.policies)
            if (spec.name == name) return &spec;
        return nullptr;
    };

    for (const auto& [key, value] : raw.entries) {
        if (key == "policies") {
            // consumed above; repeated declarations must agree
            if (split_list(value) != names)
                throw ConfigError("'policies' listed twice with different names");
        } else if (key == "num_ues") {
            cfg.num_ues = parse_int(key, value);
        } else if (key == "duration_subframes") {
            cfg.duration_subframes = parse_long(key, value);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_u64(key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "mcs_table") {
            cfg.mcs_table_path = resolve_relative(path, value);
        } else if (key == "exploration.beta") {
            cfg.exploration.beta = parse_double(key, value);
        } else if (key == "exploration.epsilon") {
            cfg.exploration.epsilon = parse_double(key, value);
        } else if (key == "exploration.delta") {
            cfg.exploration.delta = parse_double(key, value);
        } else if (key == "exploration.big_l") {
            cfg.exploration.big_l = parse_int(key, value);
        } else if (key == "ue.mean_sinr_min") {
            cfg.ue.mean_sinr_min = parse_double(key, value);
        } else if (key == "ue.mean_sinr_max") {
            cfg.ue.mean_sinr_max = parse_double(key, value);
        } else if (key == "ue.cqi_bias_min") {
            cfg.ue.cqi_bias_min = parse_int(key, value);
        } else if (key == "ue.cqi_bias_max") {
            cfg.ue.cqi_bias_max = parse_int(key, value);
        } else if (key == "ue.ar_coefficient") {
            cfg.ue.ar_coefficient = parse_double(key, value);
        } else if (key == "ue.sinr_std") {
            cfg.ue.sinr_std = parse_double(key, value);
        } else if (key.rfind("policy.", 0) == 0) {
            std::size_t dot = key.find('.', 7);
            if (dot == std::string::npos)
                throw ConfigError("unknown key '" + key + "'");
            std::string name = key.substr(7, dot - 7);
            std::string field = key.substr(dot + 1);
            PolicySpec* spec = policy_by_name(name);
            if (!spec)
                throw ConfigError("key '" + key + "' names policy '" + name +
                                  "' which is not listed under 'policies'");
            if (field == "algo") {
                spec->algo = value;
            } else if (field == "target_bler") {
                spec->target_bler = parse_double(key, value);
            } else if (field == "nack_run_threshold") {
                spec->nack_run_threshold = parse_int(key, value);
            } else if (field == "ack_run_threshold") {
                spec->ack_run_threshold = parse_int(key, value);
            } else if (field == "offset_range") {
                spec->offset_range = parse_int(key, value);
            } else if (field == "offset") {
                spec->fixed_offset = parse_int(key, value);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    for (const PolicySpec& spec : cfg.policies)
        if (spec.algo.empty())
            throw ConfigError("policy '" + spec.name + "': missing 'policy." + spec.name +
                              ".algo'");
    cfg.validate();
    return cfg;
}

SynthConfig load_synth_config(const std::string& path, const std::vector<Override>& overrides) {
    RawConfig raw = read_raw(path, overrides);
    SynthConfig cfg;
    for (const auto& [key, value] : raw.entries) {
        if (key == "trials") {
            cfg.trials = parse_long(key, value);
        } else if (key == "policy") {
            cfg.policy = value;
        } else if (key == "arm_betas") {
            cfg.arm_betas.clear();
            for (const std::string& item : split_list(value))
                cfg.arm_betas.push_back(parse_double(key, item));
        } else if (key == "horizon") {
            cfg.horizon = parse_long(key, value);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_u64(key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "exploration.beta") {
            cfg.exploration.beta = parse_double(key, value);
        } else if (key == "exploration.epsilon") {
            cfg.exploration.epsilon = parse_double(key, value);
        } else if (key == "exploration.delta") {
            cfg.exploration.delta = parse_double(key, value);
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    if (cfg.arm_betas.empty()) throw ConfigError(path + ": missing required key 'arm_betas'");
    cfg.exploration.big_l = static_cast<int>(cfg.arm_betas.size() / 2);
    cfg.validate();
    return cfg;
}

Override parse_override(const std::string& key_equals_value) {
    std::size_t eq = key_equals_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects KEY=VALUE, got '" + key_equals_value + "'");
    Override o;
    o.key = trim(key_equals_value.substr(0, eq));
    o.value = trim(key_equals_value.substr(eq + 1));
    return o;
}

}  // namespace olla
