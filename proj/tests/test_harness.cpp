#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "olla/config.hpp"
#include "olla/harness.hpp"

using namespace olla;

namespace {

std::string write_temp_config(const std::string& name, const std::string& body) {
    std::filesystem::path path = std::filesystem::path("tmp_cfg") / name;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << body;
    return path.string();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallConfig = R"(# two-policy smoke experiment
num_ues = 2
duration_subframes = 1500
master_seed = 42
output_dir = tmp_out/small

exploration.beta = 0.9
exploration.epsilon = 0.05
exploration.delta = 0.05
exploration.big_l = 1

ue.mean_sinr_min = 4
ue.mean_sinr_max = 20
ue.cqi_bias_min = 1
ue.cqi_bias_max = 3
ue.ar_coefficient = 0.97
ue.sinr_std = 2.0

policies = mab10, no_olla
policy.mab10.algo = mab
policy.mab10.target_bler = 0.10
policy.no_olla.algo = no_olla
)";

}  // namespace

TEST_CASE("config load, overrides and unknown keys") {
    std::string path = write_temp_config("small.cfg", kSmallConfig);
    ExperimentConfig cfg = load_experiment_config(path);
    CHECK(cfg.num_ues == 2);
    CHECK(cfg.duration_subframes == 1500);
    CHECK(cfg.policies.size() == 2);
    CHECK(cfg.policies[0].name == "mab10");
    CHECK(cfg.policies[0].algo == "mab");
    CHECK(cfg.policies[0].target_bler == doctest::Approx(0.10));
    CHECK(cfg.exploration_for(cfg.policies[0]).beta == doctest::Approx(0.90));
    CHECK(cfg.policies[1].algo == "no_olla");

    ExperimentConfig overridden = load_experiment_config(
        path, {{"num_ues", "3"}, {"master_seed", "7"}, {"policy.mab10.target_bler", "0.2"}});
    CHECK(overridden.num_ues == 3);
    CHECK(overridden.master_seed == 7);
    CHECK(overridden.policies[0].target_bler == doctest::Approx(0.2));

    CHECK_THROWS_AS(load_experiment_config(path, {{"no_such_key", "1"}}), ConfigError);
    CHECK_THROWS_AS(load_experiment_config(path, {{"policy.ghost.algo", "mab"}}), ConfigError);
    CHECK_THROWS_AS(load_experiment_config(path, {{"num_ues", "two"}}), ConfigError);
}

TEST_CASE("config rejects runs too short for exploration") {
    std::string path = write_temp_config("small.cfg", kSmallConfig);
    try {
        load_experiment_config(path, {{"duration_subframes", "100"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        // the message names the computed minimum: N * k = 318 * 2
        CHECK(std::string(e.what()).find("636") != std::string::npos);
    }
}

TEST_CASE("override parsing") {
    Override o = parse_override("ue.sinr_std=3.5");
    CHECK(o.key == "ue.sinr_std");
    CHECK(o.value == "3.5");
    CHECK_THROWS_AS(parse_override("nonsense"), ConfigError);
    CHECK_THROWS_AS(parse_override("=5"), ConfigError);
}

TEST_CASE("compute_cdf") {
    auto single = compute_cdf({5.0});
    REQUIRE(single.size() == 1);
    CHECK(single[0].first == 5.0);
    CHECK(single[0].second == 1.0);

    auto four = compute_cdf({4.0, 2.0, 1.0, 3.0});
    REQUIRE(four.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(four[i].first == doctest::Approx(static_cast<double>(i + 1)));
        CHECK(four[i].second == doctest::Approx(0.25 * static_cast<double>(i + 1)));
    }
    CHECK_THROWS_AS(compute_cdf({}), std::invalid_argument);
}

TEST_CASE("exploration stays inside the sample budget in a full run") {
    std::string path = write_temp_config("small.cfg", kSmallConfig);
    ExperimentConfig cfg = load_experiment_config(path);
    cfg.output_dir = "tmp_out/budget";
    MetricsReport report = run_experiment(cfg);
    ExplorationParams params = cfg.exploration_for(cfg.policies[0]);
    long budget = required_samples(params) * max_distinct_arms(params);
    for (const UeMetrics& m : report.ues_of("mab10")) {
        CHECK(m.exploration_samples <= budget);
        CHECK(m.exploration_samples > 0);
    }
    // cdf accessors cover each policy's population
    CHECK(report.bler_cdf("mab10").size() == 2);
    CHECK(report.throughput_cdf("no_olla").back().second == doctest::Approx(1.0));
}

TEST_CASE("single no-olla ue keeps offset zero") {
    std::string body = R"(num_ues = 1
duration_subframes = 100
master_seed = 9
output_dir = tmp_out/noolla
policies = no_olla
policy.no_olla.algo = no_olla
)";
    std::string path = write_temp_config("noolla.cfg", body);
    MetricsReport report = run_experiment(load_experiment_config(path));
    REQUIRE(report.per_ue.size() == 1);
    CHECK(report.per_ue[0].mean_offset == 0.0);
    CHECK(report.per_ue[0].exploration_samples == 0);
    REQUIRE(report.summary.size() == 1);
    CHECK(report.summary[0].avg_offset == 0.0);
}

TEST_CASE("identical seeds give byte-identical outputs") {
    std::string path = write_temp_config("small.cfg", kSmallConfig);
    ExperimentConfig cfg = load_experiment_config(path);

    cfg.output_dir = "tmp_out/run_a";
    run_experiment(cfg);
    cfg.output_dir = "tmp_out/run_b";
    run_experiment(cfg);

    for (const char* file : {"traces.csv", "report.csv", "per_ue.csv"}) {
        CHECK(read_file(std::filesystem::path("tmp_out/run_a") / file) ==
              read_file(std::filesystem::path("tmp_out/run_b") / file));
    }

    // a different master seed changes the trace
    ExperimentConfig reseeded = load_experiment_config(path, {{"master_seed", "43"}});
    reseeded.output_dir = "tmp_out/run_c";
    run_experiment(reseeded);
    CHECK(read_file("tmp_out/run_a/traces.csv") != read_file("tmp_out/run_c/traces.csv"));
}

TEST_CASE("traces file round trip") {
    std::vector<TransmissionRecord> records;
    for (long t = 0; t < 3; ++t) {
        TransmissionRecord r;
        r.time_index = t;
        r.ue_id = 4;
        r.cqi = 7;
        r.offset = t == 2 ? -1 : 0;
        r.mcs = 12;
        r.ack = t != 1;
        r.bits = r.ack ? 4830.0 : 0.0;
        r.phase = t == 0 ? Phase::exploring : Phase::switching;
        records.push_back(r);
    }
    std::filesystem::create_directories("tmp_out");
    {
        std::ofstream out("tmp_out/mini_traces.csv");
        write_traces_header(out);
        write_traces_csv(out, records, "mab10");
    }
    {
        std::ifstream in("tmp_out/mini_traces.csv");
        std::string line;
        int lines = 0;
        while (std::getline(in, line)) ++lines;
        CHECK(lines == 4);  // header + one line per record
    }
    auto rows = read_traces_csv("tmp_out/mini_traces.csv");
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].first == "mab10");
        CHECK(rows[i].second.time_index == records[i].time_index);
        CHECK(rows[i].second.ue_id == records[i].ue_id);
        CHECK(rows[i].second.cqi == records[i].cqi);
        CHECK(rows[i].second.offset == records[i].offset);
        CHECK(rows[i].second.mcs == records[i].mcs);
        CHECK(rows[i].second.ack == records[i].ack);
        CHECK(rows[i].second.bits == records[i].bits);
        CHECK(rows[i].second.phase == records[i].phase);
    }

    // header-only file round-trips to zero records
    {
        std::ofstream out("tmp_out/empty_traces.csv");
        write_traces_header(out);
    }
    CHECK(read_traces_csv("tmp_out/empty_traces.csv").empty());
}

TEST_CASE("report rebuilt from traces matches the in-memory metrics") {
    std::string path = write_temp_config("small.cfg", kSmallConfig);
    ExperimentConfig cfg = load_experiment_config(path);
    cfg.output_dir = "tmp_out/rebuild";
    MetricsReport live = run_experiment(cfg);
    MetricsReport rebuilt = report_from_traces("tmp_out/rebuild/traces.csv");

    REQUIRE(rebuilt.per_ue.size() == live.per_ue.size());
    for (std::size_t i = 0; i < live.per_ue.size(); ++i) {
        CHECK(rebuilt.per_ue[i].policy == live.per_ue[i].policy);
        CHECK(rebuilt.per_ue[i].ue_id == live.per_ue[i].ue_id);
        CHECK(rebuilt.per_ue[i].acks == live.per_ue[i].acks);
        CHECK(rebuilt.per_ue[i].nacks == live.per_ue[i].nacks);
        CHECK(rebuilt.per_ue[i].throughput_mbps == live.per_ue[i].throughput_mbps);
        CHECK(rebuilt.per_ue[i].mean_offset == live.per_ue[i].mean_offset);
        CHECK(rebuilt.per_ue[i].exploration_samples == live.per_ue[i].exploration_samples);
    }
    REQUIRE(rebuilt.summary.size() == live.summary.size());
    for (std::size_t i = 0; i < live.summary.size(); ++i) {
        CHECK(rebuilt.summary[i].policy == live.summary[i].policy);
        CHECK(rebuilt.summary[i].avg_throughput_mbps == live.summary[i].avg_throughput_mbps);
        CHECK(rebuilt.summary[i].avg_bler == live.summary[i].avg_bler);
        CHECK(rebuilt.summary[i].avg_offset == live.summary[i].avg_offset);
        CHECK(rebuilt.summary[i].avg_exploration_samples ==
              live.summary[i].avg_exploration_samples);
    }

    // comparison table renders one row per policy
    std::string table = comparison_table(live);
    CHECK(table.find("mab10") != std::string::npos);
    CHECK(table.find("no_olla") != std::string::npos);
}

TEST_CASE("bundled default config loads") {
    ExperimentConfig cfg = load_experiment_config(std::string(OLLA_CONFIG_DIR) + "/default.cfg");
    CHECK(cfg.num_ues == 45);
    CHECK(cfg.duration_subframes == 5000);
    CHECK(cfg.policies.size() == 4);
    CHECK(cfg.ue.cqi_bias_min == 1);
    CHECK(cfg.ue.cqi_bias_max == 3);

    // the editable table shipped next to it pins the built-in curves
    McsTable shipped = McsTable::load_csv(std::string(OLLA_CONFIG_DIR) + "/mcs_table.csv");
    McsTable built_in = McsTable::built_in();
    for (int m = 0; m < built_in.size(); ++m) {
        CHECK(shipped.rate(m) == built_in.rate(m));
        CHECK(shipped.entry(m).sinr_50pct == doctest::Approx(built_in.entry(m).sinr_50pct));
    }
}

TEST_CASE("synth config validation") {
    std::string body = R"(trials = 10
policy = pbs
arm_betas = 0.98, 0.96, 0.93, 0.90, 0.85, 0.78, 0.70
master_seed = 5
output_dir = tmp_out/synth
exploration.beta = 0.9
exploration.epsilon = 0.05
exploration.delta = 0.05
)";
    std::string path = write_temp_config("synth.cfg", body);
    SynthConfig cfg = load_synth_config(path);
    CHECK(cfg.trials == 10);
    CHECK(cfg.arm_betas.size() == 7);
    CHECK(cfg.exploration.big_l == 3);

    CHECK_THROWS_AS(
        load_synth_config(path, {{"arm_betas", "0.5, 0.9, 0.7"}}),  // not monotone
        ConfigError);
    CHECK_THROWS_AS(load_synth_config(path, {{"policy", "no_olla"}}), ConfigError);
}
