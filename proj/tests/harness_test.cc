// Copyright 2026 The perminv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "perminv/errors.h"
#include "perminv/harness.h"

using namespace perminv;

namespace {

nlohmann::json grover_config() {
    return {{"experiment", "grover_sweep"}, {"n_bits", 4}, {"seed", 7}, {"mode", "exact"}};
}

std::string log_of(const std::vector<ResultRow> &rows) {
    std::ostringstream out;
    write_json_log(rows, out);
    return out.str();
}

size_t line_count(const std::string &s) {
    return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(config, defaults_filled_in_declaration_order) {
    auto cfg = ExperimentConfig::from_json(grover_config());
    EXPECT_EQ(cfg.experiment, "grover_sweep");
    EXPECT_EQ(cfg.n_bits, 4);
    EXPECT_EQ(cfg.trials, 1000u);
    EXPECT_EQ(cfg.integer("k_max"), -1);
    EXPECT_EQ(cfg.integer("perm_samples"), 2);
    auto j = cfg.to_json();
    EXPECT_FALSE(j.contains("threads"));
    EXPECT_EQ(j["params"].begin().key(), "k_max");
}

TEST(config, rejects_bad_fields) {
    auto expect_error = [](nlohmann::json j, const std::string &field) {
        try {
            ExperimentConfig::from_json(j);
            ADD_FAILURE() << "accepted " << j.dump();
        } catch (const ConfigError &e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    };
    auto base = grover_config();
    auto j = base;
    j.erase("seed");
    expect_error(j, "seed");
    j = base;
    j["n_bits"] = 40;
    expect_error(j, "n_bits");
    j = base;
    j["trials"] = 0;
    expect_error(j, "trials");
    j = base;
    j["mode"] = "approximate";
    expect_error(j, "mode");
    j = base;
    j["bogus"] = 1;
    expect_error(j, "bogus");
    j = base;
    j["params"] = {{"k_max", 5000}};
    expect_error(j, "k_max");
    j = base;
    j["params"] = {{"nope", 1}};
    expect_error(j, "nope");
    j = {{"experiment", "ow_qccra2_rp"}, {"seed", 1}, {"params", {{"adversary", "oracle"}}}};
    expect_error(j, "adversary");
    j = {{"experiment", "no_such_thing"}, {"seed", 1}};
    expect_error(j, "grover_sweep");
}

TEST(config, unsupported_mode_rejected) {
    nlohmann::json j = {{"experiment", "ow_qccra2_rp"}, {"seed", 1}, {"mode", "exact"}};
    EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
}

TEST(result_row, probability_range_enforced) {
    ResultRow r;
    r.probability("p", 0.5);
    EXPECT_THROW(r.probability("q", 1.5), ContractViolation);
    EXPECT_THROW(r.probability("q", -0.1), ContractViolation);
    r.bound("b", 0.25, "x / 4");
    EXPECT_EQ(r.bounds["b"]["formula"], "x / 4");
}

TEST(run_experiment, grover_sweep_matches_closed_form) {
    auto rows = run_experiment(ExperimentConfig::from_json(grover_config()));
    ASSERT_EQ(rows.size(), 4u);   // k = 0..floor(pi sqrt(16) / 4)
    for (size_t k = 0; k < rows.size(); k++) {
        double expect = std::pow(std::sin((2 * k + 1) * std::asin(0.25)), 2);
        EXPECT_NEAR(rows[k].measured["success"].get<double>(), expect, 1e-9);
        EXPECT_EQ(rows[k].measured["queries_used"].get<uint64_t>(), 2 * k);   // one forward and one inverse per iteration
        EXPECT_FALSE(rows[k].wall_clock_ms.has_value());
        EXPECT_EQ(rows[k].version, version_string());
    }
}

TEST(run_experiment, wall_clock_only_on_request) {
    auto j = grover_config();
    j["record_wall_clock"] = true;
    auto rows = run_experiment(ExperimentConfig::from_json(j));
    ASSERT_FALSE(rows.empty());
    EXPECT_TRUE(rows[0].wall_clock_ms.has_value());
    EXPECT_TRUE(rows[0].to_json().contains("wall_clock_ms"));
}

TEST(run_experiment, identical_bytes_for_1_and_8_threads) {
    std::vector<nlohmann::json> configs = {
        {{"experiment", "qrac_roundtrip"}, {"seed", 3},
            {"params", {{"encode_seeds", 10}, {"queries_per_seed", 10}, {"epsilon_perm_samples", 2}}}},
        {{"experiment", "swapping_lemma"}, {"seed", 4}, {"params", {{"count", 30}}}},
        {{"experiment", "ow_qccra2_rp"}, {"seed", 5}, {"trials", 500}, {"params", {{"adversary", "ciphertext_probe"}}}},
        {{"experiment", "unique_search"}, {"seed", 6}, {"trials", 100}, {"params", {{"domain_bits", 2}}}},
    };
    for (const auto &j : configs) {
        auto one = ExperimentConfig::from_json(j);
        one.threads = 1;
        auto eight = one;
        eight.threads = 8;
        EXPECT_EQ(log_of(run_experiment(one)), log_of(run_experiment(eight))) << j.dump();
        EXPECT_EQ(log_of(run_experiment(one)), log_of(run_experiment(one))) << j.dump();
    }
}

TEST(run_experiment, seed_changes_sampled_results) {
    nlohmann::json a = {{"experiment", "ow_qccra2_rp"}, {"seed", 1}, {"trials", 200}};
    auto b = a;
    b["seed"] = 2;
    EXPECT_NE(log_of(run_experiment(ExperimentConfig::from_json(a))),
        log_of(run_experiment(ExperimentConfig::from_json(b))));
}

TEST(plot_data_csv, header_only_for_no_rows) {
    EXPECT_EQ(plot_data_csv({}, {"measured.k", "measured.success"}), "measured.k,measured.success\n");
}

TEST(plot_data_csv, rows_and_round_trip_precision) {
    std::vector<ResultRow> rows(3);
    double values[] = {0.1, 1.0 / 3.0, 2.5e-17};
    for (int i = 0; i < 3; i++) {
        rows[i].value("i", i);
        rows[i].value("x", values[i]);
    }
    auto csv = plot_data_csv(rows, {"measured.i", "measured.x"});
    EXPECT_EQ(line_count(csv), 4u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "measured.i,measured.x");
    for (int i = 0; i < 3; i++) {
        std::getline(in, line);
        auto comma = line.find(',');
        EXPECT_EQ(std::stoi(line.substr(0, comma)), i);
        EXPECT_EQ(std::strtod(line.substr(comma + 1).c_str(), nullptr), values[i]);
    }
}

TEST(plot_data_csv, quotes_text_with_separators) {
    std::vector<ResultRow> rows(1);
    rows[0].value("s", "a,b \"c\"");
    EXPECT_EQ(plot_data_csv(rows, {"measured.s"}), "measured.s\n\"a,b \"\"c\"\"\"\n");
}

TEST(plot_data_csv, missing_column_names_alternatives) {
    auto rows = run_experiment(ExperimentConfig::from_json(grover_config()));
    try {
        plot_data_csv(rows, {"measured.nope"});
        FAIL();
    } catch (const ConfigError &e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("measured.nope"), std::string::npos);
        EXPECT_NE(msg.find("measured.success"), std::string::npos);
    }
}

TEST(registry, names_unique_and_limits_consistent) {
    std::set<std::string> names;
    for (const auto &e : experiment_registry()) {
        EXPECT_TRUE(names.insert(e.name).second) << e.name;
        EXPECT_LE(e.min_n, e.default_n);
        EXPECT_LE(e.default_n, e.max_n);
        EXPECT_FALSE(e.modes.empty());
        EXPECT_TRUE(e.run);
    }
    EXPECT_THROW(find_experiment("missing"), ConfigError);
}

TEST(registry, every_library_operation_is_exercised) {
    std::set<std::string> covered;
    for (const auto &e : experiment_registry()) {
        covered.insert(e.covers.begin(), e.covers.end());
    }
    for (const char *op : {"amplify_search", "amplify_search_restricted", "amplify_decision", "required_ell_decision",
             "search_from_decision", "unique_search_from_adpi", "measure_distributional_error", "sample_subset_R",
             "good_set_G", "encode", "decode", "chernoff_lower_tail", "reverse_markov", "averaging_subset",
             "swapping_check", "ow_qccra2_rp_experiment"}) {
        EXPECT_TRUE(covered.count(op)) << op;
    }
}

TEST(registry, every_experiment_runs_at_defaults_with_small_trials) {
    for (const auto &e : experiment_registry()) {
        nlohmann::json j = {{"experiment", e.name}, {"seed", 11}, {"trials", 50}};
        if (e.name == "swapping_lemma") {
            j["params"] = {{"count", 5}};
        } else if (e.name == "qrac_roundtrip") {
            j["params"] = {{"encode_seeds", 3}, {"queries_per_seed", 3}, {"epsilon_perm_samples", 1}};
        } else if (e.name == "tail_bounds") {
            j["params"] = {{"tables", 10}};
        }
        auto rows = run_experiment(ExperimentConfig::from_json(j));
        EXPECT_FALSE(rows.empty()) << e.name;
        for (const auto &r : rows) {
            EXPECT_EQ(r.config["experiment"], e.name);
        }
    }
}

TEST(ow_qccra2_rp, adversaries_score_as_expected) {
    auto score = [](const char *adv, uint64_t trials) {
        nlohmann::json j = {
            {"experiment", "ow_qccra2_rp"}, {"seed", 21}, {"trials", trials}, {"params", {{"adversary", adv}}}};
        return ow_qccra2_rp_experiment(ExperimentConfig::from_json(j));
    };
    auto guess = score("random_guess", 4000);
    EXPECT_LE(std::abs(guess.measured["z_vs_half"].get<double>()), 4);
    EXPECT_EQ(guess.measured["phase2_queries"].get<uint64_t>(), 0u);
    auto probe = score("ciphertext_probe", 4000);
    EXPECT_LE(std::abs(probe.measured["z_vs_half"].get<double>()), 4);
    EXPECT_EQ(probe.measured["puncture_failures"].get<uint64_t>(), 0u);
    // Dec(c), then Enc and Dec per probe; an Enc that hits c is redrawn.
    EXPECT_GE(probe.measured["phase2_queries"].get<uint64_t>(), 1u + 2u * 4u);
    EXPECT_EQ(score("full_key", 300).measured["success"].get<double>(), 1.0);
}

TEST(selftest, passes_and_is_thread_independent) {
    auto one = run_selftest(1);
    auto eight = run_selftest(8);
    EXPECT_TRUE(one.passed());
    EXPECT_TRUE(eight.passed());
    EXPECT_EQ(log_of(one.rows), log_of(eight.rows));
    std::set<std::string> experiments;
    for (const auto &c : selftest_cases(1)) {
        experiments.insert(c.config.experiment);
    }
    EXPECT_EQ(experiments.size(), experiment_registry().size());
}

TEST(threads_from_env, reads_positive_integers_only) {
    ::setenv("PERMINV_THREADS", "6", 1);
    EXPECT_EQ(threads_from_env(1), 6);
    ::setenv("PERMINV_THREADS", "zero", 1);
    EXPECT_THROW(threads_from_env(3), ConfigError);
    ::setenv("PERMINV_THREADS", "0", 1);
    EXPECT_THROW(threads_from_env(2), ConfigError);
    ::unsetenv("PERMINV_THREADS");
    EXPECT_EQ(threads_from_env(5), 5);
}
