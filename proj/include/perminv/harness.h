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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "perminv/inverter.h"

namespace perminv {

using ordered_json = nlohmann::ordered_json;

/// "0.1.0" or "0.1.0+<git describe>" when the build knew its commit.
std::string version_string();

/// A range-checked experiment parameter.
struct ParamSpec {
    enum class Kind { integer, real, string, boolean };
    std::string name;
    Kind kind = Kind::integer;
    double min = 0;
    double max = 0;
    nlohmann::json default_value;
    std::vector<std::string> choices;   // string parameters only
};

struct ExperimentConfig {
    std::string experiment;
    int n_bits = 0;
    uint64_t seed = 0;
    uint64_t trials = 0;
    EvalMode::Kind mode = EvalMode::Kind::exact;
    /// Every declared parameter, defaults filled in, in declaration order.
    ordered_json params = ordered_json::object();
    /// Execution detail only: never changes a result byte.
    int threads = 1;
    bool record_wall_clock = false;

    /// Validates against the registry. Throws ConfigError naming the field.
    static ExperimentConfig from_json(const nlohmann::json &j);
    ordered_json to_json() const;

    int64_t integer(const std::string &name) const;
    double real(const std::string &name) const;
    std::string text(const std::string &name) const;
    bool flag(const std::string &name) const;
};

/// One result line: the config echo, measured values, the bounds they are
/// compared against (each with the formula that produced it) and the version.
struct ResultRow {
    ordered_json config;
    ordered_json measured = ordered_json::object();
    ordered_json bounds = ordered_json::object();
    std::string version;
    std::optional<double> wall_clock_ms;

    void value(const std::string &name, const ordered_json &v);
    /// Like value(), rejecting anything outside [0, 1].
    void probability(const std::string &name, double p);
    void bound(const std::string &name, double v, const std::string &formula);

    ordered_json to_json() const;
    /// Flattened "section.name" columns in a stable order.
    std::vector<std::pair<std::string, ordered_json>> columns() const;
};

struct ExperimentInfo {
    std::string name;
    std::string summary;
    int min_n = 1;
    int max_n = 10;
    int default_n = 3;
    uint64_t default_trials = 1000;
    std::vector<EvalMode::Kind> modes;
    std::vector<ParamSpec> params;
    /// Library operations the experiment exercises.
    std::vector<std::string> covers;
    std::function<std::vector<ResultRow>(const ExperimentConfig &)> run;
};

const std::vector<ExperimentInfo> &experiment_registry();
/// Throws ConfigError for unknown names.
const ExperimentInfo &find_experiment(const std::string &name);

/// Runs the experiment; rows are identical for every thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig &config);

/// The OW-QCCRA2 game against the random-permutation scheme.
ResultRow ow_qccra2_rp_experiment(const ExperimentConfig &config);

/// One JSON object per row, LF-terminated.
void write_json_log(const std::vector<ResultRow> &rows, std::ostream &out);

/// CSV with a header of `columns`, '.' decimals, LF endings. Doubles use the
/// shortest representation that parses back to the same value. Throws
/// ConfigError naming the available columns when one is missing.
std::string plot_data_csv(const std::vector<ResultRow> &rows, const std::vector<std::string> &columns);
void emit_plot_data(const std::vector<ResultRow> &rows, const std::vector<std::string> &columns, const std::string &path);

/// Small fixed configurations of every experiment, each with the invariant
/// it must satisfy.
struct SelftestCase {
    ExperimentConfig config;
    std::string invariant;
    std::function<bool(const std::vector<ResultRow> &)> check;
};
std::vector<SelftestCase> selftest_cases(int threads);

struct SelftestReport {
    std::vector<ResultRow> rows;
    std::vector<std::pair<std::string, bool>> checks;
    bool passed() const;
};
SelftestReport run_selftest(int threads);

/// PERMINV_THREADS if set, else `fallback`. Throws ConfigError unless the
/// variable is an integer in [1, 1024].
int threads_from_env(int fallback);

}  // namespace perminv
