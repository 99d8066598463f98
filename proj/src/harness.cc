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

#include "perminv/harness.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "perminv/errors.h"

namespace perminv {

std::string version_string() {
    std::string v = PERMINV_VERSION;
#ifdef PERMINV_GIT_DESCRIBE
    std::string d = PERMINV_GIT_DESCRIBE;
    if (!d.empty()) {
        v += "+" + d;
    }
#endif
    return v;
}

int threads_from_env(int fallback) {
    const char *env = std::getenv("PERMINV_THREADS");
    if (env == nullptr || *env == '\0') {
        return fallback;
    }
    int v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
    if (ec != std::errc() || *ptr != '\0' || v < 1 || v > 1024) {
        throw ConfigError("PERMINV_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    return v;
}

// ---- config --------------------------------------------------------------------

namespace {

const char *mode_name(EvalMode::Kind k) {
    return k == EvalMode::Kind::exact ? "exact" : "sampled";
}

uint64_t read_unsigned(const nlohmann::json &j, const std::string &field, uint64_t lo, uint64_t hi) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<int64_t>() < 0)) {
        throw ConfigError(field + ": expected a non-negative integer");
    }
    uint64_t v = j.get<uint64_t>();
    if (v < lo || v > hi) {
        throw ConfigError(field + ": " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

nlohmann::json read_param(const ParamSpec &spec, const nlohmann::json &j) {
    std::string field = "params." + spec.name;
    switch (spec.kind) {
        case ParamSpec::Kind::integer: {
            if (!j.is_number_integer()) {
                throw ConfigError(field + ": expected an integer");
            }
            int64_t v = j.get<int64_t>();
            if (static_cast<double>(v) < spec.min || static_cast<double>(v) > spec.max) {
                throw ConfigError(field + ": " + std::to_string(v) + " outside [" + format_number(spec.min) + ", " +
                                  format_number(spec.max) + "]");
            }
            return v;
        }
        case ParamSpec::Kind::real: {
            if (!j.is_number()) {
                throw ConfigError(field + ": expected a number");
            }
            double v = j.get<double>();
            if (!(v >= spec.min && v <= spec.max)) {
                throw ConfigError(field + ": " + format_number(v) + " outside [" + format_number(spec.min) + ", " +
                                  format_number(spec.max) + "]");
            }
            return v;
        }
        case ParamSpec::Kind::string: {
            if (!j.is_string()) {
                throw ConfigError(field + ": expected a string");
            }
            auto v = j.get<std::string>();
            if (std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
                std::string all;
                for (const auto &c : spec.choices) {
                    all += (all.empty() ? "" : ", ") + c;
                }
                throw ConfigError(field + ": '" + v + "' is not one of {" + all + "}");
            }
            return v;
        }
        case ParamSpec::Kind::boolean:
            if (!j.is_boolean()) {
                throw ConfigError(field + ": expected true or false");
            }
            return j;
    }
    throw ConfigError(field + ": unsupported parameter kind");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    static const std::vector<std::string> known = {
        "experiment", "n_bits", "seed", "trials", "mode", "params", "threads", "record_wall_clock"};
    for (const auto &[key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(key + ": unknown config field");
        }
    }
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        throw ConfigError("experiment: required string field");
    }
    ExperimentConfig c;
    c.experiment = j["experiment"].get<std::string>();
    const ExperimentInfo &info = find_experiment(c.experiment);

    if (!j.contains("seed")) {
        throw ConfigError("seed: required (seeds are never taken from the clock)");
    }
    c.seed = read_unsigned(j["seed"], "seed", 0, UINT64_MAX);
    c.n_bits = j.contains("n_bits")
                   ? static_cast<int>(read_unsigned(j["n_bits"], "n_bits", info.min_n, info.max_n))
                   : info.default_n;
    c.trials = j.contains("trials") ? read_unsigned(j["trials"], "trials", 1, 10000000) : info.default_trials;
    c.mode = info.modes.front();
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) {
            throw ConfigError("mode: expected \"exact\" or \"sampled\"");
        }
        auto m = j["mode"].get<std::string>();
        if (m != "exact" && m != "sampled") {
            throw ConfigError("mode: expected \"exact\" or \"sampled\", got '" + m + "'");
        }
        c.mode = m == "exact" ? EvalMode::Kind::exact : EvalMode::Kind::sampled;
        if (std::find(info.modes.begin(), info.modes.end(), c.mode) == info.modes.end()) {
            throw ConfigError("mode: experiment '" + info.name + "' does not support " + m + " evaluation");
        }
    }
    nlohmann::json given = j.value("params", nlohmann::json::object());
    if (!given.is_object()) {
        throw ConfigError("params: expected an object");
    }
    for (const auto &[key, _] : given.items()) {
        bool declared = std::any_of(info.params.begin(), info.params.end(), [&](const ParamSpec &p) {
            return p.name == key;
        });
        if (!declared) {
            throw ConfigError("params." + key + ": unknown parameter for '" + info.name + "'");
        }
    }
    for (const auto &spec : info.params) {
        c.params[spec.name] = read_param(spec, given.contains(spec.name) ? given[spec.name] : spec.default_value);
    }
    int threads = j.contains("threads") ? static_cast<int>(read_unsigned(j["threads"], "threads", 1, 1024)) : 1;
    c.threads = threads_from_env(threads);
    if (j.contains("record_wall_clock")) {
        if (!j["record_wall_clock"].is_boolean()) {
            throw ConfigError("record_wall_clock: expected true or false");
        }
        c.record_wall_clock = j["record_wall_clock"].get<bool>();
    }
    return c;
}

ordered_json ExperimentConfig::to_json() const {
    ordered_json j;
    j["experiment"] = experiment;
    j["n_bits"] = n_bits;
    j["seed"] = seed;
    j["trials"] = trials;
    j["mode"] = mode_name(mode);
    j["params"] = params;
    return j;
}

int64_t ExperimentConfig::integer(const std::string &name) const {
    return params.at(name).get<int64_t>();
}
double ExperimentConfig::real(const std::string &name) const {
    return params.at(name).get<double>();
}
std::string ExperimentConfig::text(const std::string &name) const {
    return params.at(name).get<std::string>();
}
bool ExperimentConfig::flag(const std::string &name) const {
    return params.at(name).get<bool>();
}

// ---- rows ----------------------------------------------------------------------

void ResultRow::value(const std::string &name, const ordered_json &v) {
    measured[name] = v;
}

void ResultRow::probability(const std::string &name, double p) {
    if (!(p >= -1e-12 && p <= 1 + 1e-12)) {
        throw ContractViolation("measured probability '" + name + "' = " + format_number(p) + " is outside [0, 1]");
    }
    measured[name] = std::clamp(p, 0.0, 1.0);
}

void ResultRow::bound(const std::string &name, double v, const std::string &formula) {
    bounds[name] = ordered_json{{"value", v}, {"formula", formula}};
}

ordered_json ResultRow::to_json() const {
    ordered_json j;
    j["config"] = config;
    j["measured"] = measured;
    j["bounds"] = bounds;
    j["version"] = version;
    if (wall_clock_ms) {
        j["wall_clock_ms"] = *wall_clock_ms;
    }
    return j;
}

namespace {

void flatten(const std::string &prefix, const ordered_json &j, std::vector<std::pair<std::string, ordered_json>> &out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
        }
        return;
    }
    out.emplace_back(prefix, j);
}

std::string csv_cell(const ordered_json &v) {
    if (v.is_null()) {
        return "";
    }
    if (v.is_number_float()) {
        return format_number(v.get<double>());
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<uint64_t>());
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<int64_t>());
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char ch : s) {
        quoted += ch;
        if (ch == '"') {
            quoted += '"';
        }
    }
    return quoted + "\"";
}

}  // namespace

std::vector<std::pair<std::string, ordered_json>> ResultRow::columns() const {
    std::vector<std::pair<std::string, ordered_json>> out;
    flatten("", to_json(), out);
    return out;
}

void write_json_log(const std::vector<ResultRow> &rows, std::ostream &out) {
    for (const auto &r : rows) {
        out << r.to_json().dump() << '\n';
    }
}

std::string plot_data_csv(const std::vector<ResultRow> &rows, const std::vector<std::string> &columns) {
    std::vector<std::vector<std::pair<std::string, ordered_json>>> flat;
    for (const auto &r : rows) {
        flat.push_back(r.columns());
    }
    for (const auto &col : columns) {
        for (const auto &f : flat) {
            bool found = std::any_of(f.begin(), f.end(), [&](const auto &kv) {
                return kv.first == col;
            });
            if (!found) {
                std::string avail;
                for (const auto &kv : f) {
                    avail += (avail.empty() ? "" : ", ") + kv.first;
                }
                throw ConfigError("column '" + col + "' does not exist; available: " + avail);
            }
        }
    }
    std::ostringstream out;
    for (size_t i = 0; i < columns.size(); i++) {
        out << (i ? "," : "") << csv_cell(columns[i]);
    }
    out << '\n';
    for (const auto &f : flat) {
        for (size_t i = 0; i < columns.size(); i++) {
            auto it = std::find_if(f.begin(), f.end(), [&](const auto &kv) {
                return kv.first == columns[i];
            });
            out << (i ? "," : "") << csv_cell(it->second);
        }
        out << '\n';
    }
    return out.str();
}

void emit_plot_data(const std::vector<ResultRow> &rows, const std::vector<std::string> &columns, const std::string &path) {
    std::string csv = plot_data_csv(rows, columns);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << csv;
}

// ---- running -------------------------------------------------------------------

const ExperimentInfo &find_experiment(const std::string &name) {
    for (const auto &e : experiment_registry()) {
        if (e.name == name) {
            return e;
        }
    }
    std::string all;
    for (const auto &e : experiment_registry()) {
        all += (all.empty() ? "" : ", ") + e.name;
    }
    throw ConfigError("experiment: unknown experiment '" + name + "'; known: " + all);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &config) {
    const ExperimentInfo &info = find_experiment(config.experiment);
    auto start = std::chrono::steady_clock::now();
    auto rows = info.run(config);
    if (config.record_wall_clock) {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        for (auto &r : rows) {
            r.wall_clock_ms = ms;
        }
    }
    return rows;
}

bool SelftestReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) {
        return c.second;
    });
}

SelftestReport run_selftest(int threads) {
    SelftestReport report;
    for (auto &c : selftest_cases(threads)) {
        auto rows = run_experiment(c.config);
        report.checks.emplace_back(c.config.experiment + ": " + c.invariant, c.check(rows));
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    return report;
}

}  // namespace perminv
