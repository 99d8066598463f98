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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "perminv/errors.h"
#include "perminv/harness.h"

using namespace perminv;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;

nlohmann::json read_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
}

void write_log(const std::vector<ResultRow> &rows, const std::string &path) {
    if (path.empty() || path == "-") {
        write_json_log(rows, std::cout);
        return;
    }
    std::ostringstream buf;
    write_json_log(rows, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("log: cannot open '" + path + "'");
    }
    out << buf.str();
}

int run_command(const std::string &config_path, const std::string &log_path, const std::string &csv_path,
    const std::vector<std::string> &columns) {
    // Everything is validated and computed before any output file is opened.
    auto config = ExperimentConfig::from_json(read_config(config_path));
    auto rows = run_experiment(config);
    std::string csv;
    if (!csv_path.empty()) {
        csv = plot_data_csv(rows, columns);
    }
    write_log(rows, log_path);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            throw ConfigError("csv: cannot open '" + csv_path + "'");
        }
        out << csv;
    }
    return 0;
}

int list_command() {
    for (const auto &e : experiment_registry()) {
        std::cout << e.name << "  n in [" << e.min_n << ", " << e.max_n << "]  " << e.summary << "\n";
        for (const auto &p : e.params) {
            std::cout << "    " << p.name << " = " << p.default_value.dump();
            if (!p.choices.empty()) {
                std::cout << "  {";
                for (size_t i = 0; i < p.choices.size(); i++) {
                    std::cout << (i ? "," : "") << p.choices[i];
                }
                std::cout << "}";
            } else if (p.kind == ParamSpec::Kind::integer || p.kind == ParamSpec::Kind::real) {
                std::cout << "  [" << p.min << ", " << p.max << "]";
            }
            std::cout << "\n";
        }
    }
    return 0;
}

int selftest_command(const std::string &log_path) {
    auto report = run_selftest(threads_from_env(1));
    for (const auto &[name, ok] : report.checks) {
        std::cerr << (ok ? "ok   " : "FAIL ") << name << "\n";
    }
    if (!log_path.empty()) {
        write_log(report.rows, log_path);
    }
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"perminv: permutation inversion experiments"};
    app.require_subcommand(1);

    std::string config_path, log_path, csv_path;
    std::vector<std::string> columns;
    auto *run = app.add_subcommand("run", "Run one experiment from a JSON config");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--log", log_path, "JSON-lines result log (default stdout)");
    auto *csv_opt = run->add_option("--csv", csv_path, "Plot-data CSV output");
    run->add_option("--columns", columns, "CSV columns (dotted names)")->needs(csv_opt)->delimiter(',');
    csv_opt->needs(run->get_option("--columns"));

    auto *list = app.add_subcommand("list-experiments", "List experiments and their parameters");
    std::string selftest_log;
    auto *selftest = app.add_subcommand("selftest", "Run small configurations of every experiment");
    selftest->add_option("--log", selftest_log, "JSON-lines log of the selftest rows");
    auto *version = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            return run_command(config_path, log_path, csv_path, columns);
        }
        if (*list) {
            return list_command();
        }
        if (*selftest) {
            return selftest_command(selftest_log);
        }
        if (*version) {
            std::cout << version_string() << "\n";
            return 0;
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ContractViolation &e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitContract;
    } catch (const DecodeError &e) {
        std::cerr << "decode error: " << e.what() << "\n";
        return kExitContract;
    }
    return 0;
}
