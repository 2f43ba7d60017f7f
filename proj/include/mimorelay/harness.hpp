// SPDX-License-Identifier: Apache-2.0
//
// mimorelay: hybrid-processing massive MIMO two-way relay simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "mimorelay/energy.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mimorelay {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view text);

/// Output could not be written; the message names the path and the cause.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One experiment invocation. Unset optionals fall back to the experiment's
/// own grid (small by default, dense with `full`). Powers are linear.
struct ExperimentConfig {
    std::string experiment;

    std::optional<std::vector<int>> antennas;         // N sweep
    std::optional<int> pairs;                          // K
    std::optional<int> rf_chains;                      // L, checked against 2K
    std::optional<std::vector<double>> user_powers;   // P_s sweep (SNR)
    std::optional<double> relay_power;                 // fixed P_r instead of 2K P_s
    std::optional<double> pilot_power;                 // P_p, infinity for perfect CSI
    std::optional<int> pilot_length;                   // tau
    std::optional<double> beta;
    std::optional<std::vector<int>> phase_bits;        // 0 stands for ideal shifters
    std::optional<int> paths;                          // mmWave N_p
    std::optional<double> spacing;                     // mmWave d
    std::optional<std::vector<double>> coherence;     // T sweep
    std::optional<std::vector<double>> total_powers;  // P_T sweep
    std::optional<double> user_budget;                 // E_s
    std::optional<double> relay_budget;                // E_r

    PowerModel power;

    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    std::string output;  // empty -> stdout
    OutputFormat format = OutputFormat::Csv;
    bool full = false;
    unsigned workers = 1;
};

/// Flat `key = value` text. Values are numbers, strings or `[a, b, ...]`
/// arrays; `#` starts a comment; several assignments may share a line when
/// separated by commas. Power keys also accept a `_dB` suffix.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

/// Every accepted configuration key, in documentation order.
const std::vector<std::string>& config_keys();

struct ResultRow {
    std::vector<double> vars;  // NaN marks a variable that does not apply
    std::string metric;
    double value = 0.0;
    std::optional<double> std_error;
    std::string method;
};

struct ResultTable {
    std::string experiment;
    std::vector<std::string> variables;
    std::vector<ResultRow> rows;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
};

const std::vector<ExperimentInfo>& experiments();

bool is_experiment(std::string_view name);

/// Runs the named experiment. Identical configs give identical tables for
/// any worker count.
ResultTable run_experiment(const ExperimentConfig& config);

/// Shortest text with 17 significant digits; reads back bit-exactly.
std::string format_double(double value);

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);

/// Writes the table to `path`, or to stdout when `path` is empty.
void emit(const ResultTable& table, OutputFormat format, const std::string& path);

} // namespace mimorelay
