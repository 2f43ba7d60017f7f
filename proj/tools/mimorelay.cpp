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

#include "mimorelay/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace mimorelay;

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid-processing two-way relay simulator"};
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> workers;
    bool full = false;

    app.add_option("experiment", experiment, "experiment name, or 'list'")->required();
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--trials", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "output path (stdout when omitted)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--full", full, "dense sweep grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (experiment == "list") {
        for (const auto& e : experiments()) std::cout << e.name << "\t" << e.description << "\n";
        return 0;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path);
            if (cfg.experiment != experiment)
                throw InvalidParameter("config names experiment '" + cfg.experiment + "' but '" + experiment +
                                       "' was requested");
        } else {
            if (!is_experiment(experiment))
                throw InvalidParameter("unknown experiment '" + experiment + "' (see 'mimorelay list')");
            cfg.experiment = experiment;
        }
        if (seed) cfg.seed = *seed;
        if (trials) cfg.trials = *trials;
        if (out) cfg.output = *out;
        if (format) cfg.format = parse_format(*format);
        if (workers) cfg.workers = *workers;
        if (full) cfg.full = true;

        const auto table = run_experiment(cfg);
        emit(table, cfg.format, cfg.output);
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
