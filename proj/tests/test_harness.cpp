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

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace mimorelay;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string message_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("mimorelay_test_" + name);
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(MIMORELAY_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config defaults and dB conversion", "[harness]")
{
    const auto cfg = parse_config("experiment = rate-vs-snr\nP_s_dB = 10\n");
    CHECK(cfg.experiment == "rate-vs-snr");
    REQUIRE(cfg.user_powers);
    CHECK(cfg.user_powers->at(0) == Approx(10.0).epsilon(1e-15));
    CHECK(cfg.trials == 10000);
    CHECK(cfg.seed == 0);
    CHECK(cfg.format == OutputFormat::Csv);
    CHECK_FALSE(cfg.full);
}

TEST_CASE("config arrays, comments and shared lines", "[harness]")
{
    const auto cfg = parse_config(R"(# sweep
experiment = "quantization"   # trailing comment
N = [64, 128], K = 4, L = 8
P_s_dB = [-10, 0, 10]
P_p = inf
B = [0, 1, 2]
trials = 250, seed = 18446744073709551615
format = json
full = true
kappa = 0.5, P_APS_dB = -20
)");
    CHECK(cfg.antennas == std::vector<int>{64, 128});
    CHECK(cfg.pairs == 4);
    CHECK(cfg.rf_chains == 8);
    REQUIRE(cfg.user_powers->size() == 3);
    CHECK(cfg.user_powers->at(0) == Approx(0.1));
    CHECK(cfg.user_powers->at(2) == Approx(10.0));
    CHECK(std::isinf(*cfg.pilot_power));
    CHECK(cfg.phase_bits == std::vector<int>{0, 1, 2});
    CHECK(cfg.trials == 250);
    CHECK(cfg.seed == 18446744073709551615ULL);
    CHECK(cfg.format == OutputFormat::Json);
    CHECK(cfg.full);
    CHECK(cfg.power.kappa == 0.5);
    CHECK(cfg.power.P_APS == Approx(0.01));
}

TEST_CASE("config validation errors", "[harness]")
{
    CHECK_THROWS_WITH(parse_config("N = [64]\n"), ContainsSubstring("experiment"));
    CHECK_THROWS_WITH(parse_config("experiment = ee-vs-L\nK = 5, L = 12\n"),
                      ContainsSubstring("L must equal 2K"));
    const auto unknown = message_of([] { parse_config("experiment = ee-vs-L\nantennas = 4\n"); });
    CHECK_THAT(unknown, ContainsSubstring("unknown key 'antennas'"));
    CHECK_THAT(unknown, ContainsSubstring("P_s_dB"));
    CHECK_THAT(unknown, ContainsSubstring("line 2"));
    const auto type = message_of([] { parse_config("experiment = ee-vs-L\n\nK = five\n"); });
    CHECK_THAT(type, ContainsSubstring("line 3"));
    CHECK_THAT(type, ContainsSubstring("integer"));
    CHECK_THROWS_AS(parse_config("experiment = nope\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config("experiment = ee-vs-L\ntrials = 0\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config("experiment = ee-vs-L\nN = []\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config("experiment = ee-vs-L\nK = 2\nK = 3\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config("experiment = ee-vs-L\nformat = xml\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config("experiment = ee-vs-L\nkappa = 1.5\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config("experiment = ee-vs-L\njust text\n"), InvalidParameter);
}

TEST_CASE("every documented key is accepted", "[harness]")
{
    const auto& keys = config_keys();
    CHECK(std::find(keys.begin(), keys.end(), "P_p_dB") != keys.end());
    CHECK(std::find(keys.begin(), keys.end(), "K_dB") == keys.end());
}

TEST_CASE("doubles round-trip through text", "[harness]")
{
    for (double v : {0.1 + 0.2, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 5e-324}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("CSV and JSON emission", "[harness]")
{
    ResultTable t;
    t.experiment = "ee-vs-L";
    t.variables = {"N", "L"};
    t.seed = 12345678901234ULL;
    t.trials = 77;
    CHECK(to_csv(t) == "experiment,N,L,metric,value,stderr,method\n");

    t.rows.push_back({{128, 14}, "ee", 0.1 + 0.2, std::nullopt, "closed-form-ee"});
    t.rows.push_back({{128, std::nan("")}, "best_L", 14, 0.5, "closed-form-ee"});
    const auto csv = to_csv(t);
    CHECK(csv == "experiment,N,L,metric,value,stderr,method\n"
                 "ee-vs-L,128,14,ee,0.30000000000000004,,closed-form-ee\n"
                 "ee-vs-L,128,,best_L,14,0.5,closed-form-ee\n");

    const auto json = to_json(t);
    CHECK_THAT(json, ContainsSubstring("\"seed\": 12345678901234"));
    CHECK_THAT(json, ContainsSubstring("\"trials\": 77"));
    CHECK_THAT(json, ContainsSubstring(std::string("\"version\": \"") + kVersion + "\""));
    CHECK_THAT(json, ContainsSubstring("0.30000000000000004"));

    const auto path = temp_path("emit.csv");
    emit(t, OutputFormat::Csv, path.string());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == csv);
    std::filesystem::remove(path);

    const std::string bad = "/nonexistent-dir/out.csv";
    const auto msg = message_of([&] { emit(t, OutputFormat::Csv, bad); });
    CHECK_THAT(msg, ContainsSubstring(bad));
    CHECK_THAT(msg, ContainsSubstring("No such file"));
    CHECK_THROWS_AS(emit(t, OutputFormat::Csv, bad), IoError);
}

TEST_CASE("results do not depend on the worker count", "[harness]")
{
    auto cfg = parse_config("experiment = rate-vs-snr\nN = [24]\nK = 2\nP_s_dB = [0, 10]\ntrials = 200\nseed = 9\n");
    const auto one = to_csv(run_experiment(cfg));
    cfg.workers = 4;
    CHECK(to_csv(run_experiment(cfg)) == one);
    cfg.seed = 10;
    CHECK(to_csv(run_experiment(cfg)) != one);
}

TEST_CASE("every experiment runs on a reduced grid", "[harness]")
{
    const std::map<std::string, std::string> small = {
        {"rate-vs-snr", "N = [24]\nK = 2\nP_s_dB = [0]"},
        {"power-scaling", "N = [64, 128]"},
        {"quantization", "N = [24]\nK = 2\nP_s_dB = [0]\nB = [0, 1]"},
        {"overhead-throughput", "N = [16]\nK = 2\nP_s_dB = [0]\nT = [100]"},
        {"coherence-time", "N = [16]\nK = 2\nT = [16, 100]"},
        {"mmwave-rate", "N = [24]\nK = 2\nP_s_dB = [0]"},
        {"ee-surface", ""},
        {"ee-constraint", "P_T = [20]"},
        {"ee-contour", "P_T = [20]"},
        {"green-points", ""},
        {"ee-vs-L", "N = [128]"},
    };
    REQUIRE(small.size() == experiments().size());
    for (const auto& e : experiments()) {
        INFO(e.name);
        auto cfg = parse_config("experiment = " + e.name + "\ntrials = 50\n" + small.at(e.name) + "\n");
        const auto t = run_experiment(cfg);
        CHECK(t.experiment == e.name);
        CHECK_FALSE(t.rows.empty());
        for (const auto& r : t.rows) {
            CHECK(std::isfinite(r.value));
            CHECK(r.vars.size() == t.variables.size());
            if (r.std_error) CHECK(*r.std_error >= 0);
        }
    }
}

TEST_CASE("experiment outputs carry the expected metrics", "[harness]")
{
    auto t = run_experiment(parse_config("experiment = ee-constraint\nP_T = [20]\n"));
    for (const auto& r : t.rows)
        if (r.metric == "best_relay_share") CHECK(r.value == Approx(0.5));

    t = run_experiment(parse_config("experiment = coherence-time\nN = [16]\nK = 2\nT = [16]\ntrials = 20\n"));
    for (const auto& r : t.rows)
        if (r.metric == "throughput_hybrid") CHECK(r.value == 0.0);

    CHECK_THROWS_AS(run_experiment(parse_config("experiment = coherence-time\nN = [64]\nT = [10]\ntrials = 5\n")),
                    InvalidParameter);
}

TEST_CASE("command-line exit codes", "[harness]")
{
    CHECK(run_cli("list") == 0);
    CHECK(run_cli("no-such-experiment") == 1);
    CHECK(run_cli("ee-vs-L --format yaml") == 1);
    const auto cfg = temp_path("bad.cfg");
    {
        std::ofstream out(cfg);
        out << "experiment = ee-vs-L\nK = 5, L = 12\n";
    }
    CHECK(run_cli("ee-vs-L --config " + cfg.string()) == 1);
    CHECK(run_cli("ee-vs-L --out /nonexistent-dir/x.csv") == 2);
    const auto out = temp_path("cli.json");
    CHECK(run_cli("ee-constraint --format json --seed 5 --out " + out.string()) == 0);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK_THAT(ss.str(), ContainsSubstring("\"seed\": 5"));
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}
