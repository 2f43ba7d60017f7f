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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mimorelay {

namespace {

enum class Kind { String, Int, IntArray, Real, RealArray, Bool };

struct KeySpec {
    std::string name;
    Kind kind;
    bool power;  // accepts the _dB suffix
};

const std::vector<KeySpec>& key_specs()
{
    static const std::vector<KeySpec> specs = {
        {"experiment", Kind::String, false},
        {"N", Kind::IntArray, false},
        {"K", Kind::Int, false},
        {"L", Kind::Int, false},
        {"P_s", Kind::RealArray, true},
        {"P_r", Kind::Real, true},
        {"P_p", Kind::Real, true},
        {"tau", Kind::Int, false},
        {"beta", Kind::Real, false},
        {"B", Kind::IntArray, false},
        {"paths", Kind::Int, false},
        {"spacing", Kind::Real, false},
        {"T", Kind::RealArray, false},
        {"P_T", Kind::RealArray, true},
        {"E_s", Kind::Real, true},
        {"E_r", Kind::Real, true},
        {"kappa", Kind::Real, false},
        {"P_0", Kind::Real, true},
        {"P_const", Kind::Real, true},
        {"P_APS", Kind::Real, true},
        {"trials", Kind::Int, false},
        {"seed", Kind::Int, false},
        {"output", Kind::String, false},
        {"format", Kind::String, false},
        {"full", Kind::Bool, false},
        {"workers", Kind::Int, false},
    };
    return specs;
}

[[noreturn]] void fail_at(int line, const std::string& msg)
{
    std::ostringstream os;
    os << "config line " << line << ": " << msg;
    throw InvalidParameter(os.str());
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Splits on commas that are outside brackets and quotes.
std::vector<std::string> split_top(std::string_view s)
{
    std::vector<std::string> parts;
    int depth = 0;
    bool quoted = false;
    std::string cur;
    for (char c : s) {
        if (c == '"') quoted = !quoted;
        if (!quoted) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(trim(cur));
                cur.clear();
                continue;
            }
        }
        cur += c;
    }
    parts.push_back(trim(cur));
    return parts;
}

std::optional<double> to_real(const std::string& s)
{
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "+inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<long long> to_int(const std::string& s)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string> array_items(const std::string& value)
{
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
        const std::string inner = trim(std::string_view(value).substr(1, value.size() - 2));
        if (inner.empty()) return {};
        return split_top(inner);
    }
    return {value};
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

const char* kind_name(Kind k)
{
    switch (k) {
    case Kind::String: return "a string";
    case Kind::Int: return "an integer";
    case Kind::IntArray: return "an integer or an array of integers";
    case Kind::Real: return "a number";
    case Kind::RealArray: return "a number or an array of numbers";
    case Kind::Bool: return "true or false";
    }
    return "a value";
}

} // namespace

OutputFormat parse_format(std::string_view text)
{
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw InvalidParameter("format must be csv or json (got '" + std::string(text) + "')");
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& k : key_specs()) {
            out.push_back(k.name);
            if (k.power) out.push_back(k.name + "_dB");
        }
        return out;
    }();
    return keys;
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    std::optional<std::pair<int, int>> k_line, l_line;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        for (const auto& piece : split_top(line)) {
            const auto eq = piece.find('=');
            if (eq == std::string::npos) fail_at(line_no, "expected 'key = value', got '" + piece + "'");
            std::string key = trim(std::string_view(piece).substr(0, eq));
            const std::string value = trim(std::string_view(piece).substr(eq + 1));
            if (value.empty()) fail_at(line_no, "key '" + key + "' has no value");

            bool in_db = false;
            const KeySpec* spec = nullptr;
            for (const auto& s : key_specs()) {
                if (s.name == key) spec = &s;
                else if (s.power && s.name + "_dB" == key) {
                    spec = &s;
                    in_db = true;
                }
            }
            if (!spec) {
                std::string valid;
                for (const auto& k : config_keys()) valid += (valid.empty() ? "" : ", ") + k;
                fail_at(line_no, "unknown key '" + key + "'; valid keys: " + valid);
            }
            if (!seen.insert(spec->name).second)
                fail_at(line_no, "key '" + spec->name + "' given more than once");

            auto type_error = [&]() {
                fail_at(line_no, "key '" + key + "' expects " + kind_name(spec->kind) + ", got '" + value + "'");
            };
            auto reals = [&]() {
                std::vector<double> out;
                const auto items = array_items(value);
                if (spec->kind == Kind::Real && items.size() != 1) type_error();
                for (const auto& item : items) {
                    const auto v = to_real(item);
                    if (!v) type_error();
                    out.push_back(in_db ? db_to_linear(*v) : *v);
                }
                if (out.empty()) fail_at(line_no, "key '" + key + "' has an empty array");
                return out;
            };
            auto ints = [&]() {
                std::vector<int> out;
                const auto items = array_items(value);
                if (spec->kind == Kind::Int && items.size() != 1) type_error();
                for (const auto& item : items) {
                    const auto v = to_int(item);
                    if (!v) type_error();
                    out.push_back(static_cast<int>(*v));
                }
                if (out.empty()) fail_at(line_no, "key '" + key + "' has an empty array");
                return out;
            };
            auto one_int = [&]() { return ints().front(); };
            auto one_real = [&]() { return reals().front(); };

            const std::string& name = spec->name;
            if (name == "experiment") {
                cfg.experiment = unquote(value);
                if (!is_experiment(cfg.experiment)) {
                    std::string valid;
                    for (const auto& e : experiments()) valid += (valid.empty() ? "" : ", ") + e.name;
                    fail_at(line_no, "unknown experiment '" + cfg.experiment + "'; known: " + valid);
                }
            } else if (name == "N") cfg.antennas = ints();
            else if (name == "K") {
                cfg.pairs = one_int();
                k_line = {line_no, *cfg.pairs};
            } else if (name == "L") {
                cfg.rf_chains = one_int();
                l_line = {line_no, *cfg.rf_chains};
            } else if (name == "P_s") cfg.user_powers = reals();
            else if (name == "P_r") cfg.relay_power = one_real();
            else if (name == "P_p") cfg.pilot_power = one_real();
            else if (name == "tau") cfg.pilot_length = one_int();
            else if (name == "beta") cfg.beta = one_real();
            else if (name == "B") cfg.phase_bits = ints();
            else if (name == "paths") cfg.paths = one_int();
            else if (name == "spacing") cfg.spacing = one_real();
            else if (name == "T") cfg.coherence = reals();
            else if (name == "P_T") cfg.total_powers = reals();
            else if (name == "E_s") cfg.user_budget = one_real();
            else if (name == "E_r") cfg.relay_budget = one_real();
            else if (name == "kappa") cfg.power.kappa = one_real();
            else if (name == "P_0") cfg.power.P_0 = one_real();
            else if (name == "P_const") cfg.power.P_const = one_real();
            else if (name == "P_APS") cfg.power.P_APS = one_real();
            else if (name == "trials") {
                const auto v = to_int(value);
                if (!v) type_error();
                if (*v < 1) fail_at(line_no, "trials must be >= 1");
                cfg.trials = static_cast<std::size_t>(*v);
            } else if (name == "seed") {
                std::uint64_t v = 0;
                const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
                if (ec != std::errc() || ptr != value.data() + value.size()) type_error();
                cfg.seed = v;
            } else if (name == "output") cfg.output = unquote(value);
            else if (name == "format") {
                try {
                    cfg.format = parse_format(unquote(value));
                } catch (const InvalidParameter& e) {
                    fail_at(line_no, e.what());
                }
            } else if (name == "full") {
                if (value == "true" || value == "1") cfg.full = true;
                else if (value == "false" || value == "0") cfg.full = false;
                else type_error();
            } else if (name == "workers") {
                const int w = one_int();
                if (w < 1) fail_at(line_no, "workers must be >= 1");
                cfg.workers = static_cast<unsigned>(w);
            }
        }
    }

    if (cfg.experiment.empty()) throw InvalidParameter("config is missing the required key 'experiment'");
    if (cfg.pairs && *cfg.pairs < 1) fail_at(k_line->first, "K must be >= 1");
    if (cfg.rf_chains) {
        const int k = cfg.pairs ? *cfg.pairs : 5;
        if (*cfg.rf_chains != 2 * k) {
            std::ostringstream os;
            os << "L must equal 2K (got L=" << *cfg.rf_chains << ", K=" << k << ")";
            fail_at(l_line->first, os.str());
        }
    }
    if (cfg.antennas)
        for (int n : *cfg.antennas)
            if (n < 1) throw InvalidParameter("every N must be >= 1");
    if (cfg.phase_bits)
        for (int b : *cfg.phase_bits)
            if (b < 0) throw InvalidParameter("B entries must be >= 0 (0 = ideal shifters)");
    cfg.power.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace mimorelay
