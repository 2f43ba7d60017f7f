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

#include "json.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iostream>

namespace mimorelay {

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string to_csv(const ResultTable& t)
{
    std::string out = "experiment";
    for (const auto& v : t.variables) out += "," + v;
    out += ",metric,value,stderr,method\n";
    for (const auto& r : t.rows) {
        out += t.experiment;
        for (double v : r.vars) {
            out += ',';
            if (!std::isnan(v)) out += format_double(v);
        }
        out += "," + r.metric + "," + format_double(r.value) + ",";
        if (r.std_error) out += format_double(*r.std_error);
        out += "," + r.method + "\n";
    }
    return out;
}

std::string to_json(const ResultTable& t)
{
    nlohmann::ordered_json doc;
    doc["metadata"] = {{"experiment", t.experiment}, {"seed", t.seed}, {"trials", t.trials}, {"version", kVersion}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json row;
        for (std::size_t i = 0; i < t.variables.size(); ++i) {
            if (std::isnan(r.vars[i])) row[t.variables[i]] = nullptr;
            else row[t.variables[i]] = r.vars[i];
        }
        row["metric"] = r.metric;
        row["value"] = r.value;
        if (r.std_error) row["stderr"] = *r.std_error;
        else row["stderr"] = nullptr;
        row["method"] = r.method;
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void emit(const ResultTable& table, OutputFormat format, const std::string& path)
{
    const std::string text = format == OutputFormat::Csv ? to_csv(table) : to_json(table);
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("failed to write results to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path + "': " + std::strerror(errno));
}

} // namespace mimorelay
