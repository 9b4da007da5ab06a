// Copyright 2026 The Edgeworth Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "edgeworth/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "edgeworth/errors.hpp"
#include "json.hpp"

namespace edgeworth {

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw shape_error("result row has " + std::to_string(row.size()) + " cells, table has " +
                          std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round_to_precision(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string to_csv(const ResultTable& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(t.columns[c]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (std::holds_alternative<double>(row[c])) {
                out += format_number(std::get<double>(row[c]));
            } else {
                out += csv_escape(std::get<std::string>(row[c]));
            }
        }
        out += '\n';
    }
    return out;
}

std::string to_json_text(const ResultTable& t) {
    nlohmann::json doc;
    doc["kind"] = t.kind;
    doc["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<double>(cell)) {
                r.push_back(round_to_precision(std::get<double>(cell)));
            } else {
                r.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_output(const ResultTable& t, const std::string& format, const std::string& path,
                  std::ostream& fallback) {
    if (format != "csv" && format != "json") {
        throw validation_error("format must be 'csv' or 'json', got '" + format + "'");
    }
    const std::string text = format == "csv" ? to_csv(t) : to_json_text(t);
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw validation_error("cannot open output path '" + path + "' for writing");
    file << text;
    if (!file.good()) throw validation_error("write failed for output path '" + path + "'");
}

}  // namespace edgeworth
