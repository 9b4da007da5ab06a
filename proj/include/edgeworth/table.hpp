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

#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace edgeworth {

/// Column-labelled result rows shared by every scenario kind. Floating point
/// serializes with 12 significant digits in both CSV and JSON.
struct ResultTable {
    using Cell = std::variant<std::string, double>;

    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

std::string format_number(double v);   // %.12g
double round_to_precision(double v);   // value after a %.12g round trip

std::string to_csv(const ResultTable& t);
std::string to_json_text(const ResultTable& t);

/// Writes in the requested format ("csv" or "json") to `path`, or to
/// `fallback` when the path is empty.
void write_output(const ResultTable& t, const std::string& format, const std::string& path,
                  std::ostream& fallback);

}  // namespace edgeworth
