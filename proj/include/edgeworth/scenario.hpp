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

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "edgeworth/table.hpp"

namespace edgeworth::cli {

/// One parsed scenario value: string, number, boolean, or a homogeneous list.
struct ScenarioValue {
    enum class Type { string, number, boolean, number_list, string_list };

    Type type = Type::string;
    std::string text;
    double number = 0.0;
    bool boolean = false;
    std::vector<double> numbers;
    std::vector<std::string> strings;
    int line = 0;
};

/// Flat sectioned key-value scenario file:
///   kind = "allocate"          # top-level keys come before any section
///   [problem]                  # sections, dotted names allowed
///   total = 150.0
///   labels = ["a", "b"]        # homogeneous lists of numbers or strings
/// Comments run from an unquoted '#' to end of line.
class ScenarioDoc {
public:
    static ScenarioDoc parse_file(const std::string& path);
    static ScenarioDoc parse_text(const std::string& text, const std::string& origin);

    const std::string& origin() const { return origin_; }
    std::string kind() const;

    bool has(const std::string& section, const std::string& key) const;
    const ScenarioValue& get(const std::string& section, const std::string& key) const;

    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    std::string text(const std::string& section, const std::string& key) const;
    std::string text_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;
    std::vector<std::string> strings(const std::string& section, const std::string& key) const;

    /// Section names starting with `prefix`, in file order.
    std::vector<std::string> sections_with_prefix(const std::string& prefix) const;

private:
    std::string origin_;
    std::vector<std::string> section_order_;
    std::map<std::string, std::map<std::string, ScenarioValue>> sections_;
};

struct RunOptions {
    std::size_t resolution = 200;
    bool verify = false;
    std::string format = "csv";
    std::string out_path;  // empty: stdout
};

/// Runs one scenario file and emits its table. Exceptions propagate; the
/// command-line wrapper maps them to exit codes.
ResultTable run_scenario(const ScenarioDoc& doc, const std::string& expected_kind,
                         const RunOptions& options);

/// The `fechner n m` direct form.
ResultTable fechner_table(double n, const std::vector<std::size_t>& parts, bool verify);

/// Full command-line entry point (subcommands: allocate, fechner, hedonic,
/// box, replica, sympathy-sweep). Returns the process exit code:
///   0 success, 1 validation or I/O error, 2 infeasible, 3 solver failure.
int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeworth::cli
