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

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "edgeworth/errors.hpp"
#include "edgeworth/scenario.hpp"

namespace edgeworth::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// Cuts an unquoted trailing comment.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool valid_name(const std::string& s, bool allow_dot) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (allow_dot && c == '.')))
            return false;
    }
    return true;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
    throw validation_error(origin + ":" + std::to_string(line) + ": " + what);
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

std::string parse_quoted(const std::string& origin, int line_no, const std::string& raw) {
    if (raw.size() < 2 || raw.back() != '"') fail(origin, line_no, "unterminated string: " + raw);
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 2 < raw.size()) {
            ++i;
            if (raw[i] != '"' && raw[i] != '\\') {
                fail(origin, line_no, std::string("unsupported escape \\") + raw[i]);
            }
        } else if (raw[i] == '"') {
            fail(origin, line_no, "unexpected quote inside string: " + raw);
        }
        out += raw[i];
    }
    return out;
}

std::vector<std::string> split_list_items(const std::string& origin, int line_no,
                                          const std::string& inner) {
    std::vector<std::string> items;
    std::string current;
    bool quoted = false;
    for (char c : inner) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (quoted) fail(origin, line_no, "unterminated string in list");
    if (!trim(current).empty()) items.push_back(trim(current));
    for (const std::string& item : items) {
        if (item.empty()) fail(origin, line_no, "empty list item");
    }
    return items;
}

ScenarioValue parse_value(const std::string& origin, int line_no, const std::string& raw) {
    ScenarioValue v;
    v.line = line_no;
    if (raw.empty()) fail(origin, line_no, "missing value");
    if (raw.front() == '"') {
        v.type = ScenarioValue::Type::string;
        v.text = parse_quoted(origin, line_no, raw);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = ScenarioValue::Type::boolean;
        v.boolean = raw == "true";
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') fail(origin, line_no, "unterminated list: " + raw);
        const std::vector<std::string> items =
            split_list_items(origin, line_no, raw.substr(1, raw.size() - 2));
        v.type = ScenarioValue::Type::number_list;
        for (const std::string& item : items) {
            if (item.front() == '"') {
                v.type = ScenarioValue::Type::string_list;
                break;
            }
        }
        for (const std::string& item : items) {
            if (v.type == ScenarioValue::Type::string_list) {
                if (item.front() != '"') fail(origin, line_no, "mixed list types: " + raw);
                v.strings.push_back(parse_quoted(origin, line_no, item));
            } else {
                double num = 0.0;
                if (!parse_number(item, num)) {
                    fail(origin, line_no, "list item is not a number: " + item);
                }
                v.numbers.push_back(num);
            }
        }
        return v;
    }
    double num = 0.0;
    if (!parse_number(raw, num)) fail(origin, line_no, "cannot parse value: " + raw);
    v.type = ScenarioValue::Type::number;
    v.number = num;
    return v;
}

}  // namespace

ScenarioDoc ScenarioDoc::parse_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw validation_error("cannot open scenario file '" + path + "'");
    std::ostringstream text;
    text << file.rdbuf();
    return parse_text(text.str(), path);
}

ScenarioDoc ScenarioDoc::parse_text(const std::string& text, const std::string& origin) {
    ScenarioDoc doc;
    doc.origin_ = origin;
    doc.section_order_.push_back("");
    doc.sections_[""];

    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header: " + line);
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!valid_name(name, true)) fail(origin, line_no, "bad section name: " + name);
            if (doc.sections_.count(name)) fail(origin, line_no, "duplicate section [" + name + "]");
            doc.sections_[name];
            doc.section_order_.push_back(name);
            current = name;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected 'key = value' or '[section]': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        if (!valid_name(key, false)) fail(origin, line_no, "bad key name: " + key);
        auto& section = doc.sections_[current];
        if (section.count(key)) {
            fail(origin, line_no, "duplicate key '" + key + "' in section [" + current + "]");
        }
        section[key] = parse_value(origin, line_no, trim(line.substr(eq + 1)));
    }
    return doc;
}

std::string ScenarioDoc::kind() const { return text("", "kind"); }

bool ScenarioDoc::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const ScenarioValue& ScenarioDoc::get(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key)) {
        throw validation_error(origin_ + ": missing required key '" + key + "' in section [" +
                               section + "]");
    }
    return s->second.at(key);
}

double ScenarioDoc::number(const std::string& section, const std::string& key) const {
    const ScenarioValue& v = get(section, key);
    if (v.type != ScenarioValue::Type::number) {
        throw validation_error(origin_ + ": key '" + key + "' in [" + section +
                               "] must be a number");
    }
    return v.number;
}

double ScenarioDoc::number_or(const std::string& section, const std::string& key,
                              double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

std::string ScenarioDoc::text(const std::string& section, const std::string& key) const {
    const ScenarioValue& v = get(section, key);
    if (v.type != ScenarioValue::Type::string) {
        throw validation_error(origin_ + ": key '" + key + "' in [" + section +
                               "] must be a string");
    }
    return v.text;
}

std::string ScenarioDoc::text_or(const std::string& section, const std::string& key,
                                 const std::string& fallback) const {
    return has(section, key) ? text(section, key) : fallback;
}

std::vector<double> ScenarioDoc::numbers(const std::string& section, const std::string& key) const {
    const ScenarioValue& v = get(section, key);
    if (v.type == ScenarioValue::Type::number_list) return v.numbers;
    if (v.type == ScenarioValue::Type::number) return {v.number};
    throw validation_error(origin_ + ": key '" + key + "' in [" + section +
                           "] must be a list of numbers");
}

std::vector<std::string> ScenarioDoc::strings(const std::string& section,
                                              const std::string& key) const {
    const ScenarioValue& v = get(section, key);
    if (v.type == ScenarioValue::Type::string_list) return v.strings;
    if (v.type == ScenarioValue::Type::string) return {v.text};
    throw validation_error(origin_ + ": key '" + key + "' in [" + section +
                           "] must be a list of strings");
}

std::vector<std::string> ScenarioDoc::sections_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const std::string& name : section_order_) {
        if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0) {
            out.push_back(name);
        }
    }
    return out;
}

}  // namespace edgeworth::cli
