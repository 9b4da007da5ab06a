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

#include <stdexcept>
#include <string>

namespace edgeworth {

/// Argument outside the mathematical domain of an operation
/// (non-positive stimulus, exponent out of range, zero part count, ...).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Containers whose lengths do not line up (allocation vs population, ...).
class shape_error : public std::invalid_argument {
public:
    explicit shape_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A supplied object violates a stated constraint; the message names the
/// violated constraint(s).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// The problem has no feasible point. `detail()` carries the quantitative
/// diagnosis: the budget deficit for stimulus allocation, the best attainable
/// minimum happiness for the sectioned-society solver.
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& what, double detail)
        : std::runtime_error(what), detail_(detail) {}
    double detail() const { return detail_; }

private:
    double detail_;
};

/// An internal solver failed to converge or produced output that fails its
/// own post-verification.
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edgeworth
