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

#include <optional>
#include <vector>

#include "edgeworth/allocate.hpp"
#include "edgeworth/exchange.hpp"
#include "edgeworth/hedonic.hpp"
#include "edgeworth/sentient.hpp"

// Brute-force reference implementations. Slow on purpose, deterministic, and
// independent of the solver code paths they certify; bounds come from the
// instance (the budget simplex, the box, the coalition's resources).

namespace edgeworth::oracle {

struct GridSpec {
    std::size_t steps = 200;  // per dimension

    explicit GridSpec(std::size_t s) : steps(s) {
        if (steps < 2) throw validation_error("grid oracle needs steps >= 2");
    }
};

struct GridWelfareResult {
    Allocation allocation;
    double objective = 0.0;
};

/// Exhaustive simplex-grid maximization of total pleasure. Floors default to
/// the thresholds; pass the problem's resolved floors to mirror it exactly.
/// Guarded to populations of at most 4.
GridWelfareResult grid_maximize_welfare(const Population& p, double total, const GridSpec& g,
                                        std::optional<std::vector<double>> floors = std::nullopt);

/// Grid allocations not weakly dominated in both agents' sympathized
/// utilities by any other grid allocation.
std::vector<BoxAllocation> grid_pareto_set(const BoxEconomy& e, const GridSpec& g);

struct BlockingCoalition {
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    double ax = 0.0, ay = 0.0;  // per A-member bundle
    double bx = 0.0, by = 0.0;  // per B-member bundle
};

/// First coalition (by count order) of replica members able to redistribute
/// its own endowments so that every member strictly improves on `alloc`.
std::optional<BlockingCoalition> blocking_coalition_search(const BoxEconomy& e, std::size_t n,
                                                           const BoxAllocation& alloc,
                                                           const GridSpec& g);

struct GridJointResult {
    JointAllocation allocation;
    double objective = 0.0;
};

/// Exhaustive joint means/work grid for small sectioned societies (<= 3
/// sections); honors the society's happiness floor when `respect_floor`.
/// Empty when no grid point is feasible.
std::optional<GridJointResult> grid_maximize_joint_welfare(const SectionedSociety& soc,
                                                           double required_output,
                                                           const GridSpec& g,
                                                           bool respect_floor);

}  // namespace edgeworth::oracle
