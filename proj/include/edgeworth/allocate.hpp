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
#include <utility>
#include <vector>

#include "edgeworth/sentient.hpp"

namespace edgeworth {

/// Which lower bound each sentient's amount must respect.
///   threshold_floor: y_s >= beta_s (nobody below the necessities of life)
///   positive_floor:  y_s >= epsilon (everyone gets some stimulus);
///                    epsilon defaults to 1e-6 * total when unset.
enum class FloorMode { threshold_floor, positive_floor };

struct AllocationProblem {
    Population population;
    double total;
    FloorMode floor_mode = FloorMode::positive_floor;
    std::optional<double> epsilon;  // positive_floor only

    AllocationProblem(Population p, double total_stimulus,
                      FloorMode mode = FloorMode::positive_floor,
                      std::optional<double> eps = std::nullopt);

    /// Resolved per-sentient lower bounds.
    std::vector<double> floors() const;
};

enum class CaseTag {
    equal_k_equal_beta,
    equal_k_diff_beta,
    diff_k_equal_beta,
    diff_k_diff_beta,
};

/// Certificate attached to a solved allocation: the common weighted marginal
/// (Lagrange multiplier), the worst stationarity defect over interior
/// components, and which floors bind.
struct OptimalityReport {
    double multiplier = 0.0;
    double max_kkt_residual = 0.0;
    std::vector<std::size_t> binding_floors;
};

CaseTag classify_case(const Population& p);

/// Maximizes total pleasure over allocations of `total` stimulus subject to
/// the problem's floors. Water-filling: bisect the multiplier, invert each
/// sentient's marginal, clamp at the floor.
std::pair<Allocation, OptimalityReport> allocate_stimulus(const AllocationProblem& prob);

/// Splits n into m equal parts; the part product is maximal over all
/// positive partitions.
std::vector<double> fechner_partition(double n, std::size_t m);

/// Re-derives the optimality certificate for an arbitrary feasible
/// allocation. Throws validation_error (listing violated constraints) when
/// the allocation is infeasible for the problem.
OptimalityReport verify_optimality(const AllocationProblem& prob, const Allocation& a);

}  // namespace edgeworth
