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

#include "edgeworth/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace edgeworth {

namespace {

constexpr int kMaxBisection = 200;

double sum_floors(const std::vector<double>& floors) {
    double s = 0.0;
    for (double f : floors) s += f;
    return s;
}

/// Amount sentient i takes at multiplier lambda, clamped at its floor.
double amount_at(const Sentient& s, double floor, double lambda) {
    const double interior = s.curve().slope_inverse(lambda / s.capacity_pleasure());
    return std::max(floor, interior);
}

double total_at(const Population& p, const std::vector<double>& floors, double lambda) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += amount_at(p.at(i), floors[i], lambda);
    return total;
}

}  // namespace

AllocationProblem::AllocationProblem(Population p, double total_stimulus, FloorMode mode,
                                     std::optional<double> eps)
    : population(std::move(p)), total(total_stimulus), floor_mode(mode), epsilon(eps) {
    if (!(total > 0.0)) throw validation_error("total stimulus must be > 0");
    if (epsilon && !(*epsilon > 0.0)) {
        throw validation_error("positive_floor epsilon must be > 0");
    }
}

std::vector<double> AllocationProblem::floors() const {
    std::vector<double> f(population.size());
    if (floor_mode == FloorMode::threshold_floor) {
        for (std::size_t i = 0; i < population.size(); ++i) f[i] = population.at(i).threshold();
    } else {
        const double eps = epsilon.value_or(1e-6 * total);
        std::fill(f.begin(), f.end(), eps);
    }
    return f;
}

CaseTag classify_case(const Population& p) {
    const double tol = 1e-12;
    bool equal_k = true;
    bool equal_beta = true;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (std::abs(p.at(i).capacity_pleasure() - p.at(0).capacity_pleasure()) > tol)
            equal_k = false;
        if (std::abs(p.at(i).threshold() - p.at(0).threshold()) > tol) equal_beta = false;
    }
    if (equal_k) return equal_beta ? CaseTag::equal_k_equal_beta : CaseTag::equal_k_diff_beta;
    return equal_beta ? CaseTag::diff_k_equal_beta : CaseTag::diff_k_diff_beta;
}

std::pair<Allocation, OptimalityReport> allocate_stimulus(const AllocationProblem& prob) {
    const Population& pop = prob.population;
    const std::size_t n = pop.size();
    const double total = prob.total;
    const std::vector<double> floors = prob.floors();

    const double floor_total = sum_floors(floors);
    if (total < floor_total * (1.0 - 1e-14)) {
        std::ostringstream msg;
        msg << "infeasible: total stimulus " << total << " is below the sum of floors "
            << floor_total << " (deficit " << (floor_total - total) << ")";
        throw infeasible_error(msg.str(), floor_total - total);
    }

    std::vector<double> amounts(n);
    if (total <= floor_total * (1.0 + 1e-14)) {
        // No slack: everyone sits on the floor.
        amounts = floors;
    } else {
        // Bracket the multiplier, then bisect until the budget closes.
        double min_floor = *std::min_element(floors.begin(), floors.end());
        min_floor = std::max(min_floor, 1e-12 * total);
        double lo = marginal_pleasure(pop.at(0), total);
        double hi = marginal_pleasure(pop.at(0), min_floor);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, marginal_pleasure(pop.at(i), total));
            hi = std::max(hi, marginal_pleasure(pop.at(i), min_floor));
        }
        for (int g = 0; g < 200 && total_at(pop, floors, lo) < total; ++g) lo *= 0.25;
        for (int g = 0; g < 200 && total_at(pop, floors, hi) > total; ++g) hi *= 4.0;

        double lambda = 0.5 * (lo + hi);
        for (int it = 0; it < kMaxBisection; ++it) {
            lambda = 0.5 * (lo + hi);
            const double t = total_at(pop, floors, lambda);
            if (std::abs(t - total) <= 1e-10 * total) break;
            if (t > total) {
                lo = lambda;  // taking too much: raise the price
            } else {
                hi = lambda;
            }
        }

        for (std::size_t i = 0; i < n; ++i) amounts[i] = amount_at(pop.at(i), floors[i], lambda);

        // Close the bisection residual by spreading it over interior
        // components in proportion to their size; identical sentients stay
        // identical.
        double interior_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (amounts[i] > floors[i]) interior_sum += amounts[i];
        }
        const double residual = total - std::accumulate(amounts.begin(), amounts.end(), 0.0);
        if (interior_sum > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (amounts[i] > floors[i]) amounts[i] += residual * (amounts[i] / interior_sum);
            }
        }
    }

    Allocation alloc(std::move(amounts));
    OptimalityReport report = verify_optimality(prob, alloc);
    if (report.max_kkt_residual > 1e-8) {
        throw solver_error("water-filling failed to certify: KKT residual " +
                           std::to_string(report.max_kkt_residual));
    }
    return {std::move(alloc), std::move(report)};
}

std::vector<double> fechner_partition(double n, std::size_t m) {
    if (!(n > 0.0)) throw domain_error("fechner_partition requires n > 0");
    if (m == 0) throw domain_error("fechner_partition requires at least one part");
    return std::vector<double>(m, n / static_cast<double>(m));
}

OptimalityReport verify_optimality(const AllocationProblem& prob, const Allocation& a) {
    const Population& pop = prob.population;
    const std::size_t n = pop.size();
    const std::vector<double> floors = prob.floors();

    std::vector<std::string> violations;
    if (a.size() != n) {
        throw shape_error("allocation length " + std::to_string(a.size()) +
                          " does not match population size " + std::to_string(n));
    }
    const double scale = std::max(1.0, prob.total);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += a.amounts[i];
        if (a.amounts[i] < floors[i] - 1e-9 * scale) {
            std::ostringstream v;
            v << "amount[" << i << "] = " << a.amounts[i] << " below floor " << floors[i];
            violations.push_back(v.str());
        }
    }
    if (std::abs(sum - prob.total) > 1e-9 * scale) {
        std::ostringstream v;
        v << "amounts sum to " << sum << ", budget is " << prob.total;
        violations.push_back(v.str());
    }
    if (!violations.empty()) {
        std::string msg = "infeasible allocation:";
        for (const std::string& v : violations) msg += " [" + v + "]";
        throw validation_error(msg);
    }

    OptimalityReport report;
    const double bind_tol = 1e-9 * scale;
    double marg_sum = 0.0;
    std::size_t interior = 0;
    std::vector<double> marginals(n);
    for (std::size_t i = 0; i < n; ++i) {
        marginals[i] = marginal_pleasure(pop.at(i), a.amounts[i]);
        if (a.amounts[i] <= floors[i] + bind_tol) {
            report.binding_floors.push_back(i);
        } else {
            marg_sum += marginals[i];
            ++interior;
        }
    }
    if (interior > 0) {
        report.multiplier = marg_sum / static_cast<double>(interior);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.amounts[i] > floors[i] + bind_tol) {
                report.max_kkt_residual =
                    std::max(report.max_kkt_residual, std::abs(marginals[i] - report.multiplier));
            }
        }
    } else {
        // Degenerate budget: every floor binds; the supporting multiplier is
        // the largest floor marginal.
        report.multiplier = *std::max_element(marginals.begin(), marginals.end());
    }
    return report;
}

}  // namespace edgeworth
