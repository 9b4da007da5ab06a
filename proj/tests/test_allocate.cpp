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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "edgeworth/allocate.hpp"
#include "edgeworth/oracle.hpp"
#include "support.hpp"

using namespace edgeworth;

namespace {

Population log_population(const std::vector<double>& k, const std::vector<double>& beta) {
    std::vector<Sentient> members;
    for (std::size_t i = 0; i < k.size(); ++i) {
        members.emplace_back("s" + std::to_string(i), k[i], beta[i],
                             ResponseCurve::logarithmic());
    }
    return Population(members);
}

double best_integer_composition_product(std::size_t n, std::size_t m) {
    if (m == 1) return static_cast<double>(n);
    double best = 0.0;
    for (std::size_t first = 1; first + (m - 1) <= n; ++first) {
        best = std::max(best, static_cast<double>(first) *
                                  best_integer_composition_product(n - first, m - 1));
    }
    return best;
}

}  // namespace

TEST_SUITE("allocate") {

TEST_CASE("classify_case distinguishes the four cases") {
    CHECK(classify_case(log_population({1, 1}, {1, 1})) == CaseTag::equal_k_equal_beta);
    CHECK(classify_case(log_population({1, 1}, {1, 2})) == CaseTag::equal_k_diff_beta);
    CHECK(classify_case(log_population({1, 3}, {2, 2})) == CaseTag::diff_k_equal_beta);
    CHECK(classify_case(log_population({1, 3}, {1, 2})) == CaseTag::diff_k_diff_beta);
    CHECK(classify_case(log_population({2}, {1})) == CaseTag::equal_k_equal_beta);
}

TEST_CASE("a budget equal to the floor sum pins everyone at the floor") {
    const AllocationProblem prob(log_population({1, 2}, {1.5, 0.5}), 2.0,
                                 FloorMode::threshold_floor);
    const auto [alloc, report] = allocate_stimulus(prob);
    CHECK(alloc.amounts[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(alloc.amounts[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.binding_floors.size() == 2);
}

TEST_CASE("equal sentients split the budget equally") {
    const AllocationProblem prob(log_population({1, 1}, {1, 1}), 6.0,
                                 FloorMode::threshold_floor);
    const auto [alloc, report] = allocate_stimulus(prob);
    CHECK(alloc.amounts[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(alloc.amounts[1] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(report.max_kkt_residual <= 1e-8);
    CHECK(report.binding_floors.empty());
}

TEST_CASE("capacity pulls a proportionally larger share under logarithmic curves") {
    const AllocationProblem prob(log_population({1, 2}, {0.1, 0.1}), 3.0);
    const auto [alloc, report] = allocate_stimulus(prob);
    CHECK(alloc.amounts[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(alloc.amounts[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(report.multiplier == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("a budget below the floor sum reports the deficit") {
    const AllocationProblem prob(log_population({1, 1}, {1, 1}), 1.5,
                                 FloorMode::threshold_floor);
    CHECK_THROWS_WITH_AS(static_cast<void>(allocate_stimulus(prob)),
                         doctest::Contains("deficit"), infeasible_error);
    try {
        static_cast<void>(allocate_stimulus(prob));
    } catch (const infeasible_error& e) {
        CHECK(e.detail() == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("fechner_partition returns equal parts with the stated products") {
    const std::vector<double> two = fechner_partition(12.0, 2);
    CHECK(two == std::vector<double>{6.0, 6.0});
    CHECK(two[0] * two[1] == 36.0);

    const std::vector<double> three = fechner_partition(12.0, 3);
    CHECK(three == std::vector<double>{4.0, 4.0, 4.0});
    CHECK(three[0] * three[1] * three[2] == 64.0);

    CHECK(fechner_partition(7.0, 1) == std::vector<double>{7.0});
    CHECK_THROWS_AS(fechner_partition(12.0, 0), domain_error);
    CHECK_THROWS_AS(fechner_partition(0.0, 2), domain_error);
}

TEST_CASE("equal parts beat every exhaustive integer partition") {
    for (std::size_t n = 2; n <= 12; ++n) {
        for (std::size_t m = 1; m <= std::min<std::size_t>(n, 4); ++m) {
            const std::vector<double> parts = fechner_partition(static_cast<double>(n), m);
            double product = 1.0;
            for (double p : parts) product *= p;
            CHECK(product >= best_integer_composition_product(n, m) - 1e-9);
        }
    }
}

TEST_CASE("verify_optimality flags an unbalanced allocation") {
    const AllocationProblem prob(log_population({1, 1}, {1, 1}), 6.0);
    const OptimalityReport report = verify_optimality(prob, Allocation({5.0, 1.0}));
    CHECK(report.max_kkt_residual > 0.1);
    CHECK(report.multiplier == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("verify_optimality rejects infeasible allocations and names constraints") {
    const AllocationProblem prob(log_population({1, 1}, {1, 1}), 6.0,
                                 FloorMode::threshold_floor);
    CHECK_THROWS_WITH_AS(static_cast<void>(verify_optimality(prob, Allocation({5.5, 0.2}))),
                         doctest::Contains("below floor"), validation_error);
    CHECK_THROWS_WITH_AS(static_cast<void>(verify_optimality(prob, Allocation({2.0, 2.0}))),
                         doctest::Contains("budget"), validation_error);
    CHECK_THROWS_AS(static_cast<void>(verify_optimality(prob, Allocation({6.0}))), shape_error);
}

TEST_CASE("binding thresholds are reported and respected") {
    // Large threshold pins the second sentient at its floor.
    const AllocationProblem prob(log_population({5, 1}, {0.1, 10.0}), 12.0,
                                 FloorMode::threshold_floor);
    const auto [alloc, report] = allocate_stimulus(prob);
    CHECK(alloc.amounts[1] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(alloc.amounts[0] == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(report.binding_floors.size() == 1);
    CHECK(report.binding_floors[0] == 1);
    CHECK(report.max_kkt_residual <= 1e-8);
}

TEST_CASE("equal capacities with unequal thresholds still split equally when floors are slack") {
    auto gen = testsupport::rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t s = testsupport::uniform_index(gen, 2, 6);
        const double k = testsupport::uniform(gen, 0.3, 4.0);
        std::vector<double> ks(s, k), betas;
        for (std::size_t i = 0; i < s; ++i) betas.push_back(testsupport::uniform(gen, 0.01, 0.3));
        const double total = testsupport::uniform(gen, 4.0, 12.0);
        const auto [alloc, report] =
            allocate_stimulus(AllocationProblem(log_population(ks, betas), total));
        for (double amount : alloc.amounts) {
            CHECK(std::abs(amount - total / static_cast<double>(s)) <= 1e-9);
        }
    }
}

TEST_CASE("allocations follow capacities and the closed form when floors are slack") {
    auto gen = testsupport::rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t s = testsupport::uniform_index(gen, 2, 7);
        std::vector<double> ks, betas;
        double ksum = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            ks.push_back(testsupport::uniform(gen, 0.2, 5.0) + 0.01 * static_cast<double>(i));
            betas.push_back(testsupport::uniform(gen, 0.01, 0.2));
            ksum += ks.back();
        }
        const double total = testsupport::uniform(gen, 2.0, 20.0);
        const auto [alloc, report] =
            allocate_stimulus(AllocationProblem(log_population(ks, betas), total));
        for (std::size_t i = 0; i < s; ++i) {
            const double expected = ks[i] * total / ksum;
            CHECK(std::abs(alloc.amounts[i] - expected) <= 1e-8 * expected);
            for (std::size_t j = 0; j < s; ++j) {
                if (ks[i] > ks[j]) CHECK(alloc.amounts[i] >= alloc.amounts[j] - 1e-9);
            }
        }
    }
}

TEST_CASE("scaling the budget scales a slack-floor logarithmic solution") {
    const std::vector<double> ks{0.5, 1.5, 2.5};
    const std::vector<double> betas{0.05, 0.05, 0.05};
    const double total = 5.0, factor = 3.7;
    const auto [base, r1] = allocate_stimulus(AllocationProblem(log_population(ks, betas), total));
    const auto [scaled, r2] =
        allocate_stimulus(AllocationProblem(log_population(ks, betas), factor * total));
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CHECK(std::abs(scaled.amounts[i] - factor * base.amounts[i]) <=
              1e-8 * scaled.amounts[i]);
    }
}

TEST_CASE("power-curve solves satisfy the stationarity certificate") {
    std::vector<Sentient> members;
    members.emplace_back("a", 1.0, 0.0, ResponseCurve::power(0.5));
    members.emplace_back("b", 2.0, 0.0, ResponseCurve::power(0.5));
    members.emplace_back("c", 0.7, 0.0, ResponseCurve::power(0.5));
    const AllocationProblem prob(Population(members), 9.0);
    const auto [alloc, report] = allocate_stimulus(prob);
    CHECK(report.max_kkt_residual <= 1e-8);
    // With alpha = 1/2 the stationarity condition gives shares proportional
    // to k^2.
    const double ksq = 1.0 + 4.0 + 0.49;
    CHECK(alloc.amounts[1] == doctest::Approx(9.0 * 4.0 / ksq).epsilon(1e-7));
}

TEST_CASE("solver matches the grid oracle on small instances") {
    auto gen = testsupport::rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t s = testsupport::uniform_index(gen, 2, 3);
        std::vector<double> ks, betas;
        for (std::size_t i = 0; i < s; ++i) {
            ks.push_back(testsupport::uniform(gen, 0.3, 3.0));
            betas.push_back(testsupport::uniform(gen, 0.05, 0.6));
        }
        const double total = testsupport::uniform(gen, 3.0, 8.0);
        const AllocationProblem prob(log_population(ks, betas), total,
                                     FloorMode::threshold_floor);
        const auto [alloc, report] = allocate_stimulus(prob);
        const auto grid = oracle::grid_maximize_welfare(prob.population, total,
                                                        oracle::GridSpec(120), prob.floors());
        CHECK(total_pleasure(prob.population, alloc) >= grid.objective - 1e-6);
    }
}

}  // TEST_SUITE
