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

#include <cstddef>
#include <utility>
#include <vector>

#include "edgeworth/errors.hpp"

namespace edgeworth {

enum class UtilityKind { cobb_douglas, log_linear };

/// Two-good utility. Cobb-Douglas x^a * y^(1-a) with a in (0,1), or
/// log-linear a*ln(x) + b*ln(y) with a, b > 0. Both keep the marginal rate
/// of substitution equal to (a/b)*(y/x), which gives the contract curve a
/// closed form.
class UtilitySpec {
public:
    static UtilitySpec cobb_douglas(double alpha);
    static UtilitySpec log_linear(double a, double b);

    double value(double x, double y) const;
    double grad_x(double x, double y) const;
    double grad_y(double x, double y) const;
    double mrs(double x, double y) const;  // grad_x / grad_y

    UtilityKind kind() const { return kind_; }
    double weight_x() const { return a_; }
    double weight_y() const { return b_; }

private:
    UtilitySpec(UtilityKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    UtilityKind kind_;
    double a_, b_;
};

/// A trader: a utility over own consumption plus a sympathy coefficient
/// weighting the other trader's utility.
struct Agent {
    UtilitySpec utility;
    double sympathy = 0.0;  // lambda in [0, 1]
};

enum class Side { A, B };

/// Two agents, fixed totals of two goods, an initial split.
class BoxEconomy {
public:
    BoxEconomy(Agent a, Agent b, double total_x, double total_y, double endow_ax,
               double endow_ay);

    const Agent& agent_a() const { return a_; }
    const Agent& agent_b() const { return b_; }
    double total_x() const { return tx_; }
    double total_y() const { return ty_; }
    double endow_ax() const { return eax_; }
    double endow_ay() const { return eay_; }

private:
    Agent a_, b_;
    double tx_, ty_;
    double eax_, eay_;
};

/// Agent A's bundle; B consumes the complement.
struct BoxAllocation {
    double ax = 0.0;
    double ay = 0.0;
};

struct CurveSample {
    double t = 0.0;  // normalized arc length, 0 = B-favoring end
    BoxAllocation alloc;
    double utility_a = 0.0;
    double utility_b = 0.0;
};

enum class SegmentKind {
    contract_curve,
    sympathized_contract_curve,
    final_settlements,
    replica_core,
};

struct CurveSegment {
    SegmentKind kind = SegmentKind::contract_curve;
    std::vector<CurveSample> samples;
    bool plateau = false;  // the utility sum is flat along the locus

    bool empty() const { return samples.empty(); }
    double parameter_width() const;
};

/// The zero-sympathy settlement locus with its arc-length parameterization;
/// shared geometry behind every curve operation.
class ContractLocus {
public:
    explicit ContractLocus(const BoxEconomy& e, std::size_t mesh = 4096);

    double y_of_x(double x) const;
    BoxAllocation at(double t) const;
    double parameter_of_x(double x) const;

    /// Supporting utility-weight ratio r(t): the point at t maximizes
    /// U_A + r * U_B. Non-increasing in t.
    double support_ratio(double t) const;

    double utility_a(double t) const;
    double utility_b(double t) const;
    double utility_sum(double t) const;

    /// Largest t with U_B(t) >= target (U_B decreases in t), and smallest t
    /// with U_A(t) >= target; both clipped to [t_min, t_max].
    double solve_utility_a(double target) const;
    double solve_utility_b(double target) const;

    bool plateau() const { return plateau_; }
    const BoxEconomy& economy() const { return econ_; }

private:
    BoxEconomy econ_;
    double p_, q_;  // cross products of utility weights
    std::vector<double> xs_, ts_;
    bool plateau_ = false;
};

double utility(const Agent& a, double x, double y);
double sympathized_utility(const BoxEconomy& e, Side who, const BoxAllocation& alloc);

/// Samples the settlement locus for the economy's sympathy coefficients.
/// Positive sympathy narrows the sampled range (kind becomes
/// sympathized_contract_curve); each sample is post-verified undominated on
/// a local stencil.
CurveSegment contract_curve(const BoxEconomy& e, std::size_t resolution);

/// Settlements both agents weakly prefer to their endowments (two-agent core).
CurveSegment final_settlements(const BoxEconomy& e, std::size_t resolution);

bool is_indeterminate(const CurveSegment& seg);

struct Equilibrium {
    double price = 0.0;  // good X in units of good Y
    BoxAllocation alloc;
    double parameter = 0.0;  // position on the settlement locus
};

/// Price-taking equilibrium from the endowment; sympathy ignored.
Equilibrium competitive_equilibrium(const BoxEconomy& e);

/// Final settlements that no coalition in the n-fold replica economy can
/// block. Blocking is tested along each coalition's own settlement locus.
CurveSegment replica_core(const BoxEconomy& e, std::size_t n, std::size_t resolution);

struct UtilitarianPoint {
    BoxAllocation alloc;
    double value = 0.0;   // max of U_A + U_B
    bool plateau = false; // the maximum is attained on a continuum
};

/// Maximizer of the unweighted utility sum: grid scan polished by Newton
/// ascent. When the maximum is attained on a continuum the plateau flag is
/// set and the point is only a deterministic representative of the set.
UtilitarianPoint utilitarian_point(const BoxEconomy& e, std::size_t resolution);

/// Allocation at the parameter midpoint of a segment.
BoxAllocation split_the_difference(const CurveSegment& seg);

}  // namespace edgeworth
