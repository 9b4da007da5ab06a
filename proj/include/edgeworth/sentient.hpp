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

#include <string>
#include <vector>

#include "edgeworth/errors.hpp"

namespace edgeworth {

enum class CurveKind { logarithmic, power };

/// Strictly increasing, strictly concave response function on (0, inf).
/// Two built-in shapes: f(y) = ln y and f(y) = y^alpha with 0 < alpha < 1.
class ResponseCurve {
public:
    static ResponseCurve logarithmic();
    static ResponseCurve power(double alpha);

    double value(double y) const;          // f(y), y > 0
    double slope(double y) const;          // f'(y), y > 0
    double curvature(double y) const;      // f''(y), y > 0
    double slope_inverse(double m) const;  // y with f'(y) = m, m > 0

    CurveKind kind() const { return kind_; }
    double exponent() const { return alpha_; }

private:
    ResponseCurve(CurveKind kind, double alpha) : kind_(kind), alpha_(alpha) {}

    CurveKind kind_;
    double alpha_;  // meaningful for power only
};

/// One sentient: capacity for pleasure k, threshold beta, response curve.
/// Pleasure from stimulus y is k * (f(y) - f(beta)); below the threshold the
/// value is negative and read as pain.
class Sentient {
public:
    Sentient(std::string label, double capacity_pleasure, double threshold,
             ResponseCurve curve);

    const std::string& label() const { return label_; }
    double capacity_pleasure() const { return capacity_; }
    double threshold() const { return threshold_; }
    const ResponseCurve& curve() const { return curve_; }
    double threshold_value() const { return f_threshold_; }  // f(beta)

private:
    std::string label_;
    double capacity_;
    double threshold_;
    ResponseCurve curve_;
    double f_threshold_;
};

/// Ordered, non-empty collection of sentients sharing one curve kind.
class Population {
public:
    explicit Population(std::vector<Sentient> sentients);

    std::size_t size() const { return sentients_.size(); }
    const Sentient& at(std::size_t i) const { return sentients_.at(i); }
    const std::vector<Sentient>& sentients() const { return sentients_; }

private:
    std::vector<Sentient> sentients_;
};

/// Per-sentient stimulus amounts, aligned with a population's order.
struct Allocation {
    std::vector<double> amounts;

    explicit Allocation(std::vector<double> a);
    std::size_t size() const { return amounts.size(); }
};

double pleasure(const Sentient& s, double y);
double marginal_pleasure(const Sentient& s, double y);
double total_pleasure(const Population& p, const Allocation& a);

}  // namespace edgeworth
