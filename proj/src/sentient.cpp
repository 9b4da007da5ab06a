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

#include "edgeworth/sentient.hpp"

#include <cmath>

namespace edgeworth {

ResponseCurve ResponseCurve::logarithmic() {
    return ResponseCurve(CurveKind::logarithmic, 0.0);
}

ResponseCurve ResponseCurve::power(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw domain_error("power curve exponent must satisfy 0 < alpha < 1, got " +
                           std::to_string(alpha));
    }
    return ResponseCurve(CurveKind::power, alpha);
}

double ResponseCurve::value(double y) const {
    if (!(y > 0.0)) throw domain_error("response curve requires stimulus y > 0");
    return kind_ == CurveKind::logarithmic ? std::log(y) : std::pow(y, alpha_);
}

double ResponseCurve::slope(double y) const {
    if (!(y > 0.0)) throw domain_error("response curve requires stimulus y > 0");
    return kind_ == CurveKind::logarithmic ? 1.0 / y : alpha_ * std::pow(y, alpha_ - 1.0);
}

double ResponseCurve::curvature(double y) const {
    if (!(y > 0.0)) throw domain_error("response curve requires stimulus y > 0");
    return kind_ == CurveKind::logarithmic
               ? -1.0 / (y * y)
               : alpha_ * (alpha_ - 1.0) * std::pow(y, alpha_ - 2.0);
}

double ResponseCurve::slope_inverse(double m) const {
    if (!(m > 0.0)) throw domain_error("slope_inverse requires a positive marginal value");
    return kind_ == CurveKind::logarithmic ? 1.0 / m
                                           : std::pow(m / alpha_, 1.0 / (alpha_ - 1.0));
}

Sentient::Sentient(std::string label, double capacity_pleasure, double threshold,
                   ResponseCurve curve)
    : label_(std::move(label)),
      capacity_(capacity_pleasure),
      threshold_(threshold),
      curve_(curve),
      f_threshold_(0.0) {
    if (!(capacity_ > 0.0)) {
        throw validation_error("sentient '" + label_ + "': capacity_pleasure must be > 0");
    }
    if (curve_.kind() == CurveKind::logarithmic) {
        if (!(threshold_ > 0.0)) {
            throw validation_error("sentient '" + label_ +
                                   "': threshold must be > 0 under a logarithmic curve");
        }
        f_threshold_ = curve_.value(threshold_);
    } else {
        if (threshold_ < 0.0) {
            throw validation_error("sentient '" + label_ + "': threshold must be >= 0");
        }
        // power curves extend continuously to f(0) = 0
        f_threshold_ = threshold_ > 0.0 ? curve_.value(threshold_) : 0.0;
    }
}

Population::Population(std::vector<Sentient> sentients) : sentients_(std::move(sentients)) {
    if (sentients_.empty()) throw validation_error("population must contain at least one sentient");
    const CurveKind kind = sentients_.front().curve().kind();
    for (const Sentient& s : sentients_) {
        if (s.curve().kind() != kind) {
            throw validation_error("population mixes response curve kinds (sentient '" +
                                   s.label() + "')");
        }
    }
}

Allocation::Allocation(std::vector<double> a) : amounts(std::move(a)) {
    for (std::size_t i = 0; i < amounts.size(); ++i) {
        if (amounts[i] < 0.0) {
            throw validation_error("allocation amount " + std::to_string(i) +
                                   " is negative");
        }
    }
}

double pleasure(const Sentient& s, double y) {
    if (!(y > 0.0)) throw domain_error("pleasure requires stimulus y > 0");
    return s.capacity_pleasure() * (s.curve().value(y) - s.threshold_value());
}

double marginal_pleasure(const Sentient& s, double y) {
    if (!(y > 0.0)) throw domain_error("marginal_pleasure requires stimulus y > 0");
    return s.capacity_pleasure() * s.curve().slope(y);
}

double total_pleasure(const Population& p, const Allocation& a) {
    if (a.size() != p.size()) {
        throw shape_error("allocation length " + std::to_string(a.size()) +
                          " does not match population size " + std::to_string(p.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(a.amounts[i] > 0.0)) {
            throw domain_error("total_pleasure requires strictly positive amounts (index " +
                               std::to_string(i) + ")");
        }
        total += pleasure(p.at(i), a.amounts[i]);
    }
    return total;
}

}  // namespace edgeworth
