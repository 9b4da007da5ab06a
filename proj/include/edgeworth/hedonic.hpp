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
#include <string>
#include <vector>

#include "edgeworth/sentient.hpp"

namespace edgeworth {

/// A class of identical members: capacity for pleasure k, capacity for work c
/// (larger c means the same work tires less, in level and increment),
/// threshold, head count, response curve, and a convex fatigue exponent.
struct Section {
    std::string label;
    double capacity_pleasure = 1.0;  // k > 0
    double capacity_work = 1.0;      // c > 0
    double threshold = 0.0;          // beta
    std::size_t count = 1;
    ResponseCurve curve = ResponseCurve::logarithmic();
    double fatigue_exponent = 2.0;  // gamma > 1
};

/// Sections ordered by non-decreasing capacity for pleasure, a happiness
/// floor for the least favoured section, and means available beyond what the
/// society produces itself.
class SectionedSociety {
public:
    SectionedSociety(std::vector<Section> sections, double happiness_floor,
                     double external_endowment);

    const std::vector<Section>& sections() const { return sections_; }
    std::size_t size() const { return sections_.size(); }
    double happiness_floor() const { return floor_; }
    double external_endowment() const { return endowment_; }

private:
    std::vector<Section> sections_;
    double floor_;
    double endowment_;
};

/// Per-member means and work, stored once per section.
struct JointAllocation {
    std::vector<double> means;
    std::vector<double> work;
};

/// k*(f(means) - f(beta)) - work^gamma / c
double net_happiness(const Section& sec, double means, double work);

/// Sum of per-member net happiness over the whole society.
double joint_welfare(const SectionedSociety& soc, const JointAllocation& ja);

/// Analytic gradient of joint_welfare in the per-section (means, work)
/// variables; exposed so tests can difference it.
void joint_welfare_gradient(const SectionedSociety& soc, const JointAllocation& ja,
                            std::vector<double>& d_means, std::vector<double>& d_work);

/// Checks alignment, positivity and the resource balance
/// sum(count*means) = sum(count*work) + endowment (1e-9 relative).
void validate_joint_allocation(const SectionedSociety& soc, const JointAllocation& ja);

/// Maximizes total net happiness subject to producing `required_output` work
/// in total, spending (output + endowment) as means, and keeping every
/// section at or above the happiness floor. Quadratic-penalty continuation
/// followed by an active-set Newton polish of the stationarity system.
/// Throws infeasible_error (carrying the best attainable minimum happiness)
/// when the floor cannot be met.
JointAllocation allocate_means_and_work(const SectionedSociety& soc, double required_output);

struct LeastFavouredReport {
    std::size_t section = 0;
    double happiness = 0.0;
    bool floor_binding = false;
};

LeastFavouredReport least_favoured_report(const SectionedSociety& soc, const JointAllocation& ja);

}  // namespace edgeworth
