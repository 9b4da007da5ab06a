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

#include "edgeworth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace edgeworth::oracle {

namespace {

double improvement_margin(double u) { return 1e-9 * (1.0 + std::abs(u)); }

/// f(y) extended with f(0) = 0 for power curves (grid points may sit at a
/// zero floor there).
double curve_value(const ResponseCurve& c, double y) {
    if (y == 0.0 && c.kind() == CurveKind::power) return 0.0;
    return c.value(y);
}

double grid_pleasure(const Sentient& s, double y) {
    return s.capacity_pleasure() * (curve_value(s.curve(), y) - s.threshold_value());
}

}  // namespace

GridWelfareResult grid_maximize_welfare(const Population& p, double total, const GridSpec& g,
                                        std::optional<std::vector<double>> floors) {
    const std::size_t n = p.size();
    if (n > 4) throw domain_error("grid_maximize_welfare is guarded to populations of <= 4");
    if (!(total > 0.0)) throw validation_error("total must be > 0");

    std::vector<double> floor(n, 0.0);
    if (floors) {
        if (floors->size() != n) throw shape_error("floors length must match population size");
        floor = *floors;
    } else {
        for (std::size_t i = 0; i < n; ++i) floor[i] = p.at(i).threshold();
    }
    const double floor_total = std::accumulate(floor.begin(), floor.end(), 0.0);
    if (total < floor_total * (1.0 - 1e-14)) {
        std::ostringstream msg;
        msg << "no feasible grid point: total " << total << " below the floor sum " << floor_total
            << " (deficit " << (floor_total - total) << ")";
        throw infeasible_error(msg.str(), floor_total - total);
    }

    const double slack = std::max(0.0, total - floor_total);
    const double h = slack / static_cast<double>(g.steps);

    std::vector<std::size_t> comp(n, 0);
    std::vector<double> amounts(n, 0.0);
    std::vector<double> best_amounts;
    double best = -std::numeric_limits<double>::infinity();

    // Depth-first over compositions of `steps`; lexicographic order makes ties
    // deterministic (first, i.e. lowest index, wins).
    const auto evaluate = [&]() {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            amounts[i] = floor[i] + static_cast<double>(comp[i]) * h;
            if (amounts[i] == 0.0 && p.at(i).curve().kind() == CurveKind::logarithmic) return;
            obj += grid_pleasure(p.at(i), amounts[i]);
        }
        if (obj > best) {
            best = obj;
            best_amounts = amounts;
        }
    };
    const auto recurse = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
        if (idx + 1 == n) {
            comp[idx] = left;
            evaluate();
            return;
        }
        for (std::size_t take = 0; take <= left; ++take) {
            comp[idx] = take;
            self(self, idx + 1, left - take);
        }
    };
    recurse(recurse, 0, g.steps);

    if (best_amounts.empty()) {
        throw infeasible_error("no feasible grid point for the welfare oracle", 0.0);
    }
    return GridWelfareResult{Allocation(best_amounts), best};
}

std::vector<BoxAllocation> grid_pareto_set(const BoxEconomy& e, const GridSpec& g) {
    struct Point {
        double wa, wb;
        double x, y;
    };
    std::vector<Point> pts;
    pts.reserve(g.steps * g.steps);
    for (std::size_t i = 0; i < g.steps; ++i) {
        for (std::size_t j = 0; j < g.steps; ++j) {
            const double x =
                e.total_x() * (static_cast<double>(i) + 0.5) / static_cast<double>(g.steps);
            const double y =
                e.total_y() * (static_cast<double>(j) + 0.5) / static_cast<double>(g.steps);
            const BoxAllocation a{x, y};
            pts.push_back({sympathized_utility(e, Side::A, a),
                           sympathized_utility(e, Side::B, a), x, y});
        }
    }
    std::sort(pts.begin(), pts.end(), [](const Point& l, const Point& r) {
        if (l.wa != r.wa) return l.wa > r.wa;
        if (l.wb != r.wb) return l.wb > r.wb;
        return l.x < r.x || (l.x == r.x && l.y < r.y);
    });

    std::vector<BoxAllocation> keep;
    double best_wb_above = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j < pts.size() && pts[j].wa == pts[i].wa) ++j;
        const double group_max_wb = pts[i].wb;  // sorted descending inside the group
        for (std::size_t k = i; k < j; ++k) {
            if (pts[k].wb == group_max_wb && pts[k].wb > best_wb_above) {
                keep.push_back({pts[k].x, pts[k].y});
            }
        }
        best_wb_above = std::max(best_wb_above, group_max_wb);
        i = j;
    }
    std::sort(keep.begin(), keep.end(), [](const BoxAllocation& l, const BoxAllocation& r) {
        return l.ax < r.ax || (l.ax == r.ax && l.ay < r.ay);
    });
    return keep;
}

std::optional<BlockingCoalition> blocking_coalition_search(const BoxEconomy& e, std::size_t n,
                                                           const BoxAllocation& alloc,
                                                           const GridSpec& g) {
    if (n == 0 || n > 6) throw domain_error("blocking_coalition_search supports 1 <= n <= 6");
    const double X = e.total_x(), Y = e.total_y();
    const double bx = X - alloc.ax, by = Y - alloc.ay;
    if (!(alloc.ax > 0.0) || !(alloc.ay > 0.0) || !(bx > 0.0) || !(by > 0.0)) {
        throw validation_error("allocation must lie strictly inside the box");
    }
    const double ua = e.agent_a().utility.value(alloc.ax, alloc.ay);
    const double ub = e.agent_b().utility.value(bx, by);
    const double wax = e.endow_ax(), way = e.endow_ay();
    const double wbx = X - wax, wby = Y - way;

    const auto safe_value = [](const UtilitySpec& u, double x, double y) {
        if (!(x > 0.0) || !(y > 0.0)) {
            return u.kind() == UtilityKind::cobb_douglas
                       ? 0.0
                       : -std::numeric_limits<double>::infinity();
        }
        return u.value(x, y);
    };

    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            if (i == 0 && j == 0) continue;
            if (j == 0) {  // A-types consume their own endowments
                if (safe_value(e.agent_a().utility, wax, way) > ua + improvement_margin(ua)) {
                    return BlockingCoalition{i, 0, wax, way, 0.0, 0.0};
                }
                continue;
            }
            if (i == 0) {
                if (safe_value(e.agent_b().utility, wbx, wby) > ub + improvement_margin(ub)) {
                    return BlockingCoalition{0, j, 0.0, 0.0, wbx, wby};
                }
                continue;
            }
            const double di = static_cast<double>(i), dj = static_cast<double>(j);
            const double rx = di * wax + dj * wbx;
            const double ry = di * way + dj * wby;
            for (std::size_t a = 0; a < g.steps; ++a) {
                for (std::size_t b = 0; b < g.steps; ++b) {
                    const double zx = rx / di * (static_cast<double>(a) + 0.5) /
                                      static_cast<double>(g.steps);
                    const double zy = ry / di * (static_cast<double>(b) + 0.5) /
                                      static_cast<double>(g.steps);
                    const double zbx = (rx - di * zx) / dj;
                    const double zby = (ry - di * zy) / dj;
                    if (safe_value(e.agent_a().utility, zx, zy) > ua + improvement_margin(ua) &&
                        safe_value(e.agent_b().utility, zbx, zby) > ub + improvement_margin(ub)) {
                        return BlockingCoalition{i, j, zx, zy, zbx, zby};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<GridJointResult> grid_maximize_joint_welfare(const SectionedSociety& soc,
                                                           double required_output,
                                                           const GridSpec& g,
                                                           bool respect_floor) {
    const std::size_t n = soc.size();
    if (n > 3) throw domain_error("grid_maximize_joint_welfare is guarded to <= 3 sections");
    const double total_means = required_output + soc.external_endowment();
    const double total_work = required_output;
    if (!(total_means > 0.0)) throw validation_error("output + endowment must be > 0");

    const double hm = total_means / static_cast<double>(g.steps);
    const double hw = total_work / static_cast<double>(g.steps);

    std::vector<std::size_t> mcomp(n, 0), wcomp(n, 0);
    double best = -std::numeric_limits<double>::infinity();
    JointAllocation best_ja;

    const auto evaluate = [&]() {
        JointAllocation ja;
        ja.means.resize(n);
        ja.work.resize(n);
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Section& s = soc.sections()[i];
            const double cnt = static_cast<double>(s.count);
            if (mcomp[i] == 0) return;  // every member needs some means
            ja.means[i] = static_cast<double>(mcomp[i]) * hm / cnt;
            ja.work[i] = total_work > 0.0 ? static_cast<double>(wcomp[i]) * hw / cnt : 0.0;
            const double net = net_happiness(s, ja.means[i], ja.work[i]);
            if (respect_floor && net < soc.happiness_floor() - 1e-12) return;
            obj += cnt * net;
        }
        if (obj > best) {
            best = obj;
            best_ja = ja;
        }
    };

    const auto recurse_w = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
        if (idx + 1 == n) {
            wcomp[idx] = left;
            evaluate();
            return;
        }
        for (std::size_t take = 0; take <= left; ++take) {
            wcomp[idx] = take;
            self(self, idx + 1, left - take);
        }
    };
    const auto recurse_m = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
        if (idx + 1 == n) {
            mcomp[idx] = left;
            if (total_work > 0.0) {
                recurse_w(recurse_w, 0, g.steps);
            } else {
                evaluate();
            }
            return;
        }
        for (std::size_t take = 0; take <= left; ++take) {
            mcomp[idx] = take;
            self(self, idx + 1, left - take);
        }
    };
    recurse_m(recurse_m, 0, g.steps);

    if (best == -std::numeric_limits<double>::infinity()) return std::nullopt;
    return GridJointResult{std::move(best_ja), best};
}

}  // namespace edgeworth::oracle
