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

#include "edgeworth/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace edgeworth {

namespace {

constexpr double kEdgeT = 1e-9;      // parameter margin kept away from the corners
constexpr double kCollapseT = 1e-6;  // determinate width: such segments are a single point

double strict_margin(double u) { return 1e-9 * (1.0 + std::abs(u)); }

}  // namespace

// ---------------------------------------------------------------------------
// UtilitySpec

UtilitySpec UtilitySpec::cobb_douglas(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw validation_error("cobb_douglas exponent must satisfy 0 < alpha < 1");
    }
    return UtilitySpec(UtilityKind::cobb_douglas, alpha, 1.0 - alpha);
}

UtilitySpec UtilitySpec::log_linear(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw validation_error("log_linear weights must be > 0");
    }
    return UtilitySpec(UtilityKind::log_linear, a, b);
}

double UtilitySpec::value(double x, double y) const {
    if (!(x > 0.0) || !(y > 0.0)) throw domain_error("utility requires a strictly positive bundle");
    if (kind_ == UtilityKind::cobb_douglas) return std::pow(x, a_) * std::pow(y, b_);
    return a_ * std::log(x) + b_ * std::log(y);
}

double UtilitySpec::grad_x(double x, double y) const {
    if (!(x > 0.0) || !(y > 0.0)) throw domain_error("utility requires a strictly positive bundle");
    if (kind_ == UtilityKind::cobb_douglas) return a_ * std::pow(x, a_ - 1.0) * std::pow(y, b_);
    return a_ / x;
}

double UtilitySpec::grad_y(double x, double y) const {
    if (!(x > 0.0) || !(y > 0.0)) throw domain_error("utility requires a strictly positive bundle");
    if (kind_ == UtilityKind::cobb_douglas) return b_ * std::pow(x, a_) * std::pow(y, b_ - 1.0);
    return b_ / y;
}

double UtilitySpec::mrs(double x, double y) const { return grad_x(x, y) / grad_y(x, y); }

// ---------------------------------------------------------------------------
// BoxEconomy

BoxEconomy::BoxEconomy(Agent a, Agent b, double total_x, double total_y, double endow_ax,
                       double endow_ay)
    : a_(a), b_(b), tx_(total_x), ty_(total_y), eax_(endow_ax), eay_(endow_ay) {
    if (!(tx_ > 0.0) || !(ty_ > 0.0)) throw validation_error("box totals must be > 0");
    if (eax_ < 0.0 || eax_ > tx_ || eay_ < 0.0 || eay_ > ty_) {
        throw validation_error("endowment_a must lie within the box");
    }
    if (a_.sympathy < 0.0 || a_.sympathy > 1.0 || b_.sympathy < 0.0 || b_.sympathy > 1.0) {
        throw validation_error("sympathy coefficients must lie in [0, 1]");
    }
}

double utility(const Agent& a, double x, double y) { return a.utility.value(x, y); }

double sympathized_utility(const BoxEconomy& e, Side who, const BoxAllocation& alloc) {
    const double bx = e.total_x() - alloc.ax;
    const double by = e.total_y() - alloc.ay;
    if (!(alloc.ax > 0.0) || !(alloc.ay > 0.0) || !(bx > 0.0) || !(by > 0.0)) {
        throw domain_error("allocation must lie strictly inside the box");
    }
    const double ua = e.agent_a().utility.value(alloc.ax, alloc.ay);
    const double ub = e.agent_b().utility.value(bx, by);
    return who == Side::A ? ua + e.agent_a().sympathy * ub
                          : ub + e.agent_b().sympathy * ua;
}

// ---------------------------------------------------------------------------
// ContractLocus

ContractLocus::ContractLocus(const BoxEconomy& e, std::size_t mesh) : econ_(e) {
    const UtilitySpec& ua = e.agent_a().utility;
    const UtilitySpec& ub = e.agent_b().utility;
    p_ = ua.weight_x() * ub.weight_y();
    q_ = ub.weight_x() * ua.weight_y();

    const double X = e.total_x();
    xs_.resize(mesh + 1);
    ts_.resize(mesh + 1);
    double length = 0.0;
    double prev_y = 0.0;
    xs_[0] = 0.0;
    ts_[0] = 0.0;
    for (std::size_t i = 1; i <= mesh; ++i) {
        xs_[i] = X * static_cast<double>(i) / static_cast<double>(mesh);
        const double y = y_of_x(xs_[i]);
        const double dx = xs_[i] - xs_[i - 1];
        const double dy = y - prev_y;
        length += std::sqrt(dx * dx + dy * dy);
        ts_[i] = length;
        prev_y = y;
    }
    for (double& t : ts_) t /= length;

    // Flat utility-sum detection (homogeneous symmetric case).
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 1; i < mesh; ++i) {
        const double x = xs_[i];
        const double y = y_of_x(x);
        const double s = econ_.agent_a().utility.value(x, y) +
                         econ_.agent_b().utility.value(econ_.total_x() - x, econ_.total_y() - y);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    plateau_ = (hi - lo) < 1e-9 * (1.0 + std::abs(hi));
}

double ContractLocus::y_of_x(double x) const {
    const double X = econ_.total_x();
    const double Y = econ_.total_y();
    return q_ * x * Y / (p_ * (X - x) + q_ * x);
}

BoxAllocation ContractLocus::at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t i = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
    if (i >= ts_.size() - 1) i = ts_.size() - 2;
    const double span = ts_[i + 1] - ts_[i];
    const double frac = span > 0.0 ? (t - ts_[i]) / span : 0.0;
    const double x = xs_[i] + frac * (xs_[i + 1] - xs_[i]);
    return {x, y_of_x(x)};
}

double ContractLocus::parameter_of_x(double x) const {
    const double X = econ_.total_x();
    x = std::clamp(x, 0.0, X);
    const std::size_t mesh = xs_.size() - 1;
    const double h = X / static_cast<double>(mesh);
    std::size_t i = static_cast<std::size_t>(x / h);
    if (i >= mesh) i = mesh - 1;
    const double frac = (x - xs_[i]) / h;
    return ts_[i] + frac * (ts_[i + 1] - ts_[i]);
}

double ContractLocus::support_ratio(double t) const {
    const BoxAllocation z = at(std::clamp(t, kEdgeT, 1.0 - kEdgeT));
    const double bx = econ_.total_x() - z.ax;
    const double by = econ_.total_y() - z.ay;
    return econ_.agent_a().utility.grad_x(z.ax, z.ay) / econ_.agent_b().utility.grad_x(bx, by);
}

double ContractLocus::utility_a(double t) const {
    const BoxAllocation z = at(t);
    return econ_.agent_a().utility.value(z.ax, z.ay);
}

double ContractLocus::utility_b(double t) const {
    const BoxAllocation z = at(t);
    return econ_.agent_b().utility.value(econ_.total_x() - z.ax, econ_.total_y() - z.ay);
}

double ContractLocus::utility_sum(double t) const { return utility_a(t) + utility_b(t); }

double ContractLocus::solve_utility_a(double target) const {
    double lo = kEdgeT, hi = 1.0 - kEdgeT;
    if (utility_a(lo) >= target) return lo;
    if (utility_a(hi) <= target) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (utility_a(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ContractLocus::solve_utility_b(double target) const {
    double lo = kEdgeT, hi = 1.0 - kEdgeT;
    if (utility_b(hi) >= target) return hi;
    if (utility_b(lo) <= target) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (utility_b(mid) >= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Curve operations

double CurveSegment::parameter_width() const {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
}

namespace {

/// Sympathy restriction of the settlement locus in the supporting-weight
/// ratio: keep r(t) in [lambda_a, 1/lambda_b]. r is non-increasing in t, so
/// the kept set is an interval.
std::pair<double, double> sympathy_bounds(const ContractLocus& locus, double lambda_a,
                                          double lambda_b) {
    double lo = kEdgeT, hi = 1.0 - kEdgeT;
    if (lambda_b > 0.0) {
        const double cap = 1.0 / lambda_b;
        // smallest t with r(t) <= cap
        if (locus.support_ratio(lo) > cap) {
            double a = lo, b = hi;
            if (locus.support_ratio(b) > cap) {
                lo = b;
            } else {
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (a + b);
                    (locus.support_ratio(mid) > cap ? a : b) = mid;
                }
                lo = 0.5 * (a + b);
            }
        }
    }
    if (lambda_a > 0.0) {
        // largest t with r(t) >= lambda_a
        if (locus.support_ratio(hi) < lambda_a) {
            double a = lo, b = hi;
            if (locus.support_ratio(a) < lambda_a) {
                hi = a;
            } else {
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (a + b);
                    (locus.support_ratio(mid) >= lambda_a ? a : b) = mid;
                }
                hi = 0.5 * (a + b);
            }
        }
    }
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    return {lo, hi};
}

CurveSample sample_at(const ContractLocus& locus, double t) {
    CurveSample s;
    s.t = t;
    s.alloc = locus.at(t);
    s.utility_a = locus.utility_a(t);
    s.utility_b = locus.utility_b(t);
    return s;
}

std::vector<CurveSample> sample_range(const ContractLocus& locus, double t_lo, double t_hi,
                                      std::size_t resolution) {
    std::vector<CurveSample> out;
    if (t_hi - t_lo < kCollapseT) {
        out.push_back(sample_at(locus, 0.5 * (t_lo + t_hi)));
        return out;
    }
    out.reserve(resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        const double t =
            t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(resolution - 1);
        out.push_back(sample_at(locus, t));
    }
    return out;
}

void check_ordering(const std::vector<CurveSample>& samples) {
    for (std::size_t j = 1; j < samples.size(); ++j) {
        if (!(samples[j].utility_a > samples[j - 1].utility_a) ||
            !(samples[j].utility_b < samples[j - 1].utility_b)) {
            throw solver_error("curve samples are not in reverse order of desirability");
        }
    }
}

/// No stencil neighbor may improve both sympathized utilities at once.
void check_undominated(const BoxEconomy& e, const std::vector<CurveSample>& samples,
                       std::size_t resolution) {
    const double hx = e.total_x() / static_cast<double>(resolution);
    const double hy = e.total_y() / static_cast<double>(resolution);
    const int offs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                            {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    for (const CurveSample& s : samples) {
        const double wa = sympathized_utility(e, Side::A, s.alloc);
        const double wb = sympathized_utility(e, Side::B, s.alloc);
        for (const auto& d : offs) {
            const BoxAllocation nb{s.alloc.ax + d[0] * hx, s.alloc.ay + d[1] * hy};
            if (!(nb.ax > 0.0) || !(nb.ay > 0.0) || !(nb.ax < e.total_x()) ||
                !(nb.ay < e.total_y())) {
                continue;
            }
            const double wa2 = sympathized_utility(e, Side::A, nb);
            const double wb2 = sympathized_utility(e, Side::B, nb);
            if (wa2 > wa + strict_margin(wa) && wb2 > wb + strict_margin(wb)) {
                throw solver_error("contract curve sample dominated by a stencil neighbor");
            }
        }
    }
}

}  // namespace

CurveSegment contract_curve(const BoxEconomy& e, std::size_t resolution) {
    if (resolution < 2) throw validation_error("resolution must be >= 2");
    const ContractLocus locus(e);
    const double half = 0.5 / static_cast<double>(resolution);

    const double la = e.agent_a().sympathy;
    const double lb = e.agent_b().sympathy;
    double t_lo = half, t_hi = 1.0 - half;
    const bool sympathized = la > 0.0 || lb > 0.0;
    if (sympathized) {
        auto [lo, hi] = sympathy_bounds(locus, la, lb);
        t_lo = std::clamp(lo, half, 1.0 - half);
        t_hi = std::clamp(hi, half, 1.0 - half);
        if (t_lo > t_hi) t_lo = t_hi = 0.5 * (t_lo + t_hi);
    }

    CurveSegment seg;
    seg.kind = sympathized ? SegmentKind::sympathized_contract_curve : SegmentKind::contract_curve;
    seg.plateau = locus.plateau();
    seg.samples = sample_range(locus, t_lo, t_hi, resolution);
    check_ordering(seg.samples);
    check_undominated(e, seg.samples, resolution);
    return seg;
}

CurveSegment final_settlements(const BoxEconomy& e, std::size_t resolution) {
    if (resolution < 2) throw validation_error("resolution must be >= 2");
    const double ebx = e.total_x() - e.endow_ax();
    const double eby = e.total_y() - e.endow_ay();
    if (!(e.endow_ax() > 0.0) || !(e.endow_ay() > 0.0) || !(ebx > 0.0) || !(eby > 0.0)) {
        throw validation_error("final_settlements requires an endowment strictly inside the box");
    }
    const ContractLocus locus(e);
    const double ua_w = e.agent_a().utility.value(e.endow_ax(), e.endow_ay());
    const double ub_w = e.agent_b().utility.value(ebx, eby);

    double t_lo = locus.solve_utility_a(ua_w);  // A's participation bound
    double t_hi = locus.solve_utility_b(ub_w);  // B's participation bound
    if (e.agent_a().sympathy > 0.0 || e.agent_b().sympathy > 0.0) {
        auto [slo, shi] = sympathy_bounds(locus, e.agent_a().sympathy, e.agent_b().sympathy);
        t_lo = std::max(t_lo, slo);
        t_hi = std::min(t_hi, shi);
        if (t_lo > t_hi) t_lo = t_hi = std::clamp(0.5 * (t_lo + t_hi), slo, shi);
    }

    CurveSegment seg;
    seg.kind = SegmentKind::final_settlements;
    seg.plateau = locus.plateau();
    seg.samples = sample_range(locus, t_lo, t_hi, resolution);
    check_ordering(seg.samples);
    return seg;
}

bool is_indeterminate(const CurveSegment& seg) { return seg.parameter_width() > 1e-6; }

// ---------------------------------------------------------------------------
// Competitive equilibrium

namespace {

/// Demand for good X at price p (numeraire Y) of a trader with endowment
/// (wx, wy): both families spend a fixed share of wealth on each good.
double demand_x(const UtilitySpec& u, double p, double wx, double wy) {
    const double share = u.weight_x() / (u.weight_x() + u.weight_y());
    return share * (p * wx + wy) / p;
}

double demand_y(const UtilitySpec& u, double p, double wx, double wy) {
    const double share = u.weight_y() / (u.weight_x() + u.weight_y());
    return share * (p * wx + wy);
}

}  // namespace

Equilibrium competitive_equilibrium(const BoxEconomy& e) {
    const double X = e.total_x();
    const double Y = e.total_y();
    const double wax = e.endow_ax(), way = e.endow_ay();
    const double wbx = X - wax, wby = Y - way;
    if ((wax <= 0.0 && way <= 0.0) || (wbx <= 0.0 && wby <= 0.0)) {
        throw validation_error("competitive_equilibrium requires both agents to own something");
    }

    const auto excess_x = [&](double p) {
        return demand_x(e.agent_a().utility, p, wax, way) +
               demand_x(e.agent_b().utility, p, wbx, wby) - X;
    };

    double lo = 1e-12, hi = 1e12;
    for (int g = 0; g < 100 && excess_x(lo) < 0.0; ++g) lo *= 0.5;
    for (int g = 0; g < 100 && excess_x(hi) > 0.0; ++g) hi *= 2.0;
    for (int it = 0; it < 300; ++it) {
        const double mid = std::sqrt(lo * hi);  // bisect in log space
        (excess_x(mid) > 0.0 ? lo : hi) = mid;
    }
    const double p = std::sqrt(lo * hi);

    Equilibrium eq;
    eq.price = p;
    eq.alloc.ax = demand_x(e.agent_a().utility, p, wax, way);
    eq.alloc.ay = demand_y(e.agent_a().utility, p, wax, way);

    const double gap_x = std::abs(excess_x(p));
    const double gap_y = std::abs(demand_y(e.agent_a().utility, p, wax, way) +
                                  demand_y(e.agent_b().utility, p, wbx, wby) - Y);
    if (gap_x > 1e-9 * X || gap_y > 1e-9 * Y) {
        throw solver_error("market clearing failed: residuals " + std::to_string(gap_x) + ", " +
                           std::to_string(gap_y));
    }

    const ContractLocus locus(e);
    eq.parameter = locus.parameter_of_x(eq.alloc.ax);
    return eq;
}

// ---------------------------------------------------------------------------
// Replica core

namespace {

/// Can a coalition of `i` A-types and `j` B-types (i, j >= 1), pooling its
/// own endowments, give every member strictly more than the candidate
/// utilities? Searched along the coalition's settlement locus, where any
/// achievable improvement must show up.
bool coalition_blocks(const BoxEconomy& e, std::size_t i, std::size_t j, double cand_ua,
                      double cand_ub) {
    const double di = static_cast<double>(i);
    const double dj = static_cast<double>(j);
    const double rx = di * e.endow_ax() + dj * (e.total_x() - e.endow_ax());
    const double ry = di * e.endow_ay() + dj * (e.total_y() - e.endow_ay());

    const UtilitySpec& ua = e.agent_a().utility;
    const UtilitySpec& ub = e.agent_b().utility;
    const double p = ua.weight_x() * ub.weight_y();
    const double q = ub.weight_x() * ua.weight_y();

    // Per-A bundle along the coalition locus, x in (0, rx/i).
    const auto bundle_a = [&](double x) {
        const double y = q * x * ry / (p * rx + di * x * (q - p));
        return BoxAllocation{x, y};
    };
    const auto util_b_at = [&](double x) {
        const BoxAllocation za = bundle_a(x);
        return ub.value((rx - di * za.ax) / dj, (ry - di * za.ay) / dj);
    };

    const double need_ub = cand_ub + strict_margin(cand_ub);
    const double x_max = rx / di;
    double lo = x_max * 1e-12, hi = x_max * (1.0 - 1e-12);
    if (util_b_at(lo) < need_ub) return false;  // coalition cannot even match B
    if (util_b_at(hi) >= need_ub) {
        lo = hi;  // B satisfied even when A-types take almost everything
    } else {
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (util_b_at(mid) >= need_ub ? lo : hi) = mid;
        }
    }
    const BoxAllocation za = bundle_a(lo);
    return ua.value(za.ax, za.ay) > cand_ua + strict_margin(cand_ua);
}

bool blocked_in_replica(const BoxEconomy& e, std::size_t n, const CurveSample& s) {
    const double ua_w = e.agent_a().utility.value(e.endow_ax(), e.endow_ay());
    const double ub_w =
        e.agent_b().utility.value(e.total_x() - e.endow_ax(), e.total_y() - e.endow_ay());
    if (ua_w > s.utility_a + strict_margin(s.utility_a)) return true;  // A's walk alone
    if (ub_w > s.utility_b + strict_margin(s.utility_b)) return true;  // B's walk alone
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (coalition_blocks(e, i, j, s.utility_a, s.utility_b)) return true;
        }
    }
    return false;
}

}  // namespace

CurveSegment replica_core(const BoxEconomy& e, std::size_t n, std::size_t resolution) {
    if (n == 0) throw domain_error("replica_core requires n >= 1");
    if (n > 6) throw domain_error("replica_core supports n <= 6");
    CurveSegment fs = final_settlements(e, resolution);

    CurveSegment core;
    core.kind = SegmentKind::replica_core;
    core.plateau = fs.plateau;
    for (const CurveSample& s : fs.samples) {
        if (!blocked_in_replica(e, n, s)) core.samples.push_back(s);
    }
    return core;
}

// ---------------------------------------------------------------------------
// Utilitarian point and bargaining midpoint

namespace {

double utility_sum_at(const BoxEconomy& e, double x, double y) {
    return e.agent_a().utility.value(x, y) +
           e.agent_b().utility.value(e.total_x() - x, e.total_y() - y);
}

struct Hessian2 {
    double xx, xy, yy;
};

double second_xx(const UtilitySpec& u, double x, double y) {
    if (u.kind() == UtilityKind::cobb_douglas) {
        return u.weight_x() * (u.weight_x() - 1.0) * std::pow(x, u.weight_x() - 2.0) *
               std::pow(y, u.weight_y());
    }
    return -u.weight_x() / (x * x);
}

double second_yy(const UtilitySpec& u, double x, double y) {
    if (u.kind() == UtilityKind::cobb_douglas) {
        return u.weight_y() * (u.weight_y() - 1.0) * std::pow(x, u.weight_x()) *
               std::pow(y, u.weight_y() - 2.0);
    }
    return -u.weight_y() / (y * y);
}

double second_xy(const UtilitySpec& u, double x, double y) {
    if (u.kind() == UtilityKind::cobb_douglas) {
        return u.weight_x() * u.weight_y() * std::pow(x, u.weight_x() - 1.0) *
               std::pow(y, u.weight_y() - 1.0);
    }
    return 0.0;
}

}  // namespace

UtilitarianPoint utilitarian_point(const BoxEconomy& e, std::size_t resolution) {
    if (resolution < 2) throw validation_error("resolution must be >= 2");
    const double X = e.total_x();
    const double Y = e.total_y();
    const ContractLocus locus(e);

    UtilitarianPoint best;
    best.plateau = locus.plateau();
    best.value = -std::numeric_limits<double>::infinity();

    const double cx = 0.5 * X, cy = 0.5 * Y;
    double best_center_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < resolution; ++i) {
        for (std::size_t j = 0; j < resolution; ++j) {
            const double x = X * (static_cast<double>(i) + 0.5) / static_cast<double>(resolution);
            const double y = Y * (static_cast<double>(j) + 0.5) / static_cast<double>(resolution);
            const double s = utility_sum_at(e, x, y);
            const double center_d = std::abs(x - cx) + std::abs(y - cy);
            // Plateaus make the argmax a set; prefer the central representative.
            const bool better =
                s > best.value + 1e-12 * (1.0 + std::abs(s)) ||
                (s > best.value - 1e-12 * (1.0 + std::abs(s)) && center_d < best_center_d);
            if (better) {
                best.value = s;
                best.alloc = {x, y};
                best_center_d = center_d;
            }
        }
    }

    if (!best.plateau) {
        // Newton ascent on the strictly concave sum; trust-region capped and
        // never moving without an accepted in-box step.
        double x = best.alloc.ax, y = best.alloc.ay;
        for (int it = 0; it < 100; ++it) {
            const double bx = X - x, by = Y - y;
            const double gx = e.agent_a().utility.grad_x(x, y) - e.agent_b().utility.grad_x(bx, by);
            const double gy = e.agent_a().utility.grad_y(x, y) - e.agent_b().utility.grad_y(bx, by);
            const double s0 = utility_sum_at(e, x, y);
            if (std::hypot(gx, gy) < 1e-12 * (1.0 + std::abs(s0))) break;
            Hessian2 h;
            h.xx = second_xx(e.agent_a().utility, x, y) + second_xx(e.agent_b().utility, bx, by);
            h.yy = second_yy(e.agent_a().utility, x, y) + second_yy(e.agent_b().utility, bx, by);
            h.xy = second_xy(e.agent_a().utility, x, y) + second_xy(e.agent_b().utility, bx, by);
            const double det = h.xx * h.yy - h.xy * h.xy;
            double dx, dy;
            if (std::abs(det) > 1e-14) {
                dx = -(h.yy * gx - h.xy * gy) / det;
                dy = -(h.xx * gy - h.xy * gx) / det;
            } else {
                dx = gx;
                dy = gy;
            }
            if (dx * gx + dy * gy <= 0.0) {  // not an ascent direction: fall back
                dx = gx;
                dy = gy;
            }
            const double reach = std::max(std::abs(dx) / X, std::abs(dy) / Y);
            if (reach > 0.25) {
                dx *= 0.25 / reach;
                dy *= 0.25 / reach;
            }
            bool moved = false;
            for (double step = 1.0; step > 1e-14; step *= 0.5) {
                const double nx = x + step * dx, ny = y + step * dy;
                if (nx > 0.0 && nx < X && ny > 0.0 && ny < Y &&
                    utility_sum_at(e, nx, ny) > s0) {
                    x = nx;
                    y = ny;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        best.alloc = {x, y};
        best.value = utility_sum_at(e, x, y);

        const double margin_x = 0.5 * X / static_cast<double>(resolution);
        const double margin_y = 0.5 * Y / static_cast<double>(resolution);
        if (x < margin_x * 1e-3 || X - x < margin_x * 1e-3 || y < margin_y * 1e-3 ||
            Y - y < margin_y * 1e-3) {
            throw domain_error(
                "utilitarian supremum attained only on the box boundary; no interior "
                "arbitration point exists for this economy");
        }
    }
    return best;
}

BoxAllocation split_the_difference(const CurveSegment& seg) {
    if (seg.empty()) throw domain_error("split_the_difference requires a nonempty segment");
    if (seg.samples.size() == 1) return seg.samples.front().alloc;
    const double t_mid = 0.5 * (seg.samples.front().t + seg.samples.back().t);
    // Interpolate between the bracketing samples.
    std::size_t hi = 1;
    while (hi + 1 < seg.samples.size() && seg.samples[hi].t < t_mid) ++hi;
    const CurveSample& s0 = seg.samples[hi - 1];
    const CurveSample& s1 = seg.samples[hi];
    const double span = s1.t - s0.t;
    const double w = span > 0.0 ? (t_mid - s0.t) / span : 0.5;
    return {s0.alloc.ax + w * (s1.alloc.ax - s0.alloc.ax),
            s0.alloc.ay + w * (s1.alloc.ay - s0.alloc.ay)};
}

}  // namespace edgeworth
