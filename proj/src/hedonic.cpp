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

#include "edgeworth/hedonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace edgeworth {

namespace {

double fatigue(const Section& s, double work) {
    return std::pow(work, s.fatigue_exponent) / s.capacity_work;
}

double fatigue_slope(const Section& s, double work) {
    return s.fatigue_exponent * std::pow(work, s.fatigue_exponent - 1.0) / s.capacity_work;
}

double fatigue_curvature(const Section& s, double work) {
    return s.fatigue_exponent * (s.fatigue_exponent - 1.0) *
           std::pow(work, s.fatigue_exponent - 2.0) / s.capacity_work;
}

/// Work level with the given marginal fatigue.
double fatigue_slope_inverse(const Section& s, double marginal) {
    return std::pow(marginal * s.capacity_work / s.fatigue_exponent,
                    1.0 / (s.fatigue_exponent - 1.0));
}

double pleasure_slope(const Section& s, double means) {
    return s.capacity_pleasure * s.curve.slope(means);
}

double pleasure_curvature(const Section& s, double means) {
    return s.capacity_pleasure * s.curve.curvature(means);
}

// --- tiny dense linear solve (partial pivoting) ---------------------------

bool lu_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        if (std::abs(a[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
        b[r] = s / a[r * n + r];
    }
    return true;
}

// --- equality-constrained penalized Newton ---------------------------------
//
// maximize  sum_i count_i * net_i(m_i, w_i)
//           - rho * sum_i count_i * max(0, h_min - net_i)^2
// s.t.      sum count*m = M,  sum count*w = W.
//
// Variables are packed [m_0.., w_0..]; the start point satisfies the two
// sums, and Newton steps stay in their null space.

struct PenaltyProblem {
    const SectionedSociety* soc;
    double target_means;
    double target_work;
    double floor_value;
    double rho;
    bool work_fixed_zero;
};

std::size_t var_count(const PenaltyProblem& p) { return 2 * p.soc->size(); }

double net_of(const PenaltyProblem& p, const std::vector<double>& x, std::size_t i) {
    return net_happiness(p.soc->sections()[i], x[i], x[p.soc->size() + i]);
}

double penalized_value(const PenaltyProblem& p, const std::vector<double>& x) {
    const std::size_t n = p.soc->size();
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Section& s = p.soc->sections()[i];
        const double cnt = static_cast<double>(s.count);
        const double net = net_of(p, x, i);
        value += cnt * net;
        const double viol = std::max(0.0, p.floor_value - net);
        value -= p.rho * cnt * viol * viol;
    }
    return value;
}

void penalized_derivatives(const PenaltyProblem& p, const std::vector<double>& x,
                           std::vector<double>& grad, std::vector<double>& hess) {
    const std::size_t n = p.soc->size();
    const std::size_t nv = var_count(p);
    grad.assign(nv, 0.0);
    hess.assign(nv * nv, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const Section& s = p.soc->sections()[i];
        const double cnt = static_cast<double>(s.count);
        const double m = x[i];
        const double w = x[n + i];
        const double net_m = pleasure_slope(s, m);
        const double net_w = -fatigue_slope(s, w);
        const double net_mm = pleasure_curvature(s, m);
        // curvature blows up at w = 0 for exponents below 2; keep it finite
        const double net_ww = -fatigue_curvature(s, std::max(w, 1e-12));

        const double viol = std::max(0.0, p.floor_value - net_of(p, x, i));
        const double active = viol > 0.0 ? 1.0 : 0.0;
        const double wgt = 1.0 + 2.0 * p.rho * viol;

        grad[i] += cnt * net_m * wgt;
        grad[n + i] += cnt * net_w * wgt;
        hess[i * nv + i] += cnt * (net_mm * wgt - 2.0 * p.rho * active * net_m * net_m);
        hess[(n + i) * nv + (n + i)] +=
            cnt * (net_ww * wgt - 2.0 * p.rho * active * net_w * net_w);
        const double cross = -2.0 * p.rho * active * cnt * net_m * net_w;
        hess[i * nv + (n + i)] += cross;
        hess[(n + i) * nv + i] += cross;
    }
}

/// One bordered-KKT Newton solve; returns the step for the packed variables.
bool newton_direction(const PenaltyProblem& p, const std::vector<double>& x,
                      std::vector<double>& dx) {
    const std::size_t n = p.soc->size();
    const std::size_t nv = var_count(p);
    std::vector<double> grad, hess;
    penalized_derivatives(p, x, grad, hess);

    const std::size_t dim = nv + 2;
    std::vector<double> kkt(dim * dim, 0.0), rhs(dim, 0.0);
    for (std::size_t r = 0; r < nv; ++r) {
        for (std::size_t c = 0; c < nv; ++c) kkt[r * dim + c] = -hess[r * nv + c];
        rhs[r] = grad[r];
    }
    // Newton on a flat direction stalls; nudge the diagonal.
    for (std::size_t r = 0; r < nv; ++r) {
        if (std::abs(kkt[r * dim + r]) < 1e-12) kkt[r * dim + r] += 1e-12;
    }
    double sum_m = 0.0, sum_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cnt = static_cast<double>(p.soc->sections()[i].count);
        kkt[i * dim + nv] = cnt;
        kkt[nv * dim + i] = cnt;
        kkt[(n + i) * dim + (nv + 1)] = cnt;
        kkt[(nv + 1) * dim + (n + i)] = cnt;
        sum_m += cnt * x[i];
        sum_w += cnt * x[n + i];
    }
    rhs[nv] = p.target_means - sum_m;
    rhs[nv + 1] = p.target_work - sum_w;
    if (p.work_fixed_zero) {
        // Pin every w to zero: replace its rows with identities.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < dim; ++c) kkt[(n + i) * dim + c] = 0.0;
            kkt[(n + i) * dim + (n + i)] = 1.0;
            rhs[n + i] = -x[n + i];
        }
        for (std::size_t c = 0; c < dim; ++c) kkt[(nv + 1) * dim + c] = 0.0;
        kkt[(nv + 1) * dim + (nv + 1)] = 1.0;
        rhs[nv + 1] = 0.0;
    }
    if (!lu_solve(kkt, rhs, dim)) return false;
    dx.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(nv));
    return true;
}

// --- max-min happiness (feasibility probe) ----------------------------------
//
// Minimal means per member for net >= tau at a given work level is
// f^{-1}(f(beta) + (tau + w^gamma/c) / k); it floors at zero when a power
// curve needs no means at all. The least total means over work profiles is
// found by equalizing d(required means)/d(work); the best attainable minimum
// happiness is then the largest tau whose least total means fits the budget.

double threshold_value_of(const Section& s) {
    return (s.curve.kind() == CurveKind::power && s.threshold == 0.0)
               ? 0.0
               : s.curve.value(s.threshold);
}

double inverse_curve(const Section& s, double u) {
    if (s.curve.kind() == CurveKind::logarithmic) return std::exp(u);
    if (u <= 0.0) return 0.0;
    return std::pow(u, 1.0 / s.curve.exponent());
}

double required_means(const Section& s, double tau, double work) {
    return inverse_curve(s, threshold_value_of(s) +
                                (tau + fatigue(s, work)) / s.capacity_pleasure);
}

double required_means_slope(const Section& s, double tau, double work) {
    const double u = threshold_value_of(s) + (tau + fatigue(s, work)) / s.capacity_pleasure;
    const double du = fatigue_slope(s, work) / s.capacity_pleasure;
    if (s.curve.kind() == CurveKind::logarithmic) return std::exp(u) * du;
    if (u <= 0.0) return 0.0;
    const double alpha = s.curve.exponent();
    return (1.0 / alpha) * std::pow(u, 1.0 / alpha - 1.0) * du;
}

/// Work level whose marginal required means equals theta (increasing in work).
double work_at_marginal(const Section& s, double tau, double theta) {
    double hi = 1.0;
    for (int g = 0; g < 200 && required_means_slope(s, tau, hi) < theta; ++g) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (required_means_slope(s, tau, mid) < theta ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Least total means achieving net >= tau everywhere while producing exactly
/// total_work. Fills `work_out` with the minimizing per-member work profile.
double least_means_for(const SectionedSociety& soc, double tau, double total_work,
                       std::vector<double>* work_out) {
    const std::size_t n = soc.size();
    std::vector<double> work(n, 0.0);
    if (total_work > 0.0) {
        const auto work_total_at = [&](double theta) {
            double t = 0.0;
            for (const Section& s : soc.sections()) {
                t += static_cast<double>(s.count) * work_at_marginal(s, tau, theta);
            }
            return t;
        };
        double lo = 1e-20, hi = 1.0;
        for (int g = 0; g < 400 && work_total_at(hi) < total_work; ++g) hi *= 2.0;
        for (int g = 0; g < 400 && work_total_at(lo) > total_work; ++g) lo *= 0.25;
        for (int it = 0; it < 100; ++it) {
            const double mid = std::sqrt(lo * hi);
            (work_total_at(mid) < total_work ? lo : hi) = mid;
        }
        const double theta = std::sqrt(lo * hi);
        double got = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            work[i] = work_at_marginal(soc.sections()[i], tau, theta);
            got += static_cast<double>(soc.sections()[i].count) * work[i];
        }
        if (got > 0.0) {
            for (double& w : work) w *= total_work / got;
        }
    }
    double means = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        means += static_cast<double>(soc.sections()[i].count) *
                 required_means(soc.sections()[i], tau, work[i]);
    }
    if (work_out) *work_out = work;
    return means;
}

struct MaxminResult {
    double tau = 0.0;            // best attainable minimum happiness
    std::vector<double> means;   // witness allocation just below tau
    std::vector<double> work;
};

MaxminResult maxmin_happiness(const SectionedSociety& soc, double total_means,
                              double total_work, double tau_feasible) {
    const auto required_total = [&](double tau) {
        return least_means_for(soc, tau, total_work, nullptr);
    };
    double lo = tau_feasible;
    for (int g = 0; g < 200 && required_total(lo) > total_means; ++g) {
        lo -= std::max(1.0, std::abs(lo));
    }
    double span = 1.0;
    double hi = lo + span;
    for (int g = 0; g < 200 && required_total(hi) <= total_means; ++g) {
        lo = hi;
        span *= 2.0;
        hi = lo + span;
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (required_total(mid) <= total_means ? lo : hi) = mid;
    }

    MaxminResult out;
    out.tau = lo;
    const double back = lo - std::max(1e-7, 1e-7 * std::abs(lo));
    std::vector<double> work;
    const double used = least_means_for(soc, back, total_work, &work);
    const double slack = total_means - used;
    double members = 0.0;
    for (const Section& s : soc.sections()) members += static_cast<double>(s.count);
    out.work = work;
    out.means.resize(soc.size());
    for (std::size_t i = 0; i < soc.size(); ++i) {
        out.means[i] = required_means(soc.sections()[i], back, work[i]) +
                       std::max(0.0, slack) / members;
    }
    return out;
}

void run_penalty_stage(PenaltyProblem& p, std::vector<double>& x) {
    const std::size_t n = p.soc->size();
    for (double rho : {1e2, 1e4, 1e6, 1e8, 1e10, 1e12}) {
        p.rho = rho;
        for (int it = 0; it < 60; ++it) {
            std::vector<double> dx;
            if (!newton_direction(p, x, dx)) break;
            double step = 1.0;
            const double v0 = penalized_value(p, x);
            std::vector<double> trial(x.size());
            bool moved = false;
            while (step > 1e-13) {
                bool in_domain = true;
                for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + step * dx[k];
                for (std::size_t i = 0; i < n && in_domain; ++i) {
                    if (!(trial[i] > 0.0)) in_domain = false;
                    if (trial[n + i] < 0.0) in_domain = false;
                }
                if (in_domain && penalized_value(p, trial) > v0) {
                    x = trial;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
            double norm = 0.0;
            for (double d : dx) norm = std::max(norm, std::abs(step * d));
            if (norm < 1e-13) break;
        }
    }
}

// --- stationarity polish ----------------------------------------------------
//
// With the active floor set pinned as equalities, solve
//   (1+nu_i) k_i f'(m_i) = lambda          (nu_i = 0 off the active set)
//   (1+nu_i) gamma_i w_i^(g-1)/c_i = mu
//   sum count*m = M, sum count*w = W, net_i = h_min on the active set
// by damped Newton.

struct PolishResult {
    bool converged = false;
    std::vector<double> nu;  // active-set multipliers
};

PolishResult kkt_polish(const SectionedSociety& soc, double target_means, double target_work,
                        double floor_value, const std::vector<std::size_t>& active,
                        bool work_fixed_zero, std::vector<double>& x) {
    const std::size_t n = soc.size();
    const std::size_t na = active.size();
    const std::size_t dim = 2 * n + 2 + na;
    std::vector<std::size_t> rank(n, na);  // position of section in active list
    for (std::size_t a = 0; a < na; ++a) rank[active[a]] = a;

    // unknown layout: [m, w, lambda, mu, nu...]
    std::vector<double> u(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = x[i];
        u[n + i] = x[n + i];
    }
    // multiplier starting guesses from the current point
    double lam = 0.0, mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lam += pleasure_slope(soc.sections()[i], u[i]);
        mu += fatigue_slope(soc.sections()[i], std::max(u[n + i], 1e-30));
    }
    u[2 * n] = lam / static_cast<double>(n);
    u[2 * n + 1] = work_fixed_zero ? 0.0 : mu / static_cast<double>(n);

    PolishResult out;
    std::vector<double> jac(dim * dim), res(dim);
    for (int it = 0; it < 80; ++it) {
        std::fill(jac.begin(), jac.end(), 0.0);
        std::fill(res.begin(), res.end(), 0.0);
        const double lambda = u[2 * n];
        const double mu_w = u[2 * n + 1];
        double sum_m = 0.0, sum_w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Section& s = soc.sections()[i];
            const double cnt = static_cast<double>(s.count);
            const double m = u[i];
            const double w = u[n + i];
            const double nu = rank[i] < na ? u[2 * n + 2 + rank[i]] : 0.0;
            const double one_nu = 1.0 + nu;
            sum_m += cnt * m;
            sum_w += cnt * w;

            res[i] = one_nu * pleasure_slope(s, m) - lambda;
            jac[i * dim + i] = one_nu * pleasure_curvature(s, m);
            jac[i * dim + 2 * n] = -1.0;
            if (rank[i] < na) jac[i * dim + 2 * n + 2 + rank[i]] = pleasure_slope(s, m);

            if (work_fixed_zero) {
                res[n + i] = w;
                jac[(n + i) * dim + (n + i)] = 1.0;
            } else {
                const double wp = std::max(w, 1e-300);
                res[n + i] = one_nu * fatigue_slope(s, wp) - mu_w;
                jac[(n + i) * dim + (n + i)] =
                    one_nu * fatigue_curvature(s, std::max(w, 1e-12));
                jac[(n + i) * dim + 2 * n + 1] = -1.0;
                if (rank[i] < na) {
                    jac[(n + i) * dim + 2 * n + 2 + rank[i]] = fatigue_slope(s, wp);
                }
            }
            jac[2 * n * dim + i] = cnt;
            if (!work_fixed_zero) jac[(2 * n + 1) * dim + (n + i)] = cnt;
        }
        res[2 * n] = sum_m - target_means;
        res[2 * n + 1] = work_fixed_zero ? u[2 * n + 1] : sum_w - target_work;
        if (work_fixed_zero) jac[(2 * n + 1) * dim + (2 * n + 1)] = 1.0;
        for (std::size_t a = 0; a < na; ++a) {
            const std::size_t i = active[a];
            const Section& s = soc.sections()[i];
            const double w = u[n + i];
            res[2 * n + 2 + a] = net_happiness(s, u[i], w) - floor_value;
            jac[(2 * n + 2 + a) * dim + i] = pleasure_slope(s, u[i]);
            if (!work_fixed_zero) {
                jac[(2 * n + 2 + a) * dim + (n + i)] = -fatigue_slope(s, std::max(w, 1e-300));
            }
        }

        double rmax = 0.0;
        for (double r : res) rmax = std::max(rmax, std::abs(r));
        if (rmax < 1e-12) {
            out.converged = true;
            break;
        }
        std::vector<double> step(res);
        for (double& r : step) r = -r;
        std::vector<double> jcopy(jac);
        if (!lu_solve(jcopy, step, dim)) break;
        double damp = 1.0;
        while (damp > 1e-12) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                if (!(u[i] + damp * step[i] > 0.0)) ok = false;
                if (!work_fixed_zero && u[n + i] + damp * step[n + i] < 0.0) ok = false;
            }
            if (ok) break;
            damp *= 0.5;
        }
        for (std::size_t k = 0; k < dim; ++k) u[k] += damp * step[k];
    }
    if (out.converged) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = u[i];
            x[n + i] = u[n + i];
        }
        out.nu.resize(na);
        for (std::size_t a = 0; a < na; ++a) out.nu[a] = u[2 * n + 2 + a];
    }
    return out;
}

/// Multiplier bisection for the floor-free problem: means and work split
/// independently, each by equalizing weighted marginals.
std::vector<double> unconstrained_point(const SectionedSociety& soc, double total_means,
                                        double total_work) {
    const std::size_t n = soc.size();
    std::vector<double> x(2 * n, 0.0);

    const auto means_sum = [&](double lambda) {
        double t = 0.0;
        for (const Section& s : soc.sections()) {
            t += static_cast<double>(s.count) *
                 s.curve.slope_inverse(lambda / s.capacity_pleasure);
        }
        return t;
    };
    double lo = 1e-12, hi = 1e12;
    for (int g = 0; g < 200 && means_sum(lo) < total_means; ++g) lo *= 0.25;
    for (int g = 0; g < 200 && means_sum(hi) > total_means; ++g) hi *= 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (means_sum(mid) > total_means ? lo : hi) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    double got = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Section& s = soc.sections()[i];
        x[i] = s.curve.slope_inverse(lambda / s.capacity_pleasure);
        got += static_cast<double>(s.count) * x[i];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] *= total_means / got;

    if (total_work > 0.0) {
        const auto work_sum = [&](double mu) {
            double t = 0.0;
            for (const Section& s : soc.sections()) {
                t += static_cast<double>(s.count) * fatigue_slope_inverse(s, mu);
            }
            return t;
        };
        double wlo = 1e-12, whi = 1e12;
        for (int g = 0; g < 200 && work_sum(wlo) > total_work; ++g) wlo *= 0.25;
        for (int g = 0; g < 200 && work_sum(whi) < total_work; ++g) whi *= 4.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (wlo + whi);
            (work_sum(mid) < total_work ? wlo : whi) = mid;
        }
        const double mu = 0.5 * (wlo + whi);
        double wgot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[n + i] = fatigue_slope_inverse(soc.sections()[i], mu);
            wgot += static_cast<double>(soc.sections()[i].count) * x[n + i];
        }
        for (std::size_t i = 0; i < n; ++i) x[n + i] *= total_work / wgot;
    }
    return x;
}

}  // namespace

// ---------------------------------------------------------------------------

SectionedSociety::SectionedSociety(std::vector<Section> sections, double happiness_floor,
                                   double external_endowment)
    : sections_(std::move(sections)), floor_(happiness_floor), endowment_(external_endowment) {
    if (sections_.empty()) throw validation_error("society needs at least one section");
    if (floor_ < 0.0) throw validation_error("happiness_floor must be >= 0");
    if (endowment_ < 0.0) throw validation_error("external_endowment must be >= 0");
    for (const Section& s : sections_) {
        if (!(s.capacity_pleasure > 0.0) || !(s.capacity_work > 0.0)) {
            throw validation_error("section '" + s.label + "': capacities must be > 0");
        }
        if (s.count == 0) throw validation_error("section '" + s.label + "': count must be >= 1");
        if (!(s.fatigue_exponent > 1.0)) {
            throw validation_error("section '" + s.label + "': fatigue exponent must be > 1");
        }
        if (s.curve.kind() == CurveKind::logarithmic && !(s.threshold > 0.0)) {
            throw validation_error("section '" + s.label +
                                   "': threshold must be > 0 under a logarithmic curve");
        }
        if (s.threshold < 0.0) {
            throw validation_error("section '" + s.label + "': threshold must be >= 0");
        }
    }
    std::stable_sort(sections_.begin(), sections_.end(), [](const Section& a, const Section& b) {
        return a.capacity_pleasure < b.capacity_pleasure;
    });
}

double net_happiness(const Section& sec, double means, double work) {
    if (!(means > 0.0)) throw domain_error("net_happiness requires means > 0");
    if (work < 0.0) throw domain_error("net_happiness requires work >= 0");
    const double f_beta = (sec.curve.kind() == CurveKind::power && sec.threshold == 0.0)
                              ? 0.0
                              : sec.curve.value(sec.threshold);
    return sec.capacity_pleasure * (sec.curve.value(means) - f_beta) - fatigue(sec, work);
}

double joint_welfare(const SectionedSociety& soc, const JointAllocation& ja) {
    if (ja.means.size() != soc.size() || ja.work.size() != soc.size()) {
        throw shape_error("joint allocation does not match section count");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < soc.size(); ++i) {
        total += static_cast<double>(soc.sections()[i].count) *
                 net_happiness(soc.sections()[i], ja.means[i], ja.work[i]);
    }
    return total;
}

void joint_welfare_gradient(const SectionedSociety& soc, const JointAllocation& ja,
                            std::vector<double>& d_means, std::vector<double>& d_work) {
    if (ja.means.size() != soc.size() || ja.work.size() != soc.size()) {
        throw shape_error("joint allocation does not match section count");
    }
    d_means.resize(soc.size());
    d_work.resize(soc.size());
    for (std::size_t i = 0; i < soc.size(); ++i) {
        const Section& s = soc.sections()[i];
        const double cnt = static_cast<double>(s.count);
        d_means[i] = cnt * pleasure_slope(s, ja.means[i]);
        d_work[i] = -cnt * fatigue_slope(s, ja.work[i]);
    }
}

void validate_joint_allocation(const SectionedSociety& soc, const JointAllocation& ja) {
    if (ja.means.size() != soc.size() || ja.work.size() != soc.size()) {
        throw shape_error("joint allocation does not match section count");
    }
    double means_total = 0.0, work_total = 0.0;
    for (std::size_t i = 0; i < soc.size(); ++i) {
        if (!(ja.means[i] > 0.0)) {
            throw validation_error("means must be > 0 in section " + std::to_string(i));
        }
        if (ja.work[i] < 0.0) {
            throw validation_error("work must be >= 0 in section " + std::to_string(i));
        }
        const double cnt = static_cast<double>(soc.sections()[i].count);
        means_total += cnt * ja.means[i];
        work_total += cnt * ja.work[i];
    }
    const double rhs = work_total + soc.external_endowment();
    if (std::abs(means_total - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
        std::ostringstream msg;
        msg << "resource balance violated: total means " << means_total
            << " != total work + endowment " << rhs;
        throw validation_error(msg.str());
    }
}

JointAllocation allocate_means_and_work(const SectionedSociety& soc, double required_output) {
    if (required_output < 0.0) throw validation_error("required_output must be >= 0");
    const double total_work = required_output;
    const double total_means = required_output + soc.external_endowment();
    if (!(total_means > 0.0)) {
        throw validation_error("no means to distribute: output + endowment must be > 0");
    }
    const std::size_t n = soc.size();
    const bool no_work = total_work == 0.0;

    std::vector<double> x = unconstrained_point(soc, total_means, total_work);

    const auto min_net = [&](const std::vector<double>& v) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::min(worst, net_happiness(soc.sections()[i], v[i], v[n + i]));
        }
        return worst;
    };

    double scale = 1.0 + std::abs(soc.happiness_floor());
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(net_happiness(soc.sections()[i], x[i], x[n + i])));
    }

    if (min_net(x) < soc.happiness_floor() - 1e-12 * scale) {
        // Feasibility: how high can the minimum happiness be pushed at all?
        const MaxminResult mm = maxmin_happiness(soc, total_means, total_work, min_net(x));
        if (mm.tau < soc.happiness_floor() - 1e-9 * scale) {
            std::ostringstream msg;
            msg << "happiness floor " << soc.happiness_floor()
                << " is unattainable; best attainable minimum happiness is " << mm.tau;
            throw infeasible_error(msg.str(), mm.tau);
        }

        PenaltyProblem main{&soc,  total_means, total_work,
                            soc.happiness_floor(), 0.0, no_work};
        run_penalty_stage(main, x);
        if (min_net(x) < soc.happiness_floor() - 1e-4 * scale) {
            // Penalty stalled; restart from the (feasible) max-min witness.
            std::vector<double> restart(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
                restart[i] = std::max(mm.means[i], 1e-12 * total_means);
                restart[n + i] = mm.work[i];
            }
            x = restart;
            run_penalty_stage(main, x);
        }

        // Pin whatever ended on the floor and polish to stationarity.
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < n; ++i) {
            if (net_happiness(soc.sections()[i], x[i], x[n + i]) <
                soc.happiness_floor() + 1e-6 * scale) {
                active.push_back(i);
            }
        }
        for (int round = 0; round < 8 && !active.empty(); ++round) {
            std::vector<double> trial(x);
            PolishResult polish = kkt_polish(soc, total_means, total_work,
                                             soc.happiness_floor(), active, no_work, trial);
            if (!polish.converged) break;
            // Drop constraints pulling the wrong way, add newly violated ones.
            std::size_t worst_drop = active.size();
            double most_negative = -1e-8;
            for (std::size_t a = 0; a < active.size(); ++a) {
                if (polish.nu[a] < most_negative) {
                    most_negative = polish.nu[a];
                    worst_drop = a;
                }
            }
            if (worst_drop < active.size()) {
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst_drop));
                continue;
            }
            x = trial;
            bool added = false;
            for (std::size_t i = 0; i < n; ++i) {
                const bool in_active =
                    std::find(active.begin(), active.end(), i) != active.end();
                if (!in_active && net_happiness(soc.sections()[i], x[i], x[n + i]) <
                                      soc.happiness_floor() - 1e-9 * scale) {
                    active.push_back(i);
                    added = true;
                }
            }
            if (!added) break;
            std::sort(active.begin(), active.end());
        }
    }

    JointAllocation ja;
    ja.means.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    ja.work.assign(x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
    validate_joint_allocation(soc, ja);
    return ja;
}

LeastFavouredReport least_favoured_report(const SectionedSociety& soc,
                                          const JointAllocation& ja) {
    validate_joint_allocation(soc, ja);
    LeastFavouredReport rep;
    rep.happiness = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < soc.size(); ++i) {
        const double net = net_happiness(soc.sections()[i], ja.means[i], ja.work[i]);
        if (net < rep.happiness) {
            rep.happiness = net;
            rep.section = i;
        }
    }
    rep.floor_binding = std::abs(rep.happiness - soc.happiness_floor()) <= 1e-6;
    return rep;
}

}  // namespace edgeworth
