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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "edgeworth/allocate.hpp"
#include "edgeworth/exchange.hpp"
#include "edgeworth/hedonic.hpp"
#include "edgeworth/oracle.hpp"
#include "edgeworth/sentient.hpp"
#include "support.hpp"

using namespace edgeworth;

namespace {

struct Harness {
    std::string cli_path;
    std::string scenario_dir;
    std::filesystem::path workdir;
    int failures = 0;

    void criterion(const std::string& name, const std::function<void()>& body) {
        using clock = std::chrono::steady_clock;
        const auto start = clock::now();
        std::string failure;
        try {
            body();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        const double seconds =
            std::chrono::duration<double>(clock::now() - start).count();
        if (failure.empty()) {
            std::printf("PASS  %-34s (%.2fs)\n", name.c_str(), seconds);
        } else {
            ++failures;
            std::printf("FAIL  %-34s (%.2fs): %s\n", name.c_str(), seconds, failure.c_str());
        }
        std::fflush(stdout);
    }
};

[[noreturn]] void bail(const std::string& msg) { throw std::runtime_error(msg); }

void require(bool ok, const std::string& msg) {
    if (!ok) bail(msg);
}

void require_runtime(double seconds, double budget, const std::string& what) {
    if (seconds > budget) {
        bail(what + " took " + std::to_string(seconds) + "s, budget " +
             std::to_string(budget) + "s");
    }
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CommandResult run_cli(const Harness& h, const std::string& args) {
    const auto out_path = h.workdir / "cmd_out.txt";
    const auto err_path = h.workdir / "cmd_err.txt";
    const std::string cmd =
        h.cli_path + " " + args + " > " + out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    CommandResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

Population random_population(std::mt19937_64& gen, std::size_t size, bool equal_k,
                             bool equal_beta, bool power_curve) {
    const ResponseCurve curve = power_curve
                                    ? ResponseCurve::power(testsupport::uniform(gen, 0.25, 0.75))
                                    : ResponseCurve::logarithmic();
    const double shared_k = testsupport::uniform(gen, 0.4, 4.0);
    const double shared_beta = testsupport::uniform(gen, 0.02, 0.3);
    std::vector<Sentient> members;
    for (std::size_t i = 0; i < size; ++i) {
        const double k =
            equal_k ? shared_k
                    : testsupport::uniform(gen, 0.3, 4.0) + 0.013 * static_cast<double>(i);
        const double beta = equal_beta ? shared_beta : testsupport::uniform(gen, 0.02, 0.3);
        members.emplace_back("s" + std::to_string(i), k, beta, curve);
    }
    return Population(members);
}

// --- criteria ---------------------------------------------------------------

void fechner_fixture(const Harness& h) {
    const auto start = std::chrono::steady_clock::now();
    const CommandResult two = run_cli(h, "fechner 12 2");
    const CommandResult three = run_cli(h, "fechner 12 3");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(two.exit_code == 0 && three.exit_code == 0, "fechner runs must exit 0");
    require(two.out == "m,parts,product\n2,\"6,6\",36\n",
            "fechner 12 2 must print parts 6,6 and product 36, got: " + two.out);
    require(three.out == "m,parts,product\n3,\"4,4,4\",64\n",
            "fechner 12 3 must print parts 4,4,4 and product 64, got: " + three.out);
    require_runtime(seconds, 1.0, "fechner fixture");
}

void equal_division(const Harness&) {
    const auto start = std::chrono::steady_clock::now();
    auto gen = testsupport::rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t size = testsupport::uniform_index(gen, 1, 10);
        const bool power = trial % 2 == 1;
        const Population pop = random_population(gen, size, true, true, power);
        const double total = testsupport::uniform(gen, 1.0, 10.0);
        const auto [alloc, report] = allocate_stimulus(AllocationProblem(pop, total));
        for (double amount : alloc.amounts) {
            require(std::abs(amount - total / static_cast<double>(size)) <= 1e-9,
                    "equal population must split the budget equally");
        }
    }
    require_runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count(),
                    5.0, "equal-division criterion");
}

void felicific_monotonicity(const Harness&) {
    auto gen = testsupport::rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t size = testsupport::uniform_index(gen, 2, 8);
        const Population pop = random_population(gen, size, false, false, trial % 3 == 0);
        const double total = testsupport::uniform(gen, 1.0, 12.0);
        const auto [alloc, report] = allocate_stimulus(AllocationProblem(pop, total));
        for (std::size_t i = 0; i < size; ++i) {
            for (std::size_t j = 0; j < size; ++j) {
                if (pop.at(i).capacity_pleasure() > pop.at(j).capacity_pleasure()) {
                    require(alloc.amounts[i] >= alloc.amounts[j] - 1e-9,
                            "larger capacity must not receive less");
                }
            }
        }
    }
}

void closed_form_agreement(const Harness&) {
    auto gen = testsupport::rng(107);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t size = testsupport::uniform_index(gen, 1, 9);
        const Population pop = random_population(gen, size, false, false, false);
        const double total = testsupport::uniform(gen, 1.0, 15.0);
        const auto [alloc, report] = allocate_stimulus(AllocationProblem(pop, total));
        double ksum = 0.0;
        for (std::size_t i = 0; i < size; ++i) ksum += pop.at(i).capacity_pleasure();
        for (std::size_t i = 0; i < size; ++i) {
            const double expected = pop.at(i).capacity_pleasure() * total / ksum;
            require(std::abs(alloc.amounts[i] - expected) <= 1e-8 * expected,
                    "logarithmic slack-floor solve must match k*Y/sum(k)");
        }
    }
}

void oracle_equivalence(const Harness&) {
    const auto start = std::chrono::steady_clock::now();
    auto gen = testsupport::rng(109);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t size = testsupport::uniform_index(gen, 2, 4);
        const Population pop = random_population(gen, size, false, false, false);
        const double beta_sum = [&] {
            double s = 0.0;
            for (std::size_t i = 0; i < size; ++i) s += pop.at(i).threshold();
            return s;
        }();
        const double total = beta_sum + testsupport::uniform(gen, 1.0, 8.0);
        const AllocationProblem prob(pop, total, FloorMode::threshold_floor);
        const auto [alloc, report] = allocate_stimulus(prob);
        const auto grid =
            oracle::grid_maximize_welfare(pop, total, oracle::GridSpec(200), prob.floors());
        require(total_pleasure(pop, alloc) >= grid.objective - 1e-6,
                "solver objective must reach the grid oracle");
    }
    require_runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count(),
                    60.0, "oracle equivalence");
}

void hedonic_monotonicity_and_floor(const Harness&) {
    auto gen = testsupport::rng(113);
    // 50 societies with a slack floor: means/work ordered by capacity.
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = testsupport::uniform_index(gen, 2, 4);
        std::vector<Section> sections;
        for (std::size_t i = 0; i < n; ++i) {
            Section s;
            s.label = "s" + std::to_string(i);
            s.capacity_pleasure = testsupport::uniform(gen, 0.4, 3.0);
            s.capacity_work = testsupport::uniform(gen, 0.4, 3.0);
            s.threshold = testsupport::uniform(gen, 0.05, 0.2);
            s.count = testsupport::uniform_index(gen, 1, 3);
            s.curve = ResponseCurve::logarithmic();
            s.fatigue_exponent = 2.0;
            sections.push_back(s);
        }
        double endowment = testsupport::uniform(gen, 1.5, 4.0);
        const double output = testsupport::uniform(gen, 0.3, 1.5);
        JointAllocation ja;
        SectionedSociety soc(sections, 0.0, endowment);
        for (int boost = 0; boost < 12; ++boost) {
            soc = SectionedSociety(sections, 0.0, endowment);
            ja = allocate_means_and_work(soc, output);
            if (least_favoured_report(soc, ja).happiness > 0.01) break;
            endowment *= 2.0;  // the ordering claims need a slack floor
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const Section& a = soc.sections()[i];
                const Section& b = soc.sections()[j];
                if (a.capacity_pleasure >= b.capacity_pleasure) {
                    require(ja.means[i] >= ja.means[j] - 1e-9, "means must follow capacity");
                }
                if (a.capacity_work >= b.capacity_work) {
                    require(ja.work[i] >= ja.work[j] - 1e-9, "work must follow capacity");
                }
            }
        }
    }

    // An active floor lands exactly on it, and tightening it never helps.
    const std::vector<Section> base = [] {
        Section lo, hi;
        lo.label = "lo";
        lo.capacity_pleasure = lo.capacity_work = 1.0;
        lo.threshold = 0.1;
        hi.label = "hi";
        hi.capacity_pleasure = hi.capacity_work = 2.0;
        hi.threshold = 0.1;
        return std::vector<Section>{lo, hi};
    }();
    const SectionedSociety probe(base, 0.0, 1.0);
    const double w = 2.0;
    const double v0 = least_favoured_report(probe, allocate_means_and_work(probe, w)).happiness;

    double ceiling = v0 + 2.0;
    try {
        static_cast<void>(allocate_means_and_work(SectionedSociety(base, ceiling, 1.0), w));
    } catch (const infeasible_error& e) {
        ceiling = v0 + 0.9 * (e.detail() - v0);
    }
    const SectionedSociety floored(base, 0.5 * (v0 + ceiling), 1.0);
    const LeastFavouredReport rep =
        least_favoured_report(floored, allocate_means_and_work(floored, w));
    require(std::abs(rep.happiness - floored.happiness_floor()) <= 1e-6,
            "an active floor must bind to within 1e-6");

    double previous = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        const double floor = v0 + (ceiling - v0) * static_cast<double>(i) / 9.0;
        const SectionedSociety soc(base, std::max(0.0, floor), 1.0);
        const double objective = joint_welfare(soc, allocate_means_and_work(soc, w));
        require(objective <= previous + 1e-9, "objective must fall as the floor rises");
        previous = objective;
    }
}

void contract_curve_correctness(const Harness&) {
    const std::vector<BoxEconomy> symmetric = {
        BoxEconomy(Agent{UtilitySpec::cobb_douglas(0.5), 0.0},
                   Agent{UtilitySpec::cobb_douglas(0.5), 0.0}, 1.0, 1.0, 0.9, 0.1),
        BoxEconomy(Agent{UtilitySpec::log_linear(1.0, 1.0), 0.0},
                   Agent{UtilitySpec::log_linear(1.0, 1.0), 0.0}, 1.0, 1.0, 0.9, 0.1)};
    for (const BoxEconomy& e : symmetric) {
        // contract_curve re-verifies every sample on its stencil and throws
        // on any dominated point.
        const CurveSegment seg = contract_curve(e, 200);
        for (const CurveSample& s : seg.samples) {
            require(std::abs(s.alloc.ax - s.alloc.ay) <= 1e-8,
                    "symmetric contract curve must be the diagonal");
        }
    }
}

void core_nesting_and_equilibrium(const Harness&) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t res = 200;
    const BoxEconomy e(Agent{UtilitySpec::log_linear(1.0, 1.0), 0.0},
                       Agent{UtilitySpec::log_linear(1.0, 1.0), 0.0}, 1.0, 1.0, 0.9, 0.1);
    const Equilibrium eq = competitive_equilibrium(e);
    double previous = -1.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        const CurveSegment core = replica_core(e, n, res);
        require(!core.empty(), "replica core must be nonempty");
        const double width = core.parameter_width();
        if (n == 1) {
            previous = width;
        } else if (n == 2) {
            require(width < previous - 1e-9, "the 2-replica core must be strictly narrower");
            previous = width;
        } else {
            require(width <= previous + 1e-12, "core widths must not grow with n");
            previous = width;
        }
        double nearest = 1e9;
        for (const CurveSample& s : core.samples) {
            nearest = std::min(nearest, std::abs(s.t - eq.parameter));
        }
        require(nearest <= 1.0 / static_cast<double>(res),
                "the equilibrium must stay within one cell of every core");
    }
    require_runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count(),
                    120.0, "core nesting");
}

void sympathy_narrowing(const Harness&) {
    const std::size_t res = 200;
    const auto economy = [&](double lambda) {
        return BoxEconomy(Agent{UtilitySpec::log_linear(1.0, 1.0), lambda},
                          Agent{UtilitySpec::log_linear(1.0, 1.0), lambda}, 1.0, 1.0, 0.9, 0.1);
    };
    const UtilitarianPoint up = utilitarian_point(economy(0.0), res);
    const ContractLocus locus(economy(0.0));
    const double t_up = locus.parameter_of_x(up.alloc.ax);

    double previous_width = 2.0, previous_lo = -1.0, previous_hi = 2.0;
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const CurveSegment seg = contract_curve(economy(lambda), res);
        const double lo = seg.samples.front().t;
        const double hi = seg.samples.back().t;
        require(hi - lo <= previous_width + 1e-12, "width must not grow with sympathy");
        require(lo >= previous_lo - 1.0 / res && hi <= previous_hi + 1.0 / res,
                "sympathized curves must nest");
        previous_width = hi - lo;
        previous_lo = lo;
        previous_hi = hi;
        if (lambda == 1.0) {
            require(hi - lo <= 2.0 / res, "full sympathy must collapse the curve");
            require(std::abs(lo - t_up) <= 2.0 / res,
                    "the collapsed curve must sit at the utilitarian point");
        }
    }
}

void gradient_checks(const Harness&) {
    auto gen = testsupport::rng(127);

    const std::vector<Sentient> sentients = {
        Sentient("log", 1.7, 0.4, ResponseCurve::logarithmic()),
        Sentient("pow", 0.8, 0.1, ResponseCurve::power(0.45))};
    for (const Sentient& s : sentients) {
        for (int i = 0; i < 50; ++i) {
            const double y = testsupport::uniform(gen, 0.05, 10.0);
            const double h = 1e-6 * std::max(1.0, y);
            const double fd = testsupport::central_difference(
                [&](double v) { return pleasure(s, v); }, y, h);
            require(std::abs(fd - marginal_pleasure(s, y)) <=
                        1e-6 * std::max(1.0, std::abs(fd)),
                    "marginal pleasure must match finite differences");
        }
    }

    const std::vector<UtilitySpec> specs = {UtilitySpec::cobb_douglas(0.41),
                                            UtilitySpec::log_linear(1.3, 0.8)};
    for (const UtilitySpec& u : specs) {
        for (int i = 0; i < 50; ++i) {
            const double x = testsupport::uniform(gen, 0.1, 2.0);
            const double y = testsupport::uniform(gen, 0.1, 2.0);
            const double fd_x = testsupport::central_difference(
                [&](double v) { return u.value(v, y); }, x, 1e-6 * x);
            const double fd_y = testsupport::central_difference(
                [&](double v) { return u.value(x, v); }, y, 1e-6 * y);
            require(std::abs(u.mrs(x, y) - fd_x / fd_y) <= 1e-6 * std::abs(fd_x / fd_y),
                    "marginal rate of substitution must match finite differences");
        }
    }

    Section lo, hi;
    lo.label = "lo";
    lo.capacity_pleasure = 1.1;
    lo.capacity_work = 0.9;
    lo.threshold = 0.1;
    hi.label = "hi";
    hi.capacity_pleasure = 2.2;
    hi.capacity_work = 1.8;
    hi.threshold = 0.15;
    hi.count = 2;
    const SectionedSociety soc({lo, hi}, 0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        JointAllocation ja;
        for (int k = 0; k < 2; ++k) {
            ja.means.push_back(testsupport::uniform(gen, 0.3, 3.0));
            ja.work.push_back(testsupport::uniform(gen, 0.2, 2.0));
        }
        std::vector<double> dm, dw;
        joint_welfare_gradient(soc, ja, dm, dw);
        for (std::size_t k = 0; k < 2; ++k) {
            const double fd = testsupport::central_difference(
                [&](double v) {
                    JointAllocation probe = ja;
                    probe.means[k] = v;
                    return joint_welfare(soc, probe);
                },
                ja.means[k], 1e-6 * ja.means[k]);
            require(std::abs(fd - dm[k]) <= 1e-6 * std::max(1.0, std::abs(dm[k])),
                    "welfare gradient must match finite differences");
        }
    }
}

void infeasibility_fixture(const Harness& h) {
    const CommandResult r =
        run_cli(h, "allocate " + h.scenario_dir + "/philosophers_monkeys.toml");
    require(r.exit_code == 2, "the philosophers scenario must exit with code 2, got " +
                                  std::to_string(r.exit_code));
    require(r.err.find("deficit") != std::string::npos, "the report must name the deficit");
    require(r.err.find("60") != std::string::npos,
            "the deficit must equal the floor sum minus the budget (60), got: " + r.err);
}

}  // namespace

int main(int argc, char** argv) {
    Harness h;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") h.cli_path = argv[i + 1];
        if (flag == "--scenarios") h.scenario_dir = argv[i + 1];
        if (flag == "--workdir") h.workdir = argv[i + 1];
    }
    if (h.cli_path.empty() || h.scenario_dir.empty() || h.workdir.empty()) {
        std::cerr << "usage: acceptance --cli <edgeworth binary> --scenarios <dir> --workdir <dir>\n";
        return 64;
    }
    std::filesystem::create_directories(h.workdir);

    h.criterion("fechner-fixture", [&] { fechner_fixture(h); });
    h.criterion("equal-division", [&] { equal_division(h); });
    h.criterion("felicific-monotonicity", [&] { felicific_monotonicity(h); });
    h.criterion("closed-form-agreement", [&] { closed_form_agreement(h); });
    h.criterion("oracle-equivalence", [&] { oracle_equivalence(h); });
    h.criterion("hedonic-monotonicity-and-floor", [&] { hedonic_monotonicity_and_floor(h); });
    h.criterion("contract-curve-correctness", [&] { contract_curve_correctness(h); });
    h.criterion("core-nesting-and-equilibrium", [&] { core_nesting_and_equilibrium(h); });
    h.criterion("sympathy-narrowing", [&] { sympathy_narrowing(h); });
    h.criterion("gradient-checks", [&] { gradient_checks(h); });
    h.criterion("infeasibility-fixture", [&] { infeasibility_fixture(h); });

    if (h.failures == 0) {
        std::printf("all %d acceptance criteria passed\n", 11);
    } else {
        std::printf("%d acceptance criteria FAILED\n", h.failures);
    }
    return h.failures;
}
