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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "edgeworth/allocate.hpp"
#include "edgeworth/exchange.hpp"
#include "edgeworth/hedonic.hpp"
#include "edgeworth/oracle.hpp"
#include "edgeworth/scenario.hpp"
#include "edgeworth/sentient.hpp"

namespace edgeworth::cli {

namespace {

constexpr const char* kEmpty = "";

ResponseCurve curve_from(const ScenarioDoc& doc, const std::string& section) {
    const std::string kind = doc.text_or(section, "curve", "logarithmic");
    if (kind == "logarithmic") return ResponseCurve::logarithmic();
    if (kind == "power") return ResponseCurve::power(doc.number(section, "alpha"));
    throw validation_error(doc.origin() + ": curve must be 'logarithmic' or 'power', got '" +
                           kind + "'");
}

Population build_population(const ScenarioDoc& doc) {
    const ResponseCurve curve = curve_from(doc, "population");
    std::vector<Sentient> members;

    const std::vector<std::string> groups = doc.sections_with_prefix("group.");
    if (!groups.empty()) {
        for (const std::string& section : groups) {
            const std::string name = section.substr(std::string("group.").size());
            const double count_raw = doc.number(section, "count");
            if (count_raw < 1.0 || count_raw != std::floor(count_raw)) {
                throw validation_error(doc.origin() + ": [" + section +
                                       "] count must be a positive integer");
            }
            const auto count = static_cast<std::size_t>(count_raw);
            const double capacity = doc.number(section, "capacity");
            const double threshold = doc.number(section, "threshold");
            for (std::size_t i = 0; i < count; ++i) {
                members.emplace_back(name + "[" + std::to_string(i) + "]", capacity, threshold,
                                     curve);
            }
        }
        return Population(std::move(members));
    }

    const std::vector<double> capacity = doc.numbers("population", "capacity");
    const std::vector<double> threshold = doc.numbers("population", "threshold");
    if (capacity.size() != threshold.size()) {
        throw validation_error(doc.origin() + ": capacity and threshold lists differ in length");
    }
    std::vector<std::string> labels;
    if (doc.has("population", "labels")) {
        labels = doc.strings("population", "labels");
        if (labels.size() != capacity.size()) {
            throw validation_error(doc.origin() + ": labels list length mismatch");
        }
    } else {
        for (std::size_t i = 0; i < capacity.size(); ++i) labels.push_back("s" + std::to_string(i));
    }
    for (std::size_t i = 0; i < capacity.size(); ++i) {
        members.emplace_back(labels[i], capacity[i], threshold[i], curve);
    }
    return Population(std::move(members));
}

AllocationProblem build_allocation_problem(const ScenarioDoc& doc) {
    Population pop = build_population(doc);
    const double total = doc.number("problem", "total");
    const std::string floor = doc.text_or("problem", "floor", "positive");
    FloorMode mode;
    if (floor == "threshold") {
        mode = FloorMode::threshold_floor;
    } else if (floor == "positive") {
        mode = FloorMode::positive_floor;
    } else {
        throw validation_error(doc.origin() + ": floor must be 'threshold' or 'positive'");
    }
    std::optional<double> eps;
    if (doc.has("problem", "epsilon")) eps = doc.number("problem", "epsilon");
    return AllocationProblem(std::move(pop), total, mode, eps);
}

Agent build_agent(const ScenarioDoc& doc, const std::string& section) {
    const std::string kind = doc.text(section, "utility");
    const double sympathy = doc.number_or(section, "sympathy", 0.0);
    if (kind == "cobb_douglas") {
        return Agent{UtilitySpec::cobb_douglas(doc.number(section, "alpha")), sympathy};
    }
    if (kind == "log_linear") {
        return Agent{UtilitySpec::log_linear(doc.number(section, "a"), doc.number(section, "b")),
                     sympathy};
    }
    throw validation_error(doc.origin() + ": utility must be 'cobb_douglas' or 'log_linear'");
}

BoxEconomy build_economy(const ScenarioDoc& doc) {
    return BoxEconomy(build_agent(doc, "agent_a"), build_agent(doc, "agent_b"),
                      doc.number("box", "total_x"), doc.number("box", "total_y"),
                      doc.number("box", "endow_ax"), doc.number("box", "endow_ay"));
}

SectionedSociety build_society(const ScenarioDoc& doc) {
    std::vector<Section> sections;
    for (const std::string& name : doc.sections_with_prefix("section.")) {
        Section s;
        s.label = name.substr(std::string("section.").size());
        s.capacity_pleasure = doc.number(name, "capacity_pleasure");
        s.capacity_work = doc.number(name, "capacity_work");
        s.threshold = doc.number(name, "threshold");
        const double count_raw = doc.number_or(name, "count", 1.0);
        if (count_raw < 1.0 || count_raw != std::floor(count_raw)) {
            throw validation_error(doc.origin() + ": [" + name +
                                   "] count must be a positive integer");
        }
        s.count = static_cast<std::size_t>(count_raw);
        s.fatigue_exponent = doc.number_or(name, "gamma", 2.0);
        s.curve = curve_from(doc, name);
        sections.push_back(std::move(s));
    }
    if (sections.empty()) {
        throw validation_error(doc.origin() + ": hedonic scenario needs [section.*] blocks");
    }
    return SectionedSociety(std::move(sections), doc.number_or("problem", "floor", 0.0),
                            doc.number_or("problem", "endowment", 0.0));
}

// --- per-kind runners -------------------------------------------------------

ResultTable run_allocate(const ScenarioDoc& doc, const RunOptions& options) {
    const AllocationProblem prob = build_allocation_problem(doc);
    const auto [alloc, report] = allocate_stimulus(prob);

    ResultTable table;
    table.kind = "allocate";
    table.columns = {"label", "capacity", "threshold", "amount", "pleasure"};
    if (options.verify) {
        table.columns.push_back("oracle_objective");
        table.columns.push_back("gap");
    }

    double oracle_objective = 0.0, gap = 0.0;
    if (options.verify) {
        const auto res = oracle::grid_maximize_welfare(
            prob.population, prob.total, oracle::GridSpec(options.resolution), prob.floors());
        oracle_objective = res.objective;
        gap = total_pleasure(prob.population, alloc) - res.objective;
    }

    for (std::size_t i = 0; i < prob.population.size(); ++i) {
        const Sentient& s = prob.population.at(i);
        std::vector<ResultTable::Cell> row{s.label(), s.capacity_pleasure(), s.threshold(),
                                           alloc.amounts[i], pleasure(s, alloc.amounts[i])};
        if (options.verify) {
            row.emplace_back(oracle_objective);
            row.emplace_back(gap);
        }
        table.add_row(std::move(row));
    }
    return table;
}

/// Best product over integer compositions of n into m positive parts.
double integer_partition_best(std::size_t n, std::size_t m) {
    if (m == 1) return static_cast<double>(n);
    double best = 0.0;
    for (std::size_t first = 1; first + (m - 1) <= n; ++first) {
        best = std::max(best, static_cast<double>(first) *
                                  integer_partition_best(n - first, m - 1));
    }
    return best;
}

ResultTable fechner_row_table(double n, const std::vector<std::size_t>& parts, bool verify) {
    ResultTable table;
    table.kind = "fechner";
    table.columns = {"m", "parts", "product"};
    if (verify) {
        table.columns.push_back("oracle_objective");
        table.columns.push_back("gap");
    }
    for (std::size_t m : parts) {
        const std::vector<double> split = fechner_partition(n, m);
        double product = 1.0;
        std::string joined;
        for (std::size_t i = 0; i < split.size(); ++i) {
            product *= split[i];
            if (i) joined += ',';
            joined += format_number(split[i]);
        }
        std::vector<ResultTable::Cell> row{static_cast<double>(m), joined, product};
        if (verify) {
            if (!(n == std::floor(n)) || n > 12.0) {
                throw validation_error(
                    "fechner --verify needs an integer n <= 12 for the partition oracle");
            }
            if (static_cast<double>(m) > n) {
                throw validation_error("fechner --verify needs m <= n");
            }
            const double oracle_best = integer_partition_best(static_cast<std::size_t>(n), m);
            row.emplace_back(oracle_best);
            row.emplace_back(product - oracle_best);
        }
        table.add_row(std::move(row));
    }
    return table;
}

ResultTable run_fechner(const ScenarioDoc& doc, const RunOptions& options) {
    const double n = doc.number("problem", "n");
    std::vector<std::size_t> parts;
    for (double m : doc.numbers("problem", "parts")) {
        if (m < 1.0 || m != std::floor(m)) {
            throw validation_error(doc.origin() + ": parts must be positive integers");
        }
        parts.push_back(static_cast<std::size_t>(m));
    }
    return fechner_row_table(n, parts, options.verify);
}

ResultTable run_hedonic(const ScenarioDoc& doc, const RunOptions& options) {
    const SectionedSociety soc = build_society(doc);
    const double output = doc.number("problem", "output");
    const JointAllocation ja = allocate_means_and_work(soc, output);

    double oracle_objective = 0.0, gap = 0.0;
    if (options.verify) {
        const auto res = oracle::grid_maximize_joint_welfare(
            soc, output, oracle::GridSpec(std::min<std::size_t>(options.resolution, 100)), true);
        if (!res) throw solver_error("joint welfare oracle found no feasible grid point");
        oracle_objective = res->objective;
        gap = joint_welfare(soc, ja) - res->objective;
    }

    ResultTable table;
    table.kind = "hedonic";
    table.columns = {"section", "capacity_pleasure", "capacity_work", "threshold",
                     "count",   "means",             "work",          "happiness"};
    if (options.verify) {
        table.columns.push_back("oracle_objective");
        table.columns.push_back("gap");
    }
    for (std::size_t i = 0; i < soc.size(); ++i) {
        const Section& s = soc.sections()[i];
        std::vector<ResultTable::Cell> row{
            s.label,      s.capacity_pleasure,          s.capacity_work,
            s.threshold,  static_cast<double>(s.count), ja.means[i],
            ja.work[i],   net_happiness(s, ja.means[i], ja.work[i])};
        if (options.verify) {
            row.emplace_back(oracle_objective);
            row.emplace_back(gap);
        }
        table.add_row(std::move(row));
    }
    return table;
}

void push_curve_rows(ResultTable& table, const CurveSegment& seg, const std::string& label,
                     bool verify, const std::vector<BoxAllocation>& pareto, double cell_x,
                     double cell_y) {
    for (const CurveSample& s : seg.samples) {
        std::vector<ResultTable::Cell> row{s.t,         s.alloc.ax, s.alloc.ay,
                                           s.utility_a, s.utility_b, label};
        if (verify) {
            double cells = std::numeric_limits<double>::infinity();
            for (const BoxAllocation& p : pareto) {
                cells = std::min(cells, std::max(std::abs(p.ax - s.alloc.ax) / cell_x,
                                                 std::abs(p.ay - s.alloc.ay) / cell_y));
            }
            row.emplace_back(cells);  // distance to the oracle Pareto set, in cells
            row.emplace_back(std::string(kEmpty));
        }
        table.add_row(std::move(row));
    }
}

ResultTable run_box(const ScenarioDoc& doc, const RunOptions& options) {
    const BoxEconomy econ = build_economy(doc);
    const std::size_t res = options.resolution;

    const CurveSegment curve = contract_curve(econ, res);
    const CurveSegment settlements = final_settlements(econ, res);
    const Equilibrium eq = competitive_equilibrium(econ);
    const UtilitarianPoint up = utilitarian_point(econ, res);
    const BoxAllocation mid = split_the_difference(settlements);
    const ContractLocus locus(econ);

    std::vector<BoxAllocation> pareto;
    double oracle_sum = 0.0;
    if (options.verify) {
        pareto = oracle::grid_pareto_set(econ, oracle::GridSpec(res));
        for (const BoxAllocation& p : pareto) {
            oracle_sum = std::max(oracle_sum, econ.agent_a().utility.value(p.ax, p.ay) +
                                                  econ.agent_b().utility.value(
                                                      econ.total_x() - p.ax,
                                                      econ.total_y() - p.ay));
        }
    }

    ResultTable table;
    table.kind = "box";
    table.columns = {"t", "xA", "yA", "uA", "uB", "kind"};
    if (options.verify) {
        table.columns.push_back("oracle_objective");
        table.columns.push_back("gap");
    }
    const double cell_x = econ.total_x() / static_cast<double>(res);
    const double cell_y = econ.total_y() / static_cast<double>(res);
    const std::string curve_label =
        curve.kind == SegmentKind::sympathized_contract_curve ? "sympathized_contract_curve"
                                                              : "contract_curve";
    push_curve_rows(table, curve, curve_label, options.verify, pareto, cell_x, cell_y);
    push_curve_rows(table, settlements, "final_settlements", options.verify, pareto, cell_x,
                    cell_y);

    const auto special_row = [&](double t, const BoxAllocation& a, const std::string& label,
                                 double oracle_objective, double gap, bool with_oracle) {
        std::vector<ResultTable::Cell> row{
            t, a.ax, a.ay, econ.agent_a().utility.value(a.ax, a.ay),
            econ.agent_b().utility.value(econ.total_x() - a.ax, econ.total_y() - a.ay), label};
        if (options.verify) {
            if (with_oracle) {
                row.emplace_back(oracle_objective);
                row.emplace_back(gap);
            } else {
                row.emplace_back(std::string(kEmpty));
                row.emplace_back(std::string(kEmpty));
            }
        }
        table.add_row(std::move(row));
    };
    special_row(locus.parameter_of_x(up.alloc.ax), up.alloc,
                up.plateau ? "utilitarian_point_plateau" : "utilitarian_point", oracle_sum,
                up.value - oracle_sum, options.verify);
    special_row(eq.parameter, eq.alloc, "equilibrium", 0.0, 0.0, false);
    special_row(0.5 * (settlements.samples.front().t + settlements.samples.back().t), mid,
                "split_difference", 0.0, 0.0, false);
    return table;
}

ResultTable run_replica(const ScenarioDoc& doc, const RunOptions& options) {
    const BoxEconomy econ = build_economy(doc);
    std::vector<std::size_t> counts;
    for (double n : doc.numbers("replica", "counts")) {
        if (n < 1.0 || n != std::floor(n)) {
            throw validation_error(doc.origin() + ": replica counts must be positive integers");
        }
        counts.push_back(static_cast<std::size_t>(n));
    }
    const Equilibrium eq = competitive_equilibrium(econ);

    ResultTable table;
    table.kind = "replica";
    table.columns = {"n", "t_lo", "t_hi", "width", "samples"};
    if (options.verify) {
        table.columns.push_back("oracle_objective");
        table.columns.push_back("gap");
    }
    for (std::size_t n : counts) {
        const CurveSegment core = replica_core(econ, n, options.resolution);
        if (core.empty()) throw solver_error("replica core came back empty at n=" +
                                             std::to_string(n));
        std::vector<ResultTable::Cell> row{
            static_cast<double>(n), core.samples.front().t, core.samples.back().t,
            core.parameter_width(), static_cast<double>(core.samples.size())};
        if (options.verify) {
            // The price-taking equilibrium must survive every replica round.
            const auto block = oracle::blocking_coalition_search(
                econ, n, eq.alloc, oracle::GridSpec(options.resolution));
            row.emplace_back(block ? 1.0 : 0.0);
            double nearest = std::numeric_limits<double>::infinity();
            for (const CurveSample& s : core.samples) {
                nearest = std::min(nearest, std::abs(s.t - eq.parameter));
            }
            row.emplace_back(nearest);
        }
        table.add_row(std::move(row));
    }
    return table;
}

ResultTable run_sympathy_sweep(const ScenarioDoc& doc, const RunOptions& options) {
    const BoxEconomy base = build_economy(doc);
    const std::vector<double> lambdas = doc.numbers("sweep", "lambdas");
    if (lambdas.empty()) throw validation_error(doc.origin() + ": sweep needs lambdas");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] < 0.0 || lambdas[i] > 1.0) {
            throw validation_error(doc.origin() + ": sweep lambdas must lie in [0, 1]");
        }
        if (i > 0 && lambdas[i] < lambdas[i - 1]) {
            throw validation_error(doc.origin() + ": sweep lambdas must be non-decreasing");
        }
    }

    const UtilitarianPoint up = utilitarian_point(base, options.resolution);
    const ContractLocus base_locus(base);
    const double t_util = base_locus.parameter_of_x(up.alloc.ax);

    ResultTable table;
    table.kind = "sympathy_sweep";
    table.columns = {"lambda", "t_lo", "t_hi", "width"};
    if (options.verify) {
        table.columns.push_back("oracle_objective");
        table.columns.push_back("gap");
    }
    double previous_width = std::numeric_limits<double>::infinity();
    for (double lambda : lambdas) {
        Agent a = base.agent_a();
        Agent b = base.agent_b();
        a.sympathy = lambda;
        b.sympathy = lambda;
        const BoxEconomy econ(a, b, base.total_x(), base.total_y(), base.endow_ax(),
                              base.endow_ay());
        const CurveSegment seg = contract_curve(econ, options.resolution);
        const double width = seg.parameter_width();
        if (width > previous_width + 1e-12) {
            throw solver_error("sympathized curve widened as sympathy rose (lambda=" +
                               format_number(lambda) + ")");
        }
        previous_width = width;
        std::vector<ResultTable::Cell> row{lambda, seg.samples.front().t, seg.samples.back().t,
                                           width};
        if (options.verify) {
            row.emplace_back(t_util);
            const double mid = 0.5 * (seg.samples.front().t + seg.samples.back().t);
            row.emplace_back(mid - t_util);
        }
        table.add_row(std::move(row));
    }
    return table;
}

}  // namespace

ResultTable run_scenario(const ScenarioDoc& doc, const std::string& expected_kind,
                         const RunOptions& options) {
    const std::string kind = doc.kind();
    if (kind != expected_kind) {
        throw validation_error(doc.origin() + ": scenario kind is '" + kind +
                               "' but the subcommand expects '" + expected_kind + "'");
    }
    if (options.resolution < 2) throw validation_error("--resolution must be >= 2");
    if (kind == "allocate") return run_allocate(doc, options);
    if (kind == "fechner") return run_fechner(doc, options);
    if (kind == "hedonic") return run_hedonic(doc, options);
    if (kind == "box") return run_box(doc, options);
    if (kind == "replica") return run_replica(doc, options);
    if (kind == "sympathy_sweep") return run_sympathy_sweep(doc, options);
    throw validation_error(doc.origin() + ": unknown scenario kind '" + kind + "'");
}

ResultTable fechner_table(double n, const std::vector<std::size_t>& parts, bool verify) {
    return fechner_row_table(n, parts, verify);
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"utilitarian allocation and exchange toolkit"};
    app.require_subcommand(1);

    struct SubcommandState {
        std::string scenario;
        std::string second;  // fechner direct form: m
        RunOptions options;
    };
    std::map<std::string, SubcommandState> state;

    const std::vector<std::pair<std::string, std::string>> kinds = {
        {"allocate", "distribute a stimulus budget over a population"},
        {"fechner", "split a number into equal parts (scenario file, or: fechner N M)"},
        {"hedonic", "joint means and work distribution over sections"},
        {"box", "contract curve, settlements, equilibrium, arbitration point"},
        {"replica", "core of the n-fold replica economy"},
        {"sympathy-sweep", "contract-curve width across sympathy coefficients"}};
    for (const auto& [name, help] : kinds) {
        CLI::App* sub = app.add_subcommand(name, help);
        SubcommandState& st = state[name];
        sub->add_option("scenario", st.scenario,
                        name == "fechner" ? "scenario file, or n" : "scenario file")
            ->required();
        if (name == "fechner") sub->add_option("m", st.second, "number of parts (direct form)");
        sub->add_option("--resolution", st.options.resolution, "sampling/grid resolution")
            ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(100000)));
        sub->add_flag("--verify", st.options.verify, "cross-check against the brute-force oracle");
        sub->add_option("--format", st.options.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", st.options.out_path, "output file (default: stdout)");
    }

    std::vector<std::string> argv_storage;
    argv_storage.push_back("edgeworth");
    for (const std::string& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    for (const std::string& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    SubcommandState& st = state[name];

    try {
        ResultTable table;
        double direct_n = 0.0;
        char* end = nullptr;
        const bool direct_number =
            name == "fechner" && !st.scenario.empty() &&
            ((direct_n = std::strtod(st.scenario.c_str(), &end)),
             end == st.scenario.c_str() + st.scenario.size());
        if (direct_number) {
            if (st.second.empty()) {
                throw validation_error("fechner direct form needs both n and m: fechner N M");
            }
            char* mend = nullptr;
            const double m_raw = std::strtod(st.second.c_str(), &mend);
            if (mend != st.second.c_str() + st.second.size() || m_raw < 0.0 ||
                m_raw != std::floor(m_raw)) {
                throw validation_error("fechner m must be a non-negative integer");
            }
            table = fechner_table(direct_n, {static_cast<std::size_t>(m_raw)},
                                  st.options.verify);
        } else {
            if (name == "fechner" && !st.second.empty()) {
                throw validation_error("fechner takes either a scenario file or two numbers");
            }
            const ScenarioDoc doc = ScenarioDoc::parse_file(st.scenario);
            const std::string expected = name == "sympathy-sweep" ? "sympathy_sweep" : name;
            table = run_scenario(doc, expected, st.options);
        }
        write_output(table, st.options.format, st.options.out_path, out);
        return 0;
    } catch (const infeasible_error& e) {
        err << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const solver_error& e) {
        err << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace edgeworth::cli
