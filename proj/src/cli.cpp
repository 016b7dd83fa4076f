#include "qres/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace qres::cli {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_tol(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0e", v);
    return buf;
}

std::string task_name(int task) { return "task" + std::to_string(task); }

std::string spin_label(double j) { return SpinJ(static_cast<int>(std::lround(2 * j))).label(); }

std::vector<Resource> resources_for(const RunConfig& c, std::initializer_list<Resource::Kind> valid,
                                    const char* task, const char* valid_text) {
    auto make = [&](Resource::Kind k) {
        if (k == Resource::Kind::sss) return Resource::sss(c.j.value_or(SpinJ::half()));
        return k == Resource::Kind::srf ? Resource::srf() : Resource::refbit();
    };
    if (!c.resource) {
        std::vector<Resource> all;
        for (auto k : valid) all.push_back(make(k));
        return all;
    }
    for (auto k : valid)
        if (k == *c.resource) return {make(k)};
    throw ConfigError(std::string(task) + " does not accept resource '" + make(*c.resource).name() +
                      "'; valid combinations: " + valid_text);
}

std::vector<SpinJ> sweep_values(const RunConfig& c) {
    std::vector<SpinJ> out;
    for (int t = 1; t <= c.j_max.twice_j(); t += c.j_step.twice_j()) out.emplace_back(t);
    return out;
}

AnchorCheck check(std::string name, double value, double expected, double tol) {
    const bool ok = std::isfinite(value) && std::abs(value - expected) <= tol;
    return {std::move(name), value, expected, tol, ok};
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    if (name == "task1") return Command::task1;
    if (name == "task2") return Command::task2;
    if (name == "task3") return Command::task3;
    if (name == "sweep") return Command::sweep;
    if (name == "optimize-refbit") return Command::optimize_refbit;
    if (name == "reproduce-all") return Command::reproduce_all;
    return std::nullopt;
}

std::optional<Resource::Kind> parse_resource(const std::string& name) {
    if (name == "srf") return Resource::Kind::srf;
    if (name == "sss") return Resource::Kind::sss;
    if (name == "refbit") return Resource::Kind::refbit;
    return std::nullopt;
}

std::optional<Format> parse_format(const std::string& name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "text") return Format::text;
    return std::nullopt;
}

void validate(const RunConfig& c) {
    if (c.j && c.j->twice_j() < 1) throw ConfigError("--j must be at least 1/2");
    if (c.j_max.twice_j() < 1) throw ConfigError("--j-max must be at least 1/2");
    if (c.j_step.twice_j() < 1) throw ConfigError("--j-step must be a positive multiple of 1/2");
    if (c.grid_n < 11) throw ConfigError("--grid-n must be at least 11");
    if (c.quad_nodes < 1) throw ConfigError("quadrature node count must be positive");
    if (c.j && c.resource && *c.resource != Resource::Kind::sss)
        throw ConfigError("--j applies to the sss resource only");
    if (c.command == Command::task1 && c.j && *c.j != SpinJ::half())
        throw ConfigError("task1 supports the spin-1/2 singlet only");
    if (c.command == Command::task3 && c.j && *c.j != SpinJ::half())
        throw ConfigError("task3 supports the spin-1/2 singlet only");
}

std::vector<TaskResult> execute(const RunConfig& c) {
    validate(c);
    std::vector<TaskResult> out;
    switch (c.command) {
        case Command::task1:
            for (const auto& r : resources_for(c, {Resource::Kind::srf, Resource::Kind::sss}, "task1",
                                               "task1 with srf or sss (j=1/2)"))
                out.push_back(task1_avg_info(r, c.quad_nodes));
            break;
        case Command::task2:
            for (const auto& r : resources_for(c, {Resource::Kind::srf, Resource::Kind::sss}, "task2",
                                               "task2 with srf or sss (any j)")) {
                out.push_back(task2_avg_info(r, c.quad_nodes));
                auto conclusive = task2_conclusive(r, c.seed);
                conclusive.averaged.outcome_table.reset();
                out.push_back(conclusive.averaged);
                out.push_back(conclusive.given_antiparallel);
            }
            break;
        case Command::task3:
            for (const auto& r :
                 resources_for(c, {Resource::Kind::srf, Resource::Kind::sss, Resource::Kind::refbit}, "task3",
                               "task3 with srf, sss (j=1/2) or refbit")) {
                TaskResult t = task3_outcome_table(r, c.quad_nodes);
                TaskResult inc = t;
                inc.metric = Metric::inconclusive_prob;
                inc.value = 1.0 - t.value;
                inc.outcome_table.reset();
                out.push_back(std::move(t));
                out.push_back(std::move(inc));
            }
            break;
        case Command::sweep: {
            if (c.resource && *c.resource != Resource::Kind::sss)
                throw ConfigError("sweep runs the sss resource only");
            const auto js = sweep_values(c);
            out = task2_spinj_sweep(js);
            break;
        }
        case Command::optimize_refbit: {
            if (c.resource && *c.resource != Resource::Kind::refbit)
                throw ConfigError("optimize-refbit runs the refbit resource only");
            const RefbitOptimum opt = optimize_refbit_measurement(c.grid_n, c.quad_nodes);
            out.push_back({3, Resource::refbit(), std::nullopt, Metric::conclusive_prob, opt.conclusive, std::nullopt});
            break;
        }
        case Command::reproduce_all:
            throw ConfigError("reproduce-all produces a report, not records");
    }
    return out;
}

void write_csv(std::ostream& os, const std::vector<TaskResult>& results) {
    os << "task,resource,parameter,metric,value\n";
    for (const auto& r : results) {
        os << task_name(r.task) << ',' << r.resource.name() << ',' << (r.parameter ? fmt12(*r.parameter) : "")
           << ',' << to_string(r.metric) << ',' << fmt12(r.value) << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<TaskResult>& results) {
    using nlohmann::ordered_json;
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
        ordered_json rec;
        rec["task"] = task_name(r.task);
        rec["resource"] = r.resource.name();
        rec["parameter"] = r.parameter ? ordered_json(*r.parameter) : ordered_json(nullptr);
        rec["metric"] = to_string(r.metric);
        rec["value"] = r.value;
        if (r.outcome_table) {
            ordered_json table = ordered_json::object();
            const auto& t = *r.outcome_table;
            for (std::size_t o = 0; o < t.outcomes.size(); ++o) {
                ordered_json row = ordered_json::object();
                for (std::size_t h = 0; h < t.hypotheses.size(); ++h) row[t.hypotheses[h]] = t.probs[o][h];
                table[t.outcomes[o]] = std::move(row);
            }
            rec["outcome_table"] = std::move(table);
        }
        arr.push_back(std::move(rec));
    }
    os << arr.dump(2) << '\n';
}

void write_text(std::ostream& os, const std::vector<TaskResult>& results) {
    for (const auto& r : results) {
        std::string res = r.resource.name();
        if (r.resource.kind == Resource::Kind::sss && r.parameter) res += " j=" + spin_label(*r.parameter);
        os << std::left << std::setw(7) << task_name(r.task) << std::setw(14) << res << std::setw(36)
           << to_string(r.metric) << fmt12(r.value) << '\n';
        if (!r.outcome_table) continue;
        const auto& t = *r.outcome_table;
        os << "    " << std::setw(10) << "P(o|h)";
        for (const auto& h : t.hypotheses) os << std::setw(18) << h;
        os << '\n';
        for (std::size_t o = 0; o < t.outcomes.size(); ++o) {
            os << "    " << std::setw(10) << t.outcomes[o];
            for (std::size_t h = 0; h < t.hypotheses.size(); ++h) os << std::setw(18) << fmt12(t.probs[o][h]);
            os << '\n';
        }
    }
}

std::vector<AnchorCheck> reproduce_all(int nodes) {
    std::vector<AnchorCheck> out;

    out.push_back(check("task1.srf.avg_info", task1_avg_info(Resource::srf(), nodes).value, 0.0270, 5e-4));
    out.push_back(check("task1.sss.avg_info", task1_avg_info(Resource::sss(), nodes).value, 0.0284, 5e-4));

    const double srf2 = task2_avg_info(Resource::srf(), nodes).value;
    const double h13 = -(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3);
    out.push_back(check("task2.srf.avg_info", srf2, 0.0817, 5e-4));
    out.push_back(check("task2.srf.analytic_1-h(1/3)", srf2, 1.0 - h13, 1e-9));
    out.push_back(check("task2.sss_j=1/2.avg_info", task2_avg_info(Resource::sss(SpinJ(1)), nodes).value, 0.0981, 5e-4));
    out.push_back(check("task2.sss_j=1.avg_info", task2_avg_info(Resource::sss(SpinJ(2)), nodes).value, 0.0841, 5e-4));

    std::vector<SpinJ> js;
    for (int t = 1; t <= 50; ++t) js.emplace_back(t);
    const auto sweep = task2_spinj_sweep(js);
    double worst_step = -1.0;  // largest v[k+1] - v[k]; must be negative
    for (std::size_t k = 0; k + 1 < sweep.size(); ++k)
        worst_step = std::max(worst_step, sweep[k + 1].value - sweep[k].value);
    out.push_back({"sweep.strictly_decreasing_j<=25.max_step", worst_step, 0.0, 0.0, worst_step < 0.0});
    out.push_back(check("sweep.j=25", sweep.back().value, 0.0817, 2e-3));
    out.push_back(check("sweep.j=50", task2_avg_info(Resource::sss(SpinJ(100))).value, 0.0817, 1e-3));

    out.push_back(check("task3.srf.conclusive", task3_conclusive(Resource::srf(), nodes).value, 1.0 / 3, 1e-10));
    out.push_back(check("task3.sss.conclusive", task3_conclusive(Resource::sss(), nodes).value, 3.0 / 8, 1e-12));
    out.push_back(check("task3.refbit.conclusive", task3_conclusive(Resource::refbit(), nodes).value, 1.0 / 24, 1e-10));

    double worst_cell = 0.0;
    for (const auto& r : {Resource::srf(), Resource::sss(), Resource::refbit()})
        for (double theta : {0.0, M_PI / 4, M_PI / 2, 3 * M_PI / 4, M_PI}) {
            const auto a = task3_table(r, Direction{theta, 0.0});
            const auto b = task3_table_closed_form(r, theta);
            for (std::size_t o = 0; o < a.probs.size(); ++o)
                for (std::size_t h = 0; h < 2; ++h) worst_cell = std::max(worst_cell, std::abs(a.probs[o][h] - b.probs[o][h]));
        }
    out.push_back(check("task3.tables.constructive_vs_closed_form.max_dev", worst_cell, 0.0, 1e-12));

    const auto c_sss = task2_conclusive(Resource::sss());
    out.push_back(check("task2.sss.conclusive", c_sss.averaged.value, 1.0 / 16, 1e-12));
    out.push_back(check("task2.sss.conclusive_given_antiparallel", c_sss.given_antiparallel.value, 1.0 / 8, 1e-12));
    const auto c_srf = task2_conclusive(Resource::srf());
    out.push_back(check("task2.srf.conclusive", c_srf.averaged.value, 0.0, 1e-12));
    out.push_back({"task2.srf.min_outcome_prob>1e-6", *c_srf.min_outcome_probability, 0.0, 0.0,
                   *c_srf.min_outcome_probability > 1e-6});

    const RefbitOptimum opt = optimize_refbit_measurement(101, nodes);
    out.push_back(check("povm.optimum.conclusive", opt.conclusive, 1.0 / 24, 1e-6));
    out.push_back({"povm.optimum.beta_on_boundary", opt.beta, 0.0, 0.0, opt.beta == 0.0 || opt.beta == 1.0});
    out.push_back(check("povm.interior.max_conclusive", opt.max_interior, 0.0, 1e-12));

    double worst_prob = 0.0, worst_proj = 0.0;
    for (int t = 1; t <= 20; ++t) {
        const SpinJ j(t);
        const auto a = task2_probs_closed_form(j), b = task2_probs_constructive(j);
        for (int k = 0; k < 4; ++k)
            worst_prob = std::max({worst_prob, std::abs(a.parallel[k] - b.parallel[k]),
                                   std::abs(a.antiparallel[k] - b.antiparallel[k])});
        const auto p = total_spin_projectors_pair(j), q = oracle_projectors(j);
        worst_proj = std::max({worst_proj, max_abs(p.lower.matrix() - q.lower.matrix()),
                               max_abs(p.upper.matrix() - q.upper.matrix())});
    }
    out.push_back(check("spin_j.closed_vs_constructive_j<=10.max_dev", worst_prob, 0.0, 1e-10));
    out.push_back(check("spin_j.cg_projectors_vs_oracle_j<=10.max_dev", worst_proj, 0.0, 1e-10));
    return out;
}

void write_report(std::ostream& os, const std::vector<AnchorCheck>& checks) {
    int failed = 0;
    for (const auto& c : checks) {
        os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(50) << c.name << " value=" << std::setw(20)
           << fmt12(c.value) << " expected=" << std::setw(16) << fmt12(c.expected) << " tol=" << fmt_tol(c.tolerance)
           << '\n';
        failed += c.passed ? 0 : 1;
    }
    os << (checks.size() - failed) << "/" << checks.size() << " anchors passed\n";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::ostringstream buffer;
    int status = 0;
    try {
        validate(config);
        if (config.command == Command::reproduce_all) {
            const auto checks = reproduce_all(config.quad_nodes);
            write_report(buffer, checks);
            for (const auto& c : checks)
                if (!c.passed) status = 1;
        } else {
            const auto results = execute(config);
            switch (config.format) {
                case Format::csv: write_csv(buffer, results); break;
                case Format::json: write_json(buffer, results); break;
                case Format::text: write_text(buffer, results); break;
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return 1;
    }

    if (config.out) {
        std::ofstream file(*config.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << *config.out << '\n';
            return 1;
        }
        file << buffer.str();
    } else {
        out << buffer.str();
    }
    return status;
}

}  // namespace qres::cli
