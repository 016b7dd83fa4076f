#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qres/cli.hpp"

using namespace qres;
using namespace qres::cli;

namespace {

struct Output {
    int status;
    std::string out;
    std::string err;
};

Output run_config(const RunConfig& c) {
    std::ostringstream out, err;
    const int status = run(c, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("parsers") {
    CHECK(parse_command("optimize-refbit") == Command::optimize_refbit);
    CHECK(parse_command("reproduce-all") == Command::reproduce_all);
    CHECK_FALSE(parse_command("task4"));
    CHECK(parse_resource("refbit") == Resource::Kind::refbit);
    CHECK_FALSE(parse_resource("SRF"));
    CHECK(parse_format("csv") == Format::csv);
    CHECK_FALSE(parse_format("xml"));
}

TEST_CASE("validation") {
    RunConfig c;
    c.command = Command::task2;
    c.grid_n = 10;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.grid_n = 11;
    CHECK_NOTHROW(validate(c));
    c.j = SpinJ(0);
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.j = SpinJ(3);
    c.resource = Resource::Kind::srf;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.resource = Resource::Kind::sss;
    CHECK_NOTHROW(validate(c));
    c.j_step = SpinJ(0);
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("invalid task/resource combination exits 2 and names valid ones") {
    RunConfig c;
    c.command = Command::task1;
    c.resource = Resource::Kind::refbit;
    const auto r = run_config(c);
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("valid combinations") != std::string::npos);
    CHECK(r.err.find("srf") != std::string::npos);

    c.command = Command::task2;
    CHECK(run_config(c).status == 2);
    c.command = Command::task3;
    c.resource = Resource::Kind::sss;
    c.j = SpinJ(2);
    CHECK(run_config(c).status == 2);
}

TEST_CASE("csv schema") {
    RunConfig c;
    c.command = Command::task3;
    c.resource = Resource::Kind::refbit;
    c.format = Format::csv;
    const auto r = run_config(c);
    REQUIRE(r.status == 0);
    CHECK(r.out.find('\r') == std::string::npos);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "task,resource,parameter,metric,value");
    CHECK(ls[1] == "task3,refbit,,conclusive_prob,0.0416666666667");
    const auto f = split(ls[2]);
    REQUIRE(f.size() == 5);
    CHECK(f[3] == "inconclusive_prob");
    CHECK(std::abs(std::stod(f[4]) - 23.0 / 24) < 1e-11);
}

TEST_CASE("json records keep key order and null parameters") {
    RunConfig c;
    c.command = Command::task2;
    c.resource = Resource::Kind::sss;
    c.j = SpinJ::half();
    c.format = Format::json;
    const auto r = run_config(c);
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() >= 1);
    const auto& first = doc[0];
    std::vector<std::string> keys;
    for (const auto& [k, v] : first.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"task", "resource", "parameter", "metric", "value"});
    CHECK(first["task"] == "task2");
    CHECK(first["metric"] == "avg_info_bits");
    CHECK(first["parameter"].get<double>() == 0.5);
    CHECK(std::abs(first["value"].get<double>() - 0.0981) < 5e-4);

    c.command = Command::task3;
    c.resource = Resource::Kind::srf;
    c.j.reset();
    const auto t3 = nlohmann::ordered_json::parse(run_config(c).out);
    CHECK(t3[0]["parameter"].is_null());
    REQUIRE(t3[0].contains("outcome_table"));
    CHECK(t3[0]["outcome_table"].size() == 4);
    CHECK(t3[0]["outcome_table"]["++"].contains("psi-"));
    CHECK(std::abs(t3[0]["value"].get<double>() - 1.0 / 3) < 1e-10);
}

TEST_CASE("omitting the resource runs every valid one") {
    RunConfig c;
    c.command = Command::task1;
    c.format = Format::csv;
    const auto ls = lines(run_config(c).out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1].rfind("task1,srf,", 0) == 0);
    CHECK(ls[2].rfind("task1,sss,", 0) == 0);
}

TEST_CASE("sweep: ten strictly decreasing rows") {
    RunConfig c;
    c.command = Command::sweep;
    c.j_max = SpinJ(10);
    c.j_step = SpinJ(1);
    c.format = Format::csv;
    const auto r = run_config(c);
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 11);
    double prev = 1.0;
    for (std::size_t k = 1; k < ls.size(); ++k) {
        const auto f = split(ls[k]);
        CHECK(std::stod(f[2]) == doctest::Approx(0.5 * k));
        const double v = std::stod(f[4]);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("optimize-refbit") {
    RunConfig c;
    c.command = Command::optimize_refbit;
    c.grid_n = 21;
    const auto res = execute(c);
    REQUIRE(res.size() == 1);
    CHECK(std::abs(res[0].value - 1.0 / 24) < 1e-6);
    c.resource = Resource::Kind::sss;
    CHECK(run_config(c).status == 2);
}

TEST_CASE("identical configuration gives byte-identical output") {
    RunConfig c;
    c.command = Command::task2;
    c.format = Format::json;
    c.seed = 3;
    const auto a = run_config(c), b = run_config(c);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);

    c.format = Format::text;
    c.command = Command::task3;
    CHECK(run_config(c).out == run_config(c).out);
}

TEST_CASE("reproduce-all detects an under-resolved quadrature") {
    RunConfig c;
    c.command = Command::reproduce_all;
    c.quad_nodes = 8;
    const auto r = run_config(c);
    CHECK(r.status == 1);
    CHECK(r.out.find("FAIL  task2.srf.analytic") != std::string::npos);
    CHECK(r.out.find("FAIL  task3.srf.conclusive") != std::string::npos);
    CHECK(r.out.find("FAIL  task3.refbit.conclusive") != std::string::npos);
    // no quadrature involved
    CHECK(r.out.find("PASS  task3.sss.conclusive") != std::string::npos);
    CHECK(r.out.find("anchors passed") != std::string::npos);
}

TEST_CASE("output file") {
    RunConfig c;
    c.command = Command::task3;
    c.resource = Resource::Kind::sss;
    c.format = Format::csv;
    c.out = "test_cli_out.csv";
    const auto r = run_config(c);
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in("test_cli_out.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "task,resource,parameter,metric,value");
}
