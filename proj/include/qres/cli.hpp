// cli.hpp
// Run configuration, record formatting and the reproduction report used by
// the `qres` command-line tool.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qres/tasks.hpp"

namespace qres::cli {

enum class Command { task1, task2, task3, sweep, optimize_refbit, reproduce_all };
enum class Format { json, csv, text };

struct RunConfig {
    Command command = Command::reproduce_all;
    std::optional<Resource::Kind> resource;
    std::optional<SpinJ> j;
    SpinJ j_max{20};   // 10
    SpinJ j_step{1};   // 1/2
    int grid_n = 101;
    Format format = Format::text;
    std::optional<std::string> out;
    std::uint64_t seed = 0;
    int quad_nodes = kDefaultQuadratureNodes;
};

/// Raised for configurations that violate RunConfig invariants or ask for
/// an unsupported task/resource combination. Maps to exit status 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::optional<Command> parse_command(const std::string& name);
std::optional<Resource::Kind> parse_resource(const std::string& name);
std::optional<Format> parse_format(const std::string& name);

/// Throws ConfigError on invalid settings.
void validate(const RunConfig& config);

/// Results for every command except reproduce-all.
std::vector<TaskResult> execute(const RunConfig& config);

/// CSV header: task,resource,parameter,metric,value
void write_csv(std::ostream& os, const std::vector<TaskResult>& results);
/// JSON array, one object per result, keys in schema order.
void write_json(std::ostream& os, const std::vector<TaskResult>& results);
/// Human-readable rendering; outcome tables use outcomes as rows and
/// hypotheses as columns.
void write_text(std::ostream& os, const std::vector<TaskResult>& results);

struct AnchorCheck {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Every reproduced table/figure value compared with its reference at
/// fixed tolerances.
std::vector<AnchorCheck> reproduce_all(int quad_nodes = kDefaultQuadratureNodes);

void write_report(std::ostream& os, const std::vector<AnchorCheck>& checks);

/// Executes the configuration, writing records to `out` (or the configured
/// file) and diagnostics to `err`. Returns 0 on success, 2 on invalid
/// configuration, 1 on numerical failure or a failed anchor.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qres::cli
