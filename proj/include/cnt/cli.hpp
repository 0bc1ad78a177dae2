#pragma once
/** @file
 * Batch experiment driver behind the `cnt` tool: one table per command,
 * serialized as CSV or JSON lines, with a per-row invariant flag.
 */

#include "cnt/arith.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cnt::cli {

enum class Command { genus_table, packet_stats, conic_verify, sieve_sweep, convolution_check, hecke_table };
enum class Format { csv, jsonl };

enum ExitCode : int { kOk = 0, kInvariantFailed = 1, kUsage = 2, kIoError = 3, kBudgetExceeded = 4 };

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command c);

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    Command command = Command::genus_table;
    Int d_min = 3;   // |D| range; N range for hecke-table
    Int d_max = 200;
    std::optional<Rational> kappa; // unset: sampled by convolution-check, 1 elsewhere
    std::optional<Int> omega;      // unset: sampled by convolution-check, 1 elsewhere
    std::optional<Int> p1;         // unset: the least admissible split prime
    std::optional<int> n;          // unset: sampled by convolution-check, 0 elsewhere
    double eta = 0.1;
    std::uint64_t seed = 1;
    Int budget = kDefaultBudget;
    Int count = 0; // samples for the random commands; 0 picks the command default
    std::string out; // empty writes to stdout
    Format format = Format::csv;
    unsigned threads = 0; // 0 uses all hardware threads

    /// Throws UsageError.
    void validate() const;
    Int sample_count() const;
};

using Cell = std::variant<Int, Rational, double, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<bool> row_ok;
    std::vector<std::string> failures; // sweep-level invariants that failed

    bool all_ok() const;
};

/// Builds the table for config.command. Rows are computed in parallel and
/// assembled in index order, so the result does not depend on the thread count.
Table run_experiment(const ExperimentConfig& config);

void write_table(const Table& table, Format format, std::ostream& os);

/// Runs, writes the output and returns an ExitCode; diagnostics go to err.
int run(const ExperimentConfig& config, std::ostream& err);

/// Entry point of the `cnt` tool. CNT_BUDGET in the environment overrides --budget.
int main(int argc, char** argv);

} // namespace cnt::cli
