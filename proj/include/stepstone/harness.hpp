// Experiment orchestration: multi-level run protocol, parameter grid search,
// run logs, trajectory export and reports.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stepstone/benchmarks.hpp"
#include "stepstone/scoring.hpp"
#include "stepstone/search.hpp"

namespace stepstone {

struct ProtocolLevel {
    int runs = 100;
    std::int64_t period = 75000;
    std::int64_t max_periods = 4;

    std::int64_t budget() const { return period * max_periods; }
    friend bool operator==(const ProtocolLevel&, const ProtocolLevel&) = default;
};

/// (100, 75k, 4), (100, 2M, 9), (30, 100M, 10).
std::vector<ProtocolLevel> default_levels();
/// 10 runs at the first level's period and period cap.
ProtocolLevel desk_level();

/// Per-run and data seeds, all derived from the seed base with mix_seed.
std::uint64_t run_seed(std::uint64_t seed_base, std::size_t level, std::size_t run);
std::uint64_t train_data_seed(std::uint64_t seed_base);
std::uint64_t test_data_seed(std::uint64_t seed_base);

struct ProtocolConfig {
    std::string benchmark;
    std::vector<ProtocolLevel> levels = default_levels();
    std::uint64_t seed_base = 1;
    int threads = 1;
    Algorithm algorithm = Algorithm::delayed_acceptance;
    SearchParams params;  // period and max_periods come from each level
    std::size_t train_count = kTrainCount;
    std::size_t test_count = kTestCount;
    const MachineProfile* profile = nullptr;  // nullptr: the benchmark's own
    /// Training-success runs continue past the level's period cap until natural
    /// termination or this many periods in total.
    std::int64_t extension_max_periods = 40;
    bool record_wall_time = false;
};

struct RunSummary {
    std::size_t index = 0;
    RunRecord record;
    std::optional<Program> simplest;  // simplest training-success program
    bool test_perfect = false;
    double test_fraction = 0.0;
    std::optional<std::int64_t> cycles;  // TIS-100: cycles used by `simplest`
    std::optional<double> wall_seconds;
};

struct BenchmarkReport {
    std::string benchmark;
    std::string profile;
    std::string algorithm;
    std::uint64_t seed_base = 0;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    std::size_t level_index = 0;  // first level with a training success, else the last
    ProtocolLevel level;
    int train_successes = 0;
    int perfect_generalizations = 0;
    double pct_train_success = 0.0;
    double pct_generalize = 0.0;
    std::optional<int> smallest_size;  // non-N instructions
    std::optional<std::pair<int, std::int64_t>> best_size_cycles;  // TIS-100
    std::vector<RunSummary> runs;
};

/// Selects among the milestones and final program of a run the training
/// success with the most N opcodes, earliest on ties.
std::optional<Program> simplest_success(const RunRecord& record, const MachineProfile& profile,
                                        std::int64_t success_score);

/// Runs one search on a training set. Thread-safe for distinct calls.
RunRecord run_search(const ProblemSet& training, Algorithm algorithm, const SearchParams& params,
                     std::uint64_t seed, std::optional<std::int64_t> budget = std::nullopt,
                     std::optional<std::int64_t> extension_max_periods = std::nullopt);

BenchmarkReport run_protocol(const ProtocolConfig& config);

/// Calls fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// Grid search.
struct GridCell {
    double swap_p;
    double double_p;
    double copy_p;
    std::int64_t period;
};

struct GridConfig {
    std::vector<double> swap_p = {0.0, 0.1};
    std::vector<double> double_p = {0.0, 0.1, 0.5, 0.9};
    std::vector<double> copy_p = {0.0, 0.1, 0.5};
    std::vector<std::int64_t> periods = {3000, 10000, 25000, 75000, 150000};
    std::vector<std::string> benchmarks;  // empty: the preliminary tier
    int runs_per_cell = 100;
    std::int64_t budget = 300000;
    std::uint64_t seed_base = 1;
    int threads = 1;
    std::size_t train_count = kTrainCount;
    std::size_t test_count = kTestCount;
};

std::vector<GridCell> grid_cells(const GridConfig& config);

struct GridRow {
    GridCell cell;
    std::vector<int> perfect_per_benchmark;
    int total_perfect = 0;
};

struct GridResult {
    std::vector<std::string> benchmarks;
    std::vector<GridRow> rows;  // ranked: total descending, then grid order
};

/// Every cell runs `runs_per_cell` delayed-acceptance runs per benchmark at
/// the fixed budget and counts runs whose simplest program generalizes
/// perfectly. runs_per_cell = 0 yields an empty table.
GridResult grid_search(const GridConfig& config);

// Trajectories.
struct TrajectoryRow {
    std::size_t milestone = 0;
    std::int64_t period = 0;
    std::int64_t evaluations = 0;
    std::int64_t train_score = 0;
    double train_pct = 0.0;
    double test_pct = 0.0;
};

/// One row per milestone in evaluation order. Test data is only scored here,
/// after search.
std::vector<TrajectoryRow> export_trajectory(const RunRecord& record, const ProblemSet& training,
                                             const ProblemSet& test);

// Serialization. Documented in the README.
std::string run_log_line(const BenchmarkReport& report, const RunSummary& run,
                         const MachineProfile& profile);
void write_run_log(std::ostream& out, const BenchmarkReport& report,
                   const MachineProfile& profile);
std::string report_json(const BenchmarkReport& report);
void write_report_csv(std::ostream& out, const std::vector<BenchmarkReport>& reports);
void write_grid_csv(std::ostream& out, const GridResult& result);
void write_trajectory_header(std::ostream& out);
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows,
                          std::size_t run_index);

/// Parses one run-log line back into its record (milestones and final program).
struct LoggedRun {
    std::string benchmark;
    std::string profile;
    std::uint64_t seed_base = 0;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    std::size_t run = 0;
    RunRecord record;
};
LoggedRun parse_run_log_line(const std::string& line);

}  // namespace stepstone
