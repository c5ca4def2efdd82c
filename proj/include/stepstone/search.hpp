// Delayed-acceptance hillclimbing, the basic hillclimbing baseline, and the
// local search operators.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "stepstone/isa.hpp"
#include "stepstone/rng.hpp"

namespace stepstone {

struct SearchParams {
    double swap_p = 0.1;
    double double_p = 0.9;
    double copy_p = 0.5;
    std::int64_t period = 75000;  // I, evaluations per period
    std::int64_t max_periods = 4;

    /// Throws std::invalid_argument.
    void validate() const;

    std::int64_t budget() const { return period * max_periods; }
};

enum class HaltReason : std::uint8_t { no_progress, max_periods, external_budget };

std::string_view to_string(HaltReason reason);
HaltReason halt_reason_from_string(std::string_view text);

enum class Algorithm : std::uint8_t { delayed_acceptance, basic_hillclimbing };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view text);

struct Milestone {
    std::int64_t period = 0;
    Program program;
    std::int64_t train_score = 0;
    std::int64_t evaluations = 0;
    std::optional<double> test_score;  // filled offline, never seen by search

    friend bool operator==(const Milestone&, const Milestone&) = default;
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<Milestone> milestones;
    std::optional<Program> final_program;
    std::int64_t final_score = 0;
    bool train_success = false;
    std::int64_t total_evaluations = 0;
    HaltReason halt_reason = HaltReason::no_progress;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Search objective. `score(program, floor)` must be deterministic, return
/// scores >= 0, and be exact whenever the exact score is >= floor; below the
/// floor it may return any smaller value. `success_score` is the lowest score
/// that means full training correctness.
struct Evaluator {
    std::function<std::int64_t(const Program&, std::int64_t floor)> score;
    std::optional<std::int64_t> success_score;

    static Evaluator exact(std::function<std::int64_t(const Program&)> fn,
                           std::optional<std::int64_t> success_score = std::nullopt);
};

/// Exchanges two distinct uniformly chosen slots.
Program swap_op(const Program& program, Rng& rng);
/// Writes one random instruction (opcode and operand each copied from a random
/// slot with probability copy_p) at a random slot.
Program replacement_op(const Program& program, const MachineProfile& profile, Rng& rng,
                       const SearchParams& params);
Program loc_op(const Program& program, const MachineProfile& profile, Rng& rng,
               const SearchParams& params);

struct SearchLimits {
    std::int64_t max_periods = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_evaluations = std::numeric_limits<std::int64_t>::max();
};

/// Resumable delayed-acceptance state machine. T is the acceptance threshold,
/// B the best score of the period with program N, Y the current program and J
/// the evaluation count within the period.
class DelayedAcceptanceSearch {
public:
    DelayedAcceptanceSearch(Evaluator evaluator, const MachineProfile& profile,
                            SearchParams params, std::uint64_t seed);

    /// Runs until natural termination or a limit; may be called again with
    /// larger limits to continue the same trajectory.
    const RunRecord& run(const SearchLimits& limits);

    bool finished() const { return finished_; }
    const RunRecord& record() const { return record_; }
    std::int64_t threshold() const { return threshold_; }
    std::int64_t best() const { return best_; }

private:
    void halt(HaltReason reason, const Program* program, std::int64_t score);

    Evaluator evaluator_;
    const MachineProfile* profile_;
    SearchParams params_;
    Rng rng_;
    RunRecord record_;

    std::int64_t threshold_ = 0;  // T
    std::int64_t best_ = 0;       // B
    std::int64_t in_period_ = 0;  // J
    std::int64_t periods_ = 0;
    std::optional<Program> current_;  // Y
    std::optional<Program> period_best_;  // N
    bool finished_ = false;
};

/// Accepts a candidate iff it scores at least the current program; stops after
/// `period` consecutive evaluations without strict improvement.
class BasicHillclimbingSearch {
public:
    BasicHillclimbingSearch(Evaluator evaluator, const MachineProfile& profile,
                            SearchParams params, std::uint64_t seed);

    const RunRecord& run(const SearchLimits& limits);

    bool finished() const { return finished_; }
    const RunRecord& record() const { return record_; }

private:
    void halt(HaltReason reason);

    Evaluator evaluator_;
    const MachineProfile* profile_;
    SearchParams params_;
    Rng rng_;
    RunRecord record_;

    std::optional<Program> current_;
    std::int64_t current_score_ = 0;
    std::int64_t since_improvement_ = 0;
    bool finished_ = false;
};

/// Runs to natural termination, params.max_periods, or `budget` evaluations.
RunRecord run_delayed_acceptance(const Evaluator& evaluator, const MachineProfile& profile,
                                 const SearchParams& params, std::uint64_t seed,
                                 std::optional<std::int64_t> budget = std::nullopt);

/// Same resource bound as delayed acceptance: period * max_periods evaluations.
RunRecord run_basic_hillclimbing(const Evaluator& evaluator, const MachineProfile& profile,
                                 const SearchParams& params, std::uint64_t seed,
                                 std::optional<std::int64_t> budget = std::nullopt);

}  // namespace stepstone
