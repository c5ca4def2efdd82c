#include "stepstone/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stepstone {

void SearchParams::validate() const {
    auto probability = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(std::string(name) + " must be in [0,1]");
        }
    };
    probability(swap_p, "swapP");
    probability(double_p, "doubleP");
    probability(copy_p, "copyP");
    if (period < 1) throw std::invalid_argument("period length must be >= 1");
    if (max_periods < 1) throw std::invalid_argument("max periods must be >= 1");
}

std::string_view to_string(HaltReason reason) {
    switch (reason) {
        case HaltReason::no_progress: return "no-progress";
        case HaltReason::max_periods: return "max-periods";
        case HaltReason::external_budget: return "external-budget";
    }
    return "?";
}

HaltReason halt_reason_from_string(std::string_view text) {
    for (auto r : {HaltReason::no_progress, HaltReason::max_periods, HaltReason::external_budget}) {
        if (to_string(r) == text) return r;
    }
    throw std::invalid_argument("unknown halt reason '" + std::string(text) + "'");
}

std::string_view to_string(Algorithm algorithm) {
    return algorithm == Algorithm::delayed_acceptance ? "delayed-acceptance" : "basic-hillclimbing";
}

Algorithm algorithm_from_string(std::string_view text) {
    if (text == "delayed-acceptance" || text == "da") return Algorithm::delayed_acceptance;
    if (text == "basic-hillclimbing" || text == "bh") return Algorithm::basic_hillclimbing;
    throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

Evaluator Evaluator::exact(std::function<std::int64_t(const Program&)> fn,
                           std::optional<std::int64_t> success_score) {
    return {[fn = std::move(fn)](const Program& p, std::int64_t) { return fn(p); }, success_score};
}

Program swap_op(const Program& program, Rng& rng) {
    const std::size_t n = program.size();
    const std::size_t i = uniform_index(rng, n);
    std::size_t j = uniform_index(rng, n - 1);
    if (j >= i) ++j;
    return program.with_swapped(i, j);
}

Program replacement_op(const Program& program, const MachineProfile& profile, Rng& rng,
                       const SearchParams& params) {
    Instruction w = random_instruction(profile, rng);
    if (chance(rng, params.copy_p)) w.opcode = program[uniform_index(rng, program.size())].opcode;
    if (chance(rng, params.copy_p)) w.operand = program[uniform_index(rng, program.size())].operand;
    return program.with_instruction(uniform_index(rng, program.size()), w);
}

Program loc_op(const Program& program, const MachineProfile& profile, Rng& rng,
               const SearchParams& params) {
    if (chance(rng, params.swap_p)) return swap_op(program, rng);
    Program z = replacement_op(program, profile, rng, params);
    if (chance(rng, params.double_p)) z = replacement_op(z, profile, rng, params);
    return z;
}

namespace {

bool succeeded(const Evaluator& e, std::int64_t score) {
    return e.success_score.has_value() && score >= *e.success_score;
}

}  // namespace

DelayedAcceptanceSearch::DelayedAcceptanceSearch(Evaluator evaluator, const MachineProfile& profile,
                                                 SearchParams params, std::uint64_t seed)
    : evaluator_(std::move(evaluator)), profile_(&profile), params_(params), rng_(seed) {
    params_.validate();
    record_.seed = seed;
}

void DelayedAcceptanceSearch::halt(HaltReason reason, const Program* program, std::int64_t score) {
    record_.halt_reason = reason;
    record_.final_program = program ? std::optional<Program>(*program) : std::nullopt;
    record_.final_score = program ? score : 0;
    record_.train_success = program != nullptr && succeeded(evaluator_, score);
}

const RunRecord& DelayedAcceptanceSearch::run(const SearchLimits& limits) {
    if (finished_) return record_;
    while (true) {
        if (periods_ >= limits.max_periods) {
            halt(HaltReason::max_periods, period_best_ ? &*period_best_ : nullptr, best_);
            return record_;
        }
        if (record_.total_evaluations >= limits.max_evaluations) {
            halt(HaltReason::external_budget, period_best_ ? &*period_best_ : nullptr, best_);
            return record_;
        }

        Program candidate = best_ == 0 ? random_program(*profile_, rng_)
                                       : loc_op(*current_, *profile_, rng_, params_);
        // Scores are never negative, so while T is 0 only comparisons against B
        // need an exact value.
        const std::int64_t floor = threshold_ > 0 ? threshold_ : best_;
        const std::int64_t score = evaluator_.score(candidate, floor);
        ++record_.total_evaluations;
        if (score >= best_) {
            best_ = score;
            period_best_ = candidate;
        }
        if (score >= threshold_) current_ = std::move(candidate);

        if (++in_period_ == params_.period) {
            ++periods_;
            if (best_ == threshold_) {
                // No progress this period: Y scores exactly T here.
                record_.milestones.push_back(
                    {periods_, *current_, threshold_, record_.total_evaluations, std::nullopt});
                halt(HaltReason::no_progress, &*current_, threshold_);
                finished_ = true;
                return record_;
            }
            current_ = period_best_;
            threshold_ = best_;
            in_period_ = 0;
            record_.milestones.push_back(
                {periods_, *period_best_, best_, record_.total_evaluations, std::nullopt});
        }
    }
}

BasicHillclimbingSearch::BasicHillclimbingSearch(Evaluator evaluator, const MachineProfile& profile,
                                                 SearchParams params, std::uint64_t seed)
    : evaluator_(std::move(evaluator)), profile_(&profile), params_(params), rng_(seed) {
    params_.validate();
    record_.seed = seed;
}

void BasicHillclimbingSearch::halt(HaltReason reason) {
    record_.halt_reason = reason;
    record_.final_program = current_;
    record_.final_score = current_ ? current_score_ : 0;
    record_.train_success = current_.has_value() && succeeded(evaluator_, current_score_);
}

const RunRecord& BasicHillclimbingSearch::run(const SearchLimits& limits) {
    if (finished_) return record_;
    const std::int64_t period_cap =
        limits.max_periods > std::numeric_limits<std::int64_t>::max() / params_.period
            ? std::numeric_limits<std::int64_t>::max()
            : limits.max_periods * params_.period;
    while (true) {
        if (record_.total_evaluations >= period_cap) {
            halt(HaltReason::max_periods);
            return record_;
        }
        if (record_.total_evaluations >= limits.max_evaluations) {
            halt(HaltReason::external_budget);
            return record_;
        }

        Program candidate = current_score_ == 0 ? random_program(*profile_, rng_)
                                                : loc_op(*current_, *profile_, rng_, params_);
        const std::int64_t score = evaluator_.score(candidate, current_score_);
        const std::int64_t evals = ++record_.total_evaluations;
        const std::int64_t period = (evals + params_.period - 1) / params_.period;
        const bool first = !current_.has_value();
        const bool improved = score > current_score_;
        if (first || score >= current_score_) {
            current_ = std::move(candidate);
            current_score_ = score;
        }
        if (first || improved) {
            record_.milestones.push_back({period, *current_, current_score_, evals, std::nullopt});
        }
        since_improvement_ = improved ? 0 : since_improvement_ + 1;
        if (since_improvement_ == params_.period) {
            halt(HaltReason::no_progress);
            finished_ = true;
            return record_;
        }
    }
}

RunRecord run_delayed_acceptance(const Evaluator& evaluator, const MachineProfile& profile,
                                 const SearchParams& params, std::uint64_t seed,
                                 std::optional<std::int64_t> budget) {
    DelayedAcceptanceSearch search(evaluator, profile, params, seed);
    SearchLimits limits;
    limits.max_periods = params.max_periods;
    if (budget) limits.max_evaluations = *budget;
    return search.run(limits);
}

RunRecord run_basic_hillclimbing(const Evaluator& evaluator, const MachineProfile& profile,
                                 const SearchParams& params, std::uint64_t seed,
                                 std::optional<std::int64_t> budget) {
    BasicHillclimbingSearch search(evaluator, profile, params, seed);
    SearchLimits limits;
    limits.max_periods = params.max_periods;
    if (budget) limits.max_evaluations = *budget;
    return search.run(limits);
}

}  // namespace stepstone
