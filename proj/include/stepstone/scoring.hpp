// Training-set scoring with simplicity bonus, and test-set generalization.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stepstone/isa.hpp"
#include "stepstone/problem.hpp"

namespace stepstone {

struct Score {
    std::int64_t raw = 0;
    bool fully_correct = false;
    std::int64_t with_bonus = 0;

    friend bool operator==(const Score&, const Score&) = default;
};

/// Runs the program to halt (any reason) and counts correct outputs: one for
/// the scalar in R0 if required, one per matching output cell. TIS-100
/// instances score their best pixel match.
std::int64_t score_instance(const MachineProfile& profile, const Program& program,
                            const ProblemInstance& instance);

/// True iff the instance scores all of its points within its time bound.
bool instance_correct(const MachineProfile& profile, const Program& program,
                      const ProblemInstance& instance);

/// Raw points over the set, plus one per opcode N once fully correct.
Score eval_program(const Program& program, const ProblemSet& training);

struct Generalization {
    bool perfect = true;
    double fraction = 1.0;  // points earned / attainable; 1 on an empty set
};

Generalization generalization_test(const Program& program, const ProblemSet& test);

/// Fast repeated scoring of candidates against one training set. Instances are
/// flattened once; memory scratch is reused, so an instance must not be shared
/// between threads.
class TrainingEvaluator {
public:
    explicit TrainingEvaluator(const ProblemSet& training);

    /// Exact bonus-inclusive score whenever that score is >= floor. Otherwise
    /// returns some value below floor, possibly after scoring only a prefix of
    /// the instances.
    std::int64_t operator()(const Program& program,
                            std::int64_t floor = std::numeric_limits<std::int64_t>::min());

    Score score(const Program& program);

    std::int64_t max_points() const { return max_points_; }
    const MachineProfile& profile() const { return *profile_; }

private:
    struct FlatInstance {
        std::array<std::int64_t, kX86Registers> regs{};
        std::size_t memory_begin = 0;
        std::size_t memory_size = 0;
        std::size_t output_offset = 0;  // relative to the instance's memory
        std::size_t expected_begin = 0;
        std::size_t expected_size = 0;
        bool has_scalar = false;
        std::int64_t scalar = 0;
        std::int64_t bound = 0;
    };

    std::int64_t raw_upto(const Program& program, std::int64_t floor, bool& complete);

    const MachineProfile* profile_;
    const ProblemSet* set_;
    std::int64_t max_points_ = 0;
    std::vector<FlatInstance> flat_;
    std::vector<std::int64_t> memory_;
    std::vector<std::int64_t> expected_;
    std::vector<std::int64_t> scratch_;
};

}  // namespace stepstone
