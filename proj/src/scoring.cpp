#include "stepstone/scoring.hpp"

#include <algorithm>
#include <stdexcept>

namespace stepstone {

namespace {

std::int64_t score_array(const MachineProfile& profile, const Program& program,
                         const ArrayInstance& instance) {
    X86State state = init_state(instance.input);
    const X86Decoded decoded(profile, program);
    decoded.run(state, instance.time_bound);
    std::int64_t points = 0;
    if (instance.expected_scalar && state.regs[0] == *instance.expected_scalar) ++points;
    if (instance.output_array) {
        const std::size_t offset = instance.input.array_offset(*instance.output_array);
        for (std::size_t i = 0; i < instance.expected_array.size(); ++i) {
            points += state.memory[offset + i] == instance.expected_array[i];
        }
    }
    return points;
}

}  // namespace

std::int64_t score_instance(const MachineProfile& profile, const Program& program,
                            const ProblemInstance& instance) {
    if (const auto* a = std::get_if<ArrayInstance>(&instance)) {
        return score_array(profile, program, *a);
    }
    const auto& img = std::get<ImageInstance>(instance);
    return tis_execute(profile, program, img.target, img.time_bound).score;
}

bool instance_correct(const MachineProfile& profile, const Program& program,
                      const ProblemInstance& instance) {
    return score_instance(profile, program, instance) == max_points(instance);
}

Score eval_program(const Program& program, const ProblemSet& training) {
    if (training.empty()) throw std::invalid_argument("training set is empty");
    Score s;
    for (const auto& instance : training.instances) {
        s.raw += score_instance(*training.profile, program, instance);
    }
    s.fully_correct = s.raw == training.max_points();
    s.with_bonus = s.raw + (s.fully_correct ? count_noops(program, *training.profile) : 0);
    return s;
}

Generalization generalization_test(const Program& program, const ProblemSet& test) {
    Generalization g;
    std::int64_t earned = 0;
    for (const auto& instance : test.instances) {
        const std::int64_t points = score_instance(*test.profile, program, instance);
        earned += points;
        if (points != max_points(instance)) g.perfect = false;
    }
    const std::int64_t total = test.max_points();
    g.fraction = total == 0 ? 1.0 : static_cast<double>(earned) / static_cast<double>(total);
    return g;
}

TrainingEvaluator::TrainingEvaluator(const ProblemSet& training)
    : profile_(training.profile), set_(&training), max_points_(training.max_points()) {
    if (training.empty()) throw std::invalid_argument("training set is empty");
    if (profile_->isa != Isa::x86) return;
    std::size_t largest = 0;
    for (const auto& instance : training.instances) {
        const auto& a = std::get<ArrayInstance>(instance);
        FlatInstance f;
        const X86State init = init_state(a.input);
        f.regs = init.regs;
        f.memory_begin = memory_.size();
        f.memory_size = init.memory.size();
        memory_.insert(memory_.end(), init.memory.begin(), init.memory.end());
        if (a.output_array) f.output_offset = a.input.array_offset(*a.output_array);
        f.expected_begin = expected_.size();
        f.expected_size = a.expected_array.size();
        expected_.insert(expected_.end(), a.expected_array.begin(), a.expected_array.end());
        f.has_scalar = a.expected_scalar.has_value();
        f.scalar = a.expected_scalar.value_or(0);
        f.bound = a.time_bound;
        largest = std::max(largest, f.memory_size);
        flat_.push_back(f);
    }
    scratch_.resize(largest);
}

std::int64_t TrainingEvaluator::raw_upto(const Program& program, std::int64_t floor,
                                         bool& complete) {
    complete = true;
    if (profile_->isa != Isa::x86) {
        std::int64_t raw = 0;
        for (const auto& instance : set_->instances) raw += score_instance(*profile_, program, instance);
        return raw;
    }
    const X86Decoded decoded(*profile_, program);
    std::int64_t raw = 0;
    std::int64_t lost = 0;
    for (const FlatInstance& f : flat_) {
        std::array<std::int64_t, kX86Registers> regs = f.regs;
        const std::span<std::int64_t> mem(scratch_.data(), f.memory_size);
        std::copy_n(memory_.begin() + static_cast<std::ptrdiff_t>(f.memory_begin), f.memory_size,
                    mem.begin());
        decoded.run(regs, mem, f.bound);
        std::int64_t points = 0;
        if (f.has_scalar && regs[0] == f.scalar) ++points;
        const std::int64_t* expected = expected_.data() + f.expected_begin;
        for (std::size_t i = 0; i < f.expected_size; ++i) {
            points += mem[f.output_offset + i] == expected[i];
        }
        raw += points;
        lost += static_cast<std::int64_t>(f.has_scalar) + static_cast<std::int64_t>(f.expected_size) -
                points;
        // Once a point is lost no bonus is possible, so max - lost bounds the score.
        if (lost > 0 && max_points_ - lost < floor) {
            complete = false;
            return max_points_ - lost;
        }
    }
    return raw;
}

std::int64_t TrainingEvaluator::operator()(const Program& program, std::int64_t floor) {
    bool complete = true;
    const std::int64_t raw = raw_upto(program, floor, complete);
    if (!complete || raw != max_points_) return raw;
    return raw + count_noops(program, *profile_);
}

Score TrainingEvaluator::score(const Program& program) {
    bool complete = true;
    Score s;
    s.raw = raw_upto(program, std::numeric_limits<std::int64_t>::min(), complete);
    s.fully_correct = s.raw == max_points_;
    s.with_bonus = s.raw + (s.fully_correct ? count_noops(program, *profile_) : 0);
    return s;
}

}  // namespace stepstone
