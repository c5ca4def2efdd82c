#include <gtest/gtest.h>

#include <sstream>

#include "stepstone/benchmarks.hpp"
#include "stepstone/scoring.hpp"
#include "support.hpp"

using namespace stepstone;
using testsupport::listing;

namespace {

const MachineProfile& mem() { return x86_memory_profile(); }

Program all_arg() { return Program::filled(mem(), Instruction::make(mem(), 13, 0)); }

ProblemSet set_of(const std::string& name, std::vector<ProblemInstance> instances) {
    ProblemSet s;
    s.benchmark = name;
    s.split = "train";
    s.profile = benchmark_by_name(name).profile;
    s.instances = std::move(instances);
    return s;
}

}  // namespace

TEST(ScoreInstance, ScalarAndArrayPoints) {
    ArrayInstance scalar;
    scalar.input.scalars = {4};
    scalar.expected_scalar = 3;
    scalar.time_bound = 5;
    const Program three = listing(mem(), {{"MOV", 15}});
    EXPECT_EQ(score_instance(mem(), three, scalar), 1);
    EXPECT_EQ(score_instance(mem(), all_arg(), scalar), 0);

    ArrayInstance arr;
    arr.input.arrays.push_back({{1, 9, 3}, 0});
    arr.output_array = 0;
    arr.expected_array = {1, 2, 3};
    arr.time_bound = 5;
    EXPECT_EQ(arr.max_points(), 3);
    EXPECT_EQ(score_instance(mem(), all_arg(), arr), 2);
    EXPECT_FALSE(instance_correct(mem(), all_arg(), arr));
}

TEST(ScoreInstance, SeparateOutputRegion) {
    ArrayInstance v;
    v.input.arrays = {{{1, 2}, 0}, {{3, 4}, 0}, {{0, 0}, 0}};
    v.output_array = 2;
    v.expected_array = {4, 6};
    v.time_bound = 10;
    EXPECT_EQ(score_instance(mem(), all_arg(), v), 0);
    // R3 holds the index of c's last cell; write 6 there.
    const Program p = listing(mem(), {{"ARG", 9}, {"MOV", 15}, {"ADD", 15}});
    EXPECT_EQ(score_instance(mem(), p, v), 1);
}

TEST(EvalProgram, BonusOnFullCorrectness) {
    const auto& fast = benchmark_by_name("fast-sort");
    Rng rng(4);
    std::vector<ProblemInstance> instances;
    std::int64_t cells = 0;
    for (const std::int64_t n : {100, 150, 250}) {
        ArrayInput in;
        std::vector<std::int64_t> a(static_cast<std::size_t>(n));
        for (auto& x : a) x = uniform_int(rng, -99999, 99999);
        in.arrays.push_back({a, 0});
        instances.push_back(make_instance(fast, in, Split::test));
        cells += n;
    }
    ASSERT_EQ(cells, 500);
    const ProblemSet set = set_of("fast-sort", instances);
    EXPECT_EQ(set.max_points(), 500);
    const Score s = eval_program(testsupport::comb_sort_program(), set);
    EXPECT_EQ(s.raw, 500);
    EXPECT_TRUE(s.fully_correct);
    EXPECT_EQ(s.with_bonus, 518);
    EXPECT_EQ(eval_program(testsupport::comb_sort_program(), set), s);
}

TEST(EvalProgram, IdentityOnNegativeToZero) {
    const auto& b = benchmark_by_name("negative-to-zero");
    const ProblemSet set = generate_training_set(b, 11);
    std::int64_t nonneg = 0;
    for (const auto& inst : set.instances) {
        for (const auto x : std::get<ArrayInstance>(inst).input.arrays[0].values) nonneg += x >= 0;
    }
    const Score s = eval_program(all_arg(), set);
    EXPECT_EQ(s.raw, nonneg);
    EXPECT_GT(s.raw, 0);
    EXPECT_FALSE(s.fully_correct);
    EXPECT_EQ(s.with_bonus, s.raw);
    const ProblemSet test = generate_test_set(b, 12, 200);
    EXPECT_FALSE(generalization_test(all_arg(), test).perfect);
}

TEST(EvalProgram, AlwaysWrongScalar) {
    const ProblemSet set = generate_training_set(benchmark_by_name("sum-of-squares"), 3);
    const auto& sp = x86_scalar_profile();
    const Program p = listing(sp, {{"ARG", 0}, {"MOV", 0}, {"SUB", 7}});  // R0 = -1
    EXPECT_EQ(eval_program(p, set).raw, 0);
    EXPECT_EQ(set.max_points(), 200);
}

TEST(EvalProgram, EmptySets) {
    ProblemSet empty = set_of("count-odds", {});
    EXPECT_THROW(eval_program(all_arg(), empty), std::invalid_argument);
    const auto g = generalization_test(all_arg(), empty);
    EXPECT_TRUE(g.perfect);
    EXPECT_EQ(g.fraction, 1.0);
}

TEST(EvalProgram, Monotonicity) {
    const auto& b = benchmark_by_name("negative-to-zero");
    ProblemSet set = generate_training_set(b, 5, 20);
    const std::int64_t before = eval_program(all_arg(), set).raw;
    ArrayInput in;
    in.arrays.push_back({{1, 2, 3}, 0});
    set.instances.push_back(make_instance(b, in, Split::train));
    EXPECT_EQ(eval_program(all_arg(), set).raw, before + 3);
}

TEST(TrainingEvaluator, AgreesWithEvalProgram) {
    Rng rng(17);
    for (const char* name : {"count-odds", "vectors-summed", "fourth-power", "sum-of-squares", "dag-sources"}) {
        const auto& b = benchmark_by_name(name);
        const ProblemSet set = generate_training_set(b, 21, 60);
        TrainingEvaluator eval(set);
        EXPECT_EQ(eval.max_points(), set.max_points());
        for (int t = 0; t < 300; ++t) {
            const Program p = random_program(*b.profile, rng);
            const Score want = eval_program(p, set);
            ASSERT_EQ(eval.score(p), want) << name;
            ASSERT_EQ(eval(p), want.with_bonus) << name;
            const std::int64_t floor = uniform_int(rng, 0, set.max_points() + 5);
            const std::int64_t pruned = eval(p, floor);
            if (want.with_bonus >= floor) {
                ASSERT_EQ(pruned, want.with_bonus) << name;
            } else {
                ASSERT_LT(pruned, floor) << name;
                ASSERT_GE(pruned, 0) << name;
            }
        }
    }
}

TEST(TrainingEvaluator, ImageSets) {
    const auto& b = benchmark_by_name("image-test-pattern-2");
    const ProblemSet set = generate_training_set(b, 1);
    ASSERT_EQ(set.instances.size(), 1u);
    TrainingEvaluator eval(set);
    const Program nops = Program::filled(*set.profile, Instruction::make(*set.profile, 10, 0));
    EXPECT_EQ(eval(nops), 270);
    EXPECT_EQ(eval_program(nops, set).raw, 270);
}

TEST(ProblemFormat, RoundTrip) {
    for (const auto& b : benchmarks()) {
        const ProblemSet set = generate_test_set(b, 9, 15);
        std::stringstream io;
        write_problem_set(io, set);
        const ProblemSet back = read_problem_set(io);
        ASSERT_EQ(back, set) << b.name;
        for (const auto& inst : back.instances) {
            if (const auto* a = std::get_if<ArrayInstance>(&inst)) {
                const ExpectedOutput e = oracle(b, a->input);
                if (e.scalar) ASSERT_EQ(a->expected_scalar, e.scalar);
                if (!e.array.empty()) ASSERT_EQ(a->expected_array, e.array);
            }
        }
    }
}

TEST(ProblemFormat, Errors) {
    std::stringstream bad("format: stepstone-problems 2\n");
    EXPECT_THROW(read_problem_set(bad), ParseError);
    const ProblemSet set = generate_training_set(benchmark_by_name("count-odds"), 1, 2);
    std::stringstream io;
    write_problem_set(io, set);
    std::string text = io.str();
    text.replace(text.find("instances: 2"), 12, "instances: 3");
    std::stringstream truncated(text);
    EXPECT_THROW(read_problem_set(truncated), ParseError);
}
