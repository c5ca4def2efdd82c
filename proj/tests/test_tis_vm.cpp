#include <gtest/gtest.h>

#include <algorithm>

#include "stepstone/tis_vm.hpp"
#include "tis_reference.hpp"

using namespace stepstone;

using namespace testsupport;

TEST(TisOperands, ImmediatesAndJumps) {
    EXPECT_EQ(tis_immediate(p1999(), 999), 0);
    EXPECT_EQ(tis_immediate(tis100_profile(21), 0), -10);
    EXPECT_EQ(tis_immediate(tis100_profile(21), 20), 10);
    EXPECT_EQ(tis_jump_target(p1999(), 1998), 14);
    EXPECT_EQ(tis_jump_target(p1999(), 0), 0);
    EXPECT_EQ(tis_jump_target(p1999(), to_slot(6)), 6);
}

TEST(TisImages, Patterns) {
    EXPECT_EQ(count_matches(solid_image(0), checkerboard_image()), 270);
    EXPECT_EQ(checkerboard_image().at(0, 0), 3);
    EXPECT_EQ(checkerboard_image().at(1, 0), 0);
    EXPECT_EQ(parse_image(format_image(checkerboard_image())), checkerboard_image());
    EXPECT_THROW(parse_image("0123"), ParseError);
    std::string bad = format_image(solid_image(1));
    bad[5] = '7';
    EXPECT_THROW(parse_image(bad), ParseError);
}

TEST(TisImager, Protocol) {
    TisImager im;
    Image canvas;
    EXPECT_FALSE(imager_send(im, canvas, 2));
    EXPECT_FALSE(imager_send(im, canvas, 1));
    EXPECT_TRUE(imager_send(im, canvas, 4));
    EXPECT_TRUE(imager_send(im, canvas, 3));
    EXPECT_FALSE(imager_send(im, canvas, 9));  // invalid color, cursor advances
    EXPECT_TRUE(imager_send(im, canvas, 1));
    EXPECT_EQ(canvas.at(2, 1), 4);
    EXPECT_EQ(canvas.at(3, 1), 3);
    EXPECT_EQ(canvas.at(4, 1), 0);
    EXPECT_EQ(canvas.at(5, 1), 1);
    EXPECT_FALSE(imager_send(im, canvas, -1));
    EXPECT_EQ(im.phase, TisImager::Phase::expect_x);
    imager_send(im, canvas, 29);
    imager_send(im, canvas, 17);
    EXPECT_TRUE(imager_send(im, canvas, 2));
    EXPECT_FALSE(imager_send(im, canvas, 2));  // x = 30 is off the grid
    EXPECT_EQ(canvas.at(29, 17), 2);
}

TEST(TisExec, NopScores) {
    const Program nops = Program::filled(p1999(), Instruction::make(p1999(), 10, 0));
    const auto checker = tis_execute(p1999(), nops, checkerboard_image(), 10000);
    EXPECT_EQ(checker.score, 270);
    EXPECT_FALSE(checker.solved);
    EXPECT_EQ(checker.cycles_used, 10000);
    const auto solid = tis_execute(p1999(), nops, solid_image(3), 10000);
    EXPECT_EQ(solid.score, 0);
}

TEST(TisExec, RowFillerSolvesPatternOne) {
    const auto r = tis_execute(p1999(), row_filler(), solid_image(3), 10000);
    EXPECT_TRUE(r.solved);
    EXPECT_EQ(r.score, 540);
    EXPECT_LE(r.cycles_used, 10000);
    EXPECT_EQ(r.state.canvas, solid_image(3));
    const auto tight = tis_execute(p1999(), row_filler(), solid_image(3), r.cycles_used - 1);
    EXPECT_FALSE(tight.solved);
    EXPECT_LT(tight.score, 540);
}

TEST(TisExec, Clamping) {
    const auto& p = tis100_profile(1999);
    const Program grow = listing(p, {{"MOVA", imm(999)}, {"ADDA", 0}, {"SAV", 0}, {"NEG", 0}, {"SUB", imm(999)}});
    const auto r = tis_execute(p, grow, solid_image(3), 5);
    EXPECT_EQ(r.state.acc, -999);
    EXPECT_EQ(r.state.bak, 999);
}

TEST(TisExec, MatchesReferenceAndTrace) {
    Rng rng(31);
    for (int t = 0; t < 1000; ++t) {
        const auto& p = tis100_profile(t % 2 == 0 ? 1999 : 21);
        const Program prog = biased_random(p, rng);
        const Image& target = t % 3 == 0 ? checkerboard_image() : solid_image(static_cast<std::uint8_t>(t % 5));
        std::int64_t traced = 0;
        std::int64_t down = 0;
        std::int64_t other = 0;
        const auto r = tis_execute(p, prog, target, 2000, [&](std::size_t slot, int cost) {
            traced += cost;
            const int op = prog[slot].opcode;
            (op == 2 || op == 3 ? down : other) += 1;
        });
        ASSERT_EQ(r.cycles_used, traced);
        ASSERT_EQ(r.cycles_used, other + 2 * down);
        ASSERT_LE(std::abs(r.state.acc), 999);
        ASSERT_LE(std::abs(r.state.bak), 999);
        ASSERT_TRUE(!r.solved || r.score == 540);
        const RefTis want = reference_tis(p, prog, target, 2000);
        ASSERT_EQ(want.cycles, r.cycles_used) << serialize(prog, p);
        ASSERT_EQ(want.best, r.score) << serialize(prog, p);
        ASSERT_EQ(want.acc, r.state.acc);
        ASSERT_EQ(want.bak, r.state.bak);
        ASSERT_EQ(want.solved, r.solved);
        ASSERT_EQ(want.canvas, r.state.canvas);
        const auto again = tis_execute(p, prog, target, 2000);
        ASSERT_EQ(again.state.canvas, r.state.canvas);
        ASSERT_EQ(again.cycles_used, r.cycles_used);
    }
}

TEST(TisExec, BestMatchIsMonotone) {
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        const Program prog = biased_random(p1999(), rng);
        int last = -1;
        for (const std::int64_t bound : {0, 50, 200, 800, 3000}) {
            const auto r = tis_execute(p1999(), prog, checkerboard_image(), bound);
            ASSERT_GE(r.score, last);
            last = r.score;
        }
    }
}
