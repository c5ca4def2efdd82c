// Single-node TIS-100 interpreter driving the 30x18 imager.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "stepstone/isa.hpp"

namespace stepstone {

enum class TisOp : std::uint8_t {
    sav, swp, mov_acc_down, mov_down, mov_acc, neg, add, add_acc, sub, sub_acc, nop,
    jmp, jez, jnz, jlz, jgz
};

inline constexpr int kTisValueLimit = 999;
inline constexpr int kImageWidth = 30;
inline constexpr int kImageHeight = 18;
inline constexpr int kImagePixels = kImageWidth * kImageHeight;
inline constexpr int kMaxColor = 4;

/// Row-major 30x18 grid of colors.
struct Image {
    std::array<std::uint8_t, kImagePixels> pixels{};

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y * kImageWidth + x)]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y * kImageWidth + x)]; }

    friend bool operator==(const Image&, const Image&) = default;
};

int count_matches(const Image& a, const Image& b);

/// 18 lines of 30 digits 0-4. Throws ParseError.
Image parse_image(std::string_view text);
std::string format_image(const Image& image);

Image solid_image(std::uint8_t color);
/// Color 3 where x+y is even, else 0.
Image checkerboard_image();

struct TisImager {
    enum class Phase : std::uint8_t { expect_x, expect_y, expect_color };
    Phase phase = Phase::expect_x;
    int x = 0;
    int y = 0;
};

struct TisState {
    int acc = 0;
    int bak = 0;
    std::size_t ip = 0;
    std::int64_t cycles_used = 0;
    TisImager imager;
    Image canvas;
    int best_match = 0;
};

/// Immediate value of an operand: index - floor(P/2).
int tis_immediate(const MachineProfile& profile, int operand);
/// Jump target of an operand: floor(index * S / P).
int tis_jump_target(const MachineProfile& profile, int operand);

/// Applies one value sent to the imager. Returns true when a pixel was painted
/// inside the grid with a valid color.
bool imager_send(TisImager& imager, Image& canvas, int value);

struct TisResult {
    int score = 0;  // best_match
    bool solved = false;
    std::int64_t cycles_used = 0;
    TisState state;
};

/// Per-instruction hook for instrumented traces: (slot, cycle cost).
using TisTraceHook = std::function<void(std::size_t slot, int cost)>;

TisResult tis_execute(const MachineProfile& profile, const Program& program, const Image& target,
                      std::int64_t cycle_bound, const TisTraceHook& hook = {});

}  // namespace stepstone
