// TIS-100 test helpers: a row-filling solution for the all-3 image and a
// reference simulator transcribed from the opcode table.
#pragma once

#include <algorithm>
#include <cstdint>

#include "stepstone/tis_vm.hpp"
#include "support.hpp"

namespace testsupport {

using stepstone::Image;
using stepstone::kImagePixels;
using stepstone::kImageWidth;
using stepstone::kImageHeight;
using stepstone::kMaxColor;
using stepstone::Rng;

inline const MachineProfile& p1999() { return stepstone::tis100_profile(1999); }

inline int imm(int value) { return value + 999; }

// Operand whose jump target is `slot` under P=1999, S=15.
inline int to_slot(int slot) { return (slot * 1999 + 14) / 15; }

inline Program row_filler() {
    return listing(p1999(), {{"MOVD", imm(0)},
                             {"SWP", 0},
                             {"MOVAD", 0},
                             {"ADD", imm(1)},
                             {"SWP", 0},
                             {"MOVA", imm(30)},
                             {"MOVD", imm(3)},
                             {"SUB", imm(1)},
                             {"JGZ", to_slot(6)},
                             {"MOVD", imm(-1)}});
}

struct RefTis {
    int acc = 0, bak = 0, best = 0;
    std::int64_t cycles = 0;
    bool solved = false;
    Image canvas;
};

// Direct transcription of the opcode table, independent of the simulator.
inline RefTis reference_tis(const MachineProfile& p, const Program& prog, const Image& target, std::int64_t bound) {
    RefTis s;
    int phase = 0, cx = 0, cy = 0;
    std::size_t ip = 0;
    auto clampv = [](int v) { return v > 999 ? 999 : (v < -999 ? -999 : v); };
    auto matches = [&] {
        int m = 0;
        for (int i = 0; i < kImagePixels; ++i) m += s.canvas.pixels[static_cast<std::size_t>(i)] == target.pixels[static_cast<std::size_t>(i)];
        return m;
    };
    s.best = matches();
    if (s.best == kImagePixels) {
        s.solved = true;
        return s;
    }
    while (true) {
        const Instruction ins = prog[ip];
        const int v = ins.operand - p.operands / 2;
        const bool down = ins.opcode == 2 || ins.opcode == 3;
        if (s.cycles + (down ? 2 : 1) > bound) return s;
        s.cycles += down ? 2 : 1;
        std::size_t next = (ip + 1) % prog.size();
        const auto jump = static_cast<std::size_t>(ins.operand * p.length / p.operands);
        switch (ins.opcode) {
            case 0: s.bak = s.acc; break;
            case 1: std::swap(s.acc, s.bak); break;
            case 4: s.acc = clampv(v); break;
            case 5: s.acc = -s.acc; break;
            case 6: s.acc = clampv(s.acc + v); break;
            case 7: s.acc = clampv(2 * s.acc); break;
            case 8: s.acc = clampv(s.acc - v); break;
            case 9: s.acc = 0; break;
            case 11: next = jump; break;
            case 12: if (s.acc == 0) next = jump; break;
            case 13: if (s.acc != 0) next = jump; break;
            case 14: if (s.acc < 0) next = jump; break;
            case 15: if (s.acc > 0) next = jump; break;
            default: break;
        }
        if (down) {
            const int out = ins.opcode == 2 ? s.acc : v;
            if (out < 0) {
                phase = 0;
            } else if (phase == 0) {
                cx = out;
                phase = 1;
            } else if (phase == 1) {
                cy = out;
                phase = 2;
            } else {
                const int x = cx++;
                if (x < kImageWidth && cy < kImageHeight && out <= kMaxColor) {
                    s.canvas.at(x, cy) = static_cast<std::uint8_t>(out);
                    s.best = std::max(s.best, matches());
                    if (s.best == kImagePixels) {
                        s.solved = true;
                        return s;
                    }
                }
            }
        }
        ip = next;
    }
}

inline Program biased_random(const MachineProfile& p, Rng& rng) {
    std::vector<Instruction> slots;
    for (int i = 0; i < p.length; ++i) {
        Instruction ins = stepstone::random_instruction(p, rng);
        // Small immediates so coordinates and colors land on the grid.
        if (stepstone::chance(rng, 0.7)) {
            const auto v = std::clamp<std::int64_t>(p.operands / 2 + stepstone::uniform_int(rng, -3, 20), 0, p.operands - 1);
            ins.operand = static_cast<std::uint16_t>(v);
        }
        slots.push_back(ins);
    }
    return Program(p, slots);
}

}  // namespace testsupport
