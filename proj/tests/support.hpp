// Test helpers and independent reference implementations.
#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stepstone/isa.hpp"
#include "stepstone/x86_vm.hpp"

namespace testsupport {

using stepstone::Instruction;
using stepstone::MachineProfile;
using stepstone::Program;

inline std::string data_path(const std::string& name) { return std::string(STEPSTONE_TEST_DATA) + "/" + name; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline Program comb_sort_program() {
    return stepstone::deserialize(read_text(data_path("fast_sort_comb.prog")), stepstone::x86_memory_profile());
}

/// Builds a program from (mnemonic, operand) pairs, padding with the N opcode.
inline Program listing(const MachineProfile& profile, const std::vector<std::pair<const char*, int>>& lines) {
    std::vector<Instruction> slots;
    for (const auto& [mnem, operand] : lines) {
        slots.push_back(Instruction::make(profile, stepstone::opcode_from_mnemonic(profile, mnem), operand));
    }
    while (slots.size() < static_cast<std::size_t>(profile.length)) {
        slots.push_back(Instruction::make(profile, profile.noop_opcode, 0));
    }
    return Program(profile, slots);
}

// Straightforward slot-by-slot x86 interpreter written from the instruction
// table, used to cross-check the predecoded one.
struct RefX86 {
    std::array<std::int64_t, 6> regs{};
    std::vector<std::int64_t> memory;
    bool zf = false, sf = false, of = false;
    std::size_t ip = 0;
    std::int64_t loops = 0;
    int halt = 0;  // 0 end, 1 loopcount, 2 memory
};

inline RefX86 reference_x86(const MachineProfile& p, const Program& prog, RefX86 s, std::int64_t bound) {
    const int S = p.length;
    auto kind = [&](int x) {  // 0 reg, 1 mem, 2 imm
        if (x < 6) return 0;
        if (p.has_memory && x < 12) return 1;
        return 2;
    };
    auto imm = [&](int x) { return static_cast<std::int64_t>(p.has_memory ? x - 12 : x - 6); };
    auto dest_at = [&](std::size_t ip) {
        int d = 0;
        for (std::size_t i = 0; i < ip; ++i) {
            if (prog[i].opcode == 13) d = prog[i].operand;
        }
        return d;
    };
    auto addr_ok = [&](int x) {
        const std::int64_t a = s.regs[static_cast<std::size_t>(x - 6)];
        return a >= 0 && a < static_cast<std::int64_t>(s.memory.size());
    };
    auto read = [&](int x) -> std::int64_t {
        switch (kind(x)) {
            case 0: return s.regs[static_cast<std::size_t>(x)];
            case 1: return s.memory[static_cast<std::size_t>(s.regs[static_cast<std::size_t>(x - 6)])];
            default: return imm(x);
        }
    };
    auto write = [&](int x, std::int64_t v) {
        if (kind(x) == 0) s.regs[static_cast<std::size_t>(x)] = v;
        if (kind(x) == 1) s.memory[static_cast<std::size_t>(s.regs[static_cast<std::size_t>(x - 6)])] = v;
    };
    auto wrap = [](__int128 v) { return static_cast<std::int64_t>(static_cast<std::uint64_t>(static_cast<unsigned __int128>(v))); };
    while (s.ip < static_cast<std::size_t>(S)) {
        const Instruction ins = prog[s.ip];
        const int op = ins.opcode;
        const int x = ins.operand;
        if (op == 13) {
            ++s.ip;
            continue;
        }
        if (op >= 9) {
            bool taken = op == 9 || (op == 10 && s.zf) || (op == 11 && !s.zf) || (op == 12 && !s.zf && s.sf == s.of);
            if (!taken) {
                ++s.ip;
                continue;
            }
            const std::size_t target = static_cast<std::size_t>(x * (S / p.operands));
            if (target <= s.ip) {
                if (s.loops + 1 > bound) {
                    s.halt = 1;
                    return s;
                }
                ++s.loops;
            }
            s.ip = target;
            continue;
        }
        const int d = op == 4 ? x : dest_at(s.ip);
        if ((kind(x) == 1 && op != 4 && !addr_ok(x)) || (kind(d) == 1 && !addr_ok(d))) {
            s.halt = 2;
            return s;
        }
        const std::int64_t a = read(d);
        const std::int64_t b = op == 4 ? 1 : read(x);
        __int128 exact = 0;
        std::int64_t r = 0;
        bool overflow = false;
        bool store = true;
        switch (op) {
            case 0: write(d, b); ++s.ip; continue;
            case 1: exact = static_cast<__int128>(a) + b; break;
            case 2: exact = static_cast<__int128>(a) - b; break;
            case 3: exact = static_cast<__int128>(a) * b; break;
            case 4: exact = static_cast<__int128>(a) + 1; break;
            case 5: exact = static_cast<__int128>(a) - b; store = false; break;
            case 6: exact = a & b; store = false; break;
            case 7: exact = static_cast<__int128>(static_cast<std::uint64_t>(a) >> (b & 63)); break;
            case 8: exact = static_cast<__int128>(static_cast<std::uint64_t>(a) << (b & 63)); break;
        }
        r = wrap(exact);
        overflow = op <= 5 && static_cast<__int128>(r) != exact;
        s.zf = r == 0;
        s.sf = r < 0;
        s.of = overflow;
        if (store) write(d, r);
        ++s.ip;
    }
    return s;
}

}  // namespace testsupport
