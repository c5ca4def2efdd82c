// Interpreter for the simplified x86-64 subset.
//
// Operand layout (index -> meaning):
//   with memory (P=16): 0..5 R0..R5, 6..11 [R0]..[R5], 12..15 immediates 0..3
//   scalar only (P=10): 0..5 R0..R5, 6..9 immediates 0..3
// Jump operands x target instruction x * floor(S/P).
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stepstone/isa.hpp"

namespace stepstone {

enum class X86Op : std::uint8_t {
    mov, add, sub, imul, inc, cmp, test, shr, shl, jmp, jz, jnz, jg, arg
};

inline constexpr int kX86Registers = 6;

struct X86Flags {
    bool zero = false;
    bool sign = false;
    bool overflow = false;
    friend bool operator==(const X86Flags&, const X86Flags&) = default;
};

struct X86State {
    std::array<std::int64_t, kX86Registers> regs{};
    std::vector<std::int64_t> memory;
    X86Flags flags;
    std::size_t ip = 0;
    int dest = 0;  // operand index of the governing ARG destination at ip
    std::int64_t loopcount_used = 0;

    friend bool operator==(const X86State&, const X86State&) = default;
};

enum class X86Halt : std::uint8_t { end_of_program, loopcount_exceeded, memory_violation };

struct X86Result {
    X86State state;
    X86Halt halt;
};

enum class OperandKind : std::uint8_t { reg, mem, imm };

struct OperandRef {
    OperandKind kind;
    int reg = 0;             // register index for reg and mem
    std::int64_t value = 0;  // immediate value
};

OperandRef classify_operand(const MachineProfile& profile, int operand);

/// Read-mode value of an operand; nullopt on a memory violation.
std::optional<std::int64_t> read_operand(const MachineProfile& profile, int operand,
                                         const X86State& state);

/// Jump-mode target: operand * floor(S/P).
int jump_target(const MachineProfile& profile, int operand);

/// Input layout for one instance: scalar inputs and arrays laid out back to
/// back in memory. Preallocated output space is an array of zeros.
struct InputArray {
    std::vector<std::int64_t> values;
    std::size_t row_size = 0;  // nonzero for 2d arrays (row-major)

    friend bool operator==(const InputArray&, const InputArray&) = default;
};

struct ArrayInput {
    std::vector<std::int64_t> scalars;
    std::vector<InputArray> arrays;

    std::size_t memory_size() const;
    /// Offset of array `i` inside the memory block.
    std::size_t array_offset(std::size_t i) const;

    friend bool operator==(const ArrayInput&, const ArrayInput&) = default;
};

/// Register initializers in assignment order: scalars, last index of each
/// array (-1 if empty), first index of each array after the first, n, then
/// m-1 and m for each 2d array. They fill R1..R5 and then R0.
std::vector<std::int64_t> register_initializers(const ArrayInput& input);

/// Throws std::invalid_argument when there are more initializers than registers.
X86State init_state(const ArrayInput& input);

/// Program predecoded for repeated execution: ARG scope resolved, no-op slots
/// removed and jump targets precomputed. Immutable, cheap to run many times.
class X86Decoded {
public:
    X86Decoded(const MachineProfile& profile, const Program& program);

    /// Runs in place on `regs`/`memory`. `memory` length is the instance's n.
    X86Halt run(std::array<std::int64_t, kX86Registers>& regs, std::span<std::int64_t> memory,
                std::int64_t loopcount_bound) const;

    /// Full-state variant used by execute().
    X86Halt run(X86State& state, std::int64_t loopcount_bound) const;

    std::size_t length() const { return length_; }
    /// Executable instructions after ARG removal.
    std::size_t executable() const { return ops_.size() - 1; }

private:
    X86Halt run_core(std::int64_t* regs, std::span<std::int64_t> memory, std::int64_t bound,
                     X86Flags& flags, std::int64_t& loopcount, std::size_t& halt_op) const;

    static constexpr int kSinkCell = kX86Registers + 4;
    static constexpr int kJumpHandlers = 36;
    static constexpr int kEndHandler = kJumpHandlers + 8;

    struct Op {
        std::uint8_t handler = 0;
        std::uint8_t dst_reg = 0;
        std::uint8_t src_reg = 0;
        std::uint8_t src_cell = 0;
        std::uint8_t dst_cell = 0;
        std::uint8_t dst_write = 0;  // kSinkCell when the destination is an immediate
        std::uint16_t target = 0;    // compact index for jumps
        std::uint16_t origin = 0;    // original program slot
        int scope_dest = 0;
    };
    std::vector<Op> ops_;
    std::uint16_t length_ = 0;
    int final_dest_ = 0;
};

/// Interprets `program` from ip=0 until it falls off the end or hits a bound.
X86Result execute(const MachineProfile& profile, const Program& program, X86State initial,
                  std::int64_t loopcount_bound);

}  // namespace stepstone
