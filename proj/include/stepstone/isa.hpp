// Generic single-operand instruction format shared by every machine profile.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stepstone/rng.hpp"

namespace stepstone {

enum class Isa : std::uint8_t { x86, tis100 };

/// One language instantiation: program length, opcode/operand counts and the
/// distinguished no-effect opcode used by the simplicity bonus.
struct MachineProfile {
    std::string_view name;
    Isa isa;
    int length;     // S
    int opcodes;    // O
    int operands;   // P
    int registers;  // R (0 for TIS-100)
    int noop_opcode;
    bool has_memory;

    friend bool operator==(const MachineProfile& a, const MachineProfile& b) {
        return a.name == b.name;
    }
};

const MachineProfile& x86_memory_profile();
const MachineProfile& x86_scalar_profile();
/// Valid operand counts are 21, 101, 401 and 1999.
const MachineProfile& tis100_profile(int operands);

std::span<const MachineProfile> all_profiles();

/// Throws std::invalid_argument for unknown names.
const MachineProfile& profile_by_name(std::string_view name);

struct Instruction {
    std::uint8_t opcode = 0;
    std::uint16_t operand = 0;

    /// Range-checked construction; throws std::out_of_range.
    static Instruction make(const MachineProfile& profile, int opcode, int operand);

    friend bool operator==(Instruction, Instruction) = default;
};

/// Fixed-length instruction sequence. Value type; S <= kMaxLength.
class Program {
public:
    static constexpr std::size_t kMaxLength = 32;

    Program() = default;
    /// Throws std::invalid_argument on a wrong length or out-of-range slot.
    Program(const MachineProfile& profile, std::span<const Instruction> instructions);

    static Program filled(const MachineProfile& profile, Instruction ins);

    std::size_t size() const { return size_; }
    Instruction operator[](std::size_t i) const { return slots_[i]; }
    std::span<const Instruction> instructions() const { return {slots_.data(), size_}; }

    Program with_instruction(std::size_t index, Instruction ins) const;
    Program with_swapped(std::size_t i, std::size_t j) const;

    /// True iff the length is S and every slot is in range for the profile.
    bool valid_for(const MachineProfile& profile) const;

    friend bool operator==(const Program& a, const Program& b);

private:
    std::array<Instruction, kMaxLength> slots_{};
    std::size_t size_ = 0;
};

Instruction random_instruction(const MachineProfile& profile, Rng& rng);
Program random_program(const MachineProfile& profile, Rng& rng);

/// Number of slots holding the profile's distinguished opcode N.
int count_noops(const Program& program, const MachineProfile& profile);

/// Size as reported for solutions: instructions that are not N.
inline int program_size(const Program& program, const MachineProfile& profile) {
    return static_cast<int>(program.size()) - count_noops(program, profile);
}

std::string_view mnemonic(const MachineProfile& profile, int opcode);

/// Throws std::invalid_argument for unknown mnemonics.
int opcode_from_mnemonic(const MachineProfile& profile, std::string_view text);

/// Human-readable resolved meaning of an instruction's operand, e.g. "[R2]",
/// "$3" or "-> 14".
std::string describe_operand(const MachineProfile& profile, Instruction ins);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Canonical text: "profile: <name>" then S lines "<idx>: <MNEMONIC> <operand>",
/// each followed by a "# <resolved operand>" comment.
std::string serialize(const Program& program, const MachineProfile& profile);

/// Parses the canonical format. Comments and blank lines are ignored. The
/// profile header must match `profile`. Throws ParseError.
Program deserialize(std::string_view text, const MachineProfile& profile);

/// As deserialize, taking the profile from the header line.
std::pair<const MachineProfile*, Program> deserialize_any(std::string_view text);

}  // namespace stepstone
