#include "stepstone/isa.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "stepstone/tis_vm.hpp"
#include "stepstone/x86_vm.hpp"

namespace stepstone {

namespace {

constexpr std::array<std::string_view, 14> kX86Mnemonics = {
    "MOV", "ADD", "SUB", "IMUL", "INC", "CMP", "TEST", "SHR", "SHL", "JMP", "JZ", "JNZ", "JG", "ARG"};

constexpr std::array<std::string_view, 16> kTisMnemonics = {
    "SAV", "SWP", "MOVAD", "MOVD", "MOVA", "NEG", "ADD", "ADDA",
    "SUB", "SUBA", "NOP", "JMP", "JEZ", "JNZ", "JLZ", "JGZ"};

constexpr int kX86Arg = 13;
constexpr int kTisNop = 10;

constexpr std::array<MachineProfile, 6> kProfiles = {{
    {"x86-mem", Isa::x86, 32, 14, 16, 6, kX86Arg, true},
    {"x86-scalar", Isa::x86, 32, 14, 10, 6, kX86Arg, false},
    {"tis100-p21", Isa::tis100, 15, 16, 21, 0, kTisNop, false},
    {"tis100-p101", Isa::tis100, 15, 16, 101, 0, kTisNop, false},
    {"tis100-p401", Isa::tis100, 15, 16, 401, 0, kTisNop, false},
    {"tis100-p1999", Isa::tis100, 15, 16, 1999, 0, kTisNop, false},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view s, int& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool is_jump(const MachineProfile& profile, int opcode) {
    if (profile.isa == Isa::x86) {
        const auto op = static_cast<X86Op>(opcode);
        return op == X86Op::jmp || op == X86Op::jz || op == X86Op::jnz || op == X86Op::jg;
    }
    return opcode >= static_cast<int>(TisOp::jmp);
}

}  // namespace

const MachineProfile& x86_memory_profile() { return kProfiles[0]; }
const MachineProfile& x86_scalar_profile() { return kProfiles[1]; }

const MachineProfile& tis100_profile(int operands) {
    for (const auto& p : kProfiles) {
        if (p.isa == Isa::tis100 && p.operands == operands) return p;
    }
    throw std::invalid_argument("no TIS-100 profile with P=" + std::to_string(operands));
}

std::span<const MachineProfile> all_profiles() { return kProfiles; }

const MachineProfile& profile_by_name(std::string_view name) {
    for (const auto& p : kProfiles) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown profile '" + std::string(name) + "'");
}

Instruction Instruction::make(const MachineProfile& profile, int opcode, int operand) {
    if (opcode < 0 || opcode >= profile.opcodes) {
        throw std::out_of_range("opcode " + std::to_string(opcode) + " out of range for " +
                                std::string(profile.name));
    }
    if (operand < 0 || operand >= profile.operands) {
        throw std::out_of_range("operand " + std::to_string(operand) + " out of range for " +
                                std::string(profile.name));
    }
    return {static_cast<std::uint8_t>(opcode), static_cast<std::uint16_t>(operand)};
}

Program::Program(const MachineProfile& profile, std::span<const Instruction> instructions) {
    if (instructions.size() != static_cast<std::size_t>(profile.length)) {
        throw std::invalid_argument("program has " + std::to_string(instructions.size()) +
                                    " instructions, profile " + std::string(profile.name) +
                                    " needs " + std::to_string(profile.length));
    }
    for (const Instruction ins : instructions) {
        if (ins.opcode >= profile.opcodes || ins.operand >= profile.operands) {
            throw std::invalid_argument("instruction out of range for " + std::string(profile.name));
        }
    }
    std::copy(instructions.begin(), instructions.end(), slots_.begin());
    size_ = instructions.size();
}

Program Program::filled(const MachineProfile& profile, Instruction ins) {
    std::array<Instruction, kMaxLength> slots{};
    std::fill_n(slots.begin(), profile.length, ins);
    return Program(profile, std::span(slots.data(), static_cast<std::size_t>(profile.length)));
}

Program Program::with_instruction(std::size_t index, Instruction ins) const {
    Program p = *this;
    p.slots_.at(index) = ins;
    return p;
}

Program Program::with_swapped(std::size_t i, std::size_t j) const {
    Program p = *this;
    std::swap(p.slots_.at(i), p.slots_.at(j));
    return p;
}

bool Program::valid_for(const MachineProfile& profile) const {
    if (size_ != static_cast<std::size_t>(profile.length)) return false;
    return std::all_of(slots_.begin(), slots_.begin() + static_cast<std::ptrdiff_t>(size_),
                       [&](Instruction ins) {
                           return ins.opcode < profile.opcodes && ins.operand < profile.operands;
                       });
}

bool operator==(const Program& a, const Program& b) {
    return a.size_ == b.size_ &&
           std::equal(a.slots_.begin(), a.slots_.begin() + static_cast<std::ptrdiff_t>(a.size_),
                      b.slots_.begin());
}

Instruction random_instruction(const MachineProfile& profile, Rng& rng) {
    const auto opcode = uniform_index(rng, static_cast<std::size_t>(profile.opcodes));
    const auto operand = uniform_index(rng, static_cast<std::size_t>(profile.operands));
    return {static_cast<std::uint8_t>(opcode), static_cast<std::uint16_t>(operand)};
}

Program random_program(const MachineProfile& profile, Rng& rng) {
    std::array<Instruction, Program::kMaxLength> slots{};
    for (int i = 0; i < profile.length; ++i) slots[static_cast<std::size_t>(i)] = random_instruction(profile, rng);
    return Program(profile, std::span(slots.data(), static_cast<std::size_t>(profile.length)));
}

int count_noops(const Program& program, const MachineProfile& profile) {
    const auto ins = program.instructions();
    return static_cast<int>(std::count_if(ins.begin(), ins.end(), [&](Instruction i) {
        return i.opcode == profile.noop_opcode;
    }));
}

std::string_view mnemonic(const MachineProfile& profile, int opcode) {
    if (profile.isa == Isa::x86) return kX86Mnemonics.at(static_cast<std::size_t>(opcode));
    return kTisMnemonics.at(static_cast<std::size_t>(opcode));
}

int opcode_from_mnemonic(const MachineProfile& profile, std::string_view text) {
    const auto table = profile.isa == Isa::x86 ? std::span<const std::string_view>(kX86Mnemonics)
                                               : std::span<const std::string_view>(kTisMnemonics);
    const auto it = std::find(table.begin(), table.end(), text);
    if (it == table.end()) throw std::invalid_argument("unknown mnemonic '" + std::string(text) + "'");
    return static_cast<int>(it - table.begin());
}

std::string describe_operand(const MachineProfile& profile, Instruction ins) {
    if (is_jump(profile, ins.opcode)) {
        const int target = profile.isa == Isa::x86 ? jump_target(profile, ins.operand)
                                                   : tis_jump_target(profile, ins.operand);
        return "-> " + std::to_string(target);
    }
    if (profile.isa == Isa::tis100) {
        const auto op = static_cast<TisOp>(ins.opcode);
        if (op == TisOp::mov_down || op == TisOp::mov_acc || op == TisOp::add ||
            op == TisOp::sub) {
            return std::to_string(tis_immediate(profile, ins.operand));
        }
        return "-";
    }
    const OperandRef ref = classify_operand(profile, ins.operand);
    switch (ref.kind) {
        case OperandKind::reg: return "R" + std::to_string(ref.reg);
        case OperandKind::mem: return "[R" + std::to_string(ref.reg) + "]";
        case OperandKind::imm: return "$" + std::to_string(ref.value);
    }
    return {};
}

std::string serialize(const Program& program, const MachineProfile& profile) {
    std::ostringstream out;
    out << "profile: " << profile.name << '\n';
    for (std::size_t i = 0; i < program.size(); ++i) {
        const Instruction ins = program[i];
        out << i << ": " << mnemonic(profile, ins.opcode) << ' ' << ins.operand << "  # "
            << describe_operand(profile, ins) << '\n';
    }
    return out.str();
}

namespace {

struct Line {
    int number;
    std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) lines.push_back({number, line});
    }
    return lines;
}

Program parse_body(const std::vector<Line>& lines, const MachineProfile& profile) {
    const std::size_t expected = static_cast<std::size_t>(profile.length);
    if (lines.size() - 1 != expected) {
        const int at = lines.size() - 1 > expected ? lines[expected + 1].number : lines.back().number;
        throw ParseError(at, "expected " + std::to_string(expected) + " instructions, found " +
                                 std::to_string(lines.size() - 1));
    }
    std::array<Instruction, Program::kMaxLength> slots{};
    for (std::size_t i = 0; i < expected; ++i) {
        const Line& line = lines[i + 1];
        const auto colon = line.text.find(':');
        int index = -1;
        if (colon == std::string_view::npos || !parse_int(line.text.substr(0, colon), index)) {
            throw ParseError(line.number, "expected '<idx>: <MNEMONIC> <operand>'");
        }
        if (index != static_cast<int>(i)) {
            throw ParseError(line.number, "instruction index " + std::to_string(index) +
                                              ", expected " + std::to_string(i));
        }
        const std::string_view rest = trim(line.text.substr(colon + 1));
        const auto space = rest.find_first_of(" \t");
        if (space == std::string_view::npos) throw ParseError(line.number, "missing operand");
        const std::string_view name = rest.substr(0, space);
        int opcode = 0;
        try {
            opcode = opcode_from_mnemonic(profile, name);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line.number, e.what());
        }
        int operand = 0;
        if (!parse_int(rest.substr(space + 1), operand)) {
            throw ParseError(line.number, "operand must be an integer index");
        }
        if (operand < 0 || operand >= profile.operands) {
            throw ParseError(line.number, "operand " + std::to_string(operand) + " out of range [0," +
                                              std::to_string(profile.operands) + ")");
        }
        slots[i] = {static_cast<std::uint8_t>(opcode), static_cast<std::uint16_t>(operand)};
    }
    return Program(profile, std::span(slots.data(), expected));
}

const MachineProfile& parse_header(const std::vector<Line>& lines) {
    if (lines.empty()) throw ParseError(1, "empty program text");
    const Line& head = lines.front();
    constexpr std::string_view kPrefix = "profile:";
    if (head.text.substr(0, kPrefix.size()) != kPrefix) {
        throw ParseError(head.number, "expected 'profile: <name>' header");
    }
    try {
        return profile_by_name(trim(head.text.substr(kPrefix.size())));
    } catch (const std::invalid_argument& e) {
        throw ParseError(head.number, e.what());
    }
}

}  // namespace

Program deserialize(std::string_view text, const MachineProfile& profile) {
    const auto lines = content_lines(text);
    const MachineProfile& declared = parse_header(lines);
    if (declared != profile) {
        throw ParseError(lines.front().number, "program is for profile " + std::string(declared.name) +
                                                   ", expected " + std::string(profile.name));
    }
    return parse_body(lines, profile);
}

std::pair<const MachineProfile*, Program> deserialize_any(std::string_view text) {
    const auto lines = content_lines(text);
    const MachineProfile& profile = parse_header(lines);
    return {&profile, parse_body(lines, profile)};
}

}  // namespace stepstone
