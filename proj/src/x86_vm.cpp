#include "stepstone/x86_vm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stepstone {

namespace {

constexpr int kImmediates = 4;

bool is_jump(X86Op op) {
    return op == X86Op::jmp || op == X86Op::jz || op == X86Op::jnz || op == X86Op::jg;
}

// Index into the interpreter's cell file: registers, then immediates.
std::uint8_t cell_of(const OperandRef& ref) {
    if (ref.kind == OperandKind::imm) return static_cast<std::uint8_t>(kX86Registers + ref.value);
    return static_cast<std::uint8_t>(ref.reg);
}

}  // namespace

OperandRef classify_operand(const MachineProfile& profile, int operand) {
    if (operand < 0 || operand >= profile.operands) {
        throw std::out_of_range("operand index " + std::to_string(operand) + " out of range");
    }
    if (operand < kX86Registers) return {OperandKind::reg, operand, 0};
    int rest = operand - kX86Registers;
    if (profile.has_memory) {
        if (rest < kX86Registers) return {OperandKind::mem, rest, 0};
        rest -= kX86Registers;
    }
    return {OperandKind::imm, 0, rest % kImmediates};
}

std::optional<std::int64_t> read_operand(const MachineProfile& profile, int operand,
                                         const X86State& state) {
    const OperandRef ref = classify_operand(profile, operand);
    switch (ref.kind) {
        case OperandKind::reg:
            return state.regs[ref.reg];
        case OperandKind::imm:
            return ref.value;
        case OperandKind::mem: {
            const std::int64_t addr = state.regs[ref.reg];
            if (addr < 0 || static_cast<std::uint64_t>(addr) >= state.memory.size()) {
                return std::nullopt;
            }
            return state.memory[static_cast<std::size_t>(addr)];
        }
    }
    return std::nullopt;
}

int jump_target(const MachineProfile& profile, int operand) {
    return operand * (profile.length / profile.operands);
}

std::size_t ArrayInput::memory_size() const {
    std::size_t n = 0;
    for (const auto& a : arrays) n += a.values.size();
    return n;
}

std::size_t ArrayInput::array_offset(std::size_t i) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < i; ++k) off += arrays[k].values.size();
    return off;
}

std::vector<std::int64_t> register_initializers(const ArrayInput& input) {
    std::vector<std::int64_t> init(input.scalars.begin(), input.scalars.end());
    std::int64_t offset = 0;
    for (const auto& a : input.arrays) {
        offset += static_cast<std::int64_t>(a.values.size());
        init.push_back(offset - 1);
    }
    for (std::size_t i = 1; i < input.arrays.size(); ++i) {
        init.push_back(static_cast<std::int64_t>(input.array_offset(i)));
    }
    init.push_back(static_cast<std::int64_t>(input.memory_size()));
    for (const auto& a : input.arrays) {
        if (a.row_size != 0) {
            init.push_back(static_cast<std::int64_t>(a.row_size) - 1);
            init.push_back(static_cast<std::int64_t>(a.row_size));
        }
    }
    return init;
}

X86State init_state(const ArrayInput& input) {
    const auto init = register_initializers(input);
    if (init.size() > static_cast<std::size_t>(kX86Registers)) {
        throw std::invalid_argument("input layout needs " + std::to_string(init.size()) +
                                    " registers, only " + std::to_string(kX86Registers) +
                                    " available");
    }
    X86State state;
    for (std::size_t i = 0; i < init.size(); ++i) {
        state.regs[(i + 1) % kX86Registers] = init[i];
    }
    state.memory.reserve(input.memory_size());
    for (const auto& a : input.arrays) {
        state.memory.insert(state.memory.end(), a.values.begin(), a.values.end());
    }
    return state;
}

X86Decoded::X86Decoded(const MachineProfile& profile, const Program& program)
    : length_(static_cast<std::uint16_t>(program.size())) {
    if (profile.isa != Isa::x86 || !program.valid_for(profile)) {
        throw std::invalid_argument("program does not match an x86 profile");
    }
    // compact[i]: index into ops_ of the first executable slot at or after i.
    std::vector<std::uint16_t> compact(program.size() + 1);
    std::uint16_t count = 0;
    for (std::size_t i = 0; i < program.size(); ++i) {
        compact[i] = count;
        if (static_cast<X86Op>(program[i].opcode) != X86Op::arg) ++count;
    }
    compact[program.size()] = count;
    for (std::size_t i = program.size(); i-- > 0;) {
        if (static_cast<X86Op>(program[i].opcode) == X86Op::arg) compact[i] = compact[i + 1];
    }

    int dest = 0;
    ops_.reserve(count);
    for (std::size_t i = 0; i < program.size(); ++i) {
        const Instruction ins = program[i];
        const auto code = static_cast<X86Op>(ins.opcode);
        if (code == X86Op::arg) {
            dest = ins.operand;
            continue;
        }
        Op op{};
        op.origin = static_cast<std::uint16_t>(i);
        op.scope_dest = dest;
        const OperandRef src = classify_operand(profile, ins.operand);
        // INC acts on its own operand; everything else writes the ARG destination.
        const OperandRef dst = code == X86Op::inc ? src : classify_operand(profile, dest);
        op.src_reg = static_cast<std::uint8_t>(src.reg);
        op.src_cell = cell_of(src);
        op.dst_reg = static_cast<std::uint8_t>(dst.reg);
        op.dst_cell = cell_of(dst);
        op.dst_write = dst.kind == OperandKind::reg ? op.dst_cell : kSinkCell;
        if (is_jump(code)) {
            const int target = jump_target(profile, ins.operand);
            const bool backward = target <= static_cast<int>(i);
            op.target = target >= static_cast<int>(program.size())
                            ? count
                            : compact[static_cast<std::size_t>(target)];
            op.handler = static_cast<std::uint8_t>(
                kJumpHandlers + 2 * (ins.opcode - static_cast<int>(X86Op::jmp)) + (backward ? 1 : 0));
        } else {
            op.handler = static_cast<std::uint8_t>(4 * ins.opcode +
                                                   (src.kind == OperandKind::mem ? 1 : 0) +
                                                   (dst.kind == OperandKind::mem ? 2 : 0));
        }
        ops_.push_back(op);
    }
    Op end{};
    end.handler = kEndHandler;
    end.origin = length_;
    end.scope_dest = dest;
    ops_.push_back(end);
    final_dest_ = dest;
}

// Direct-threaded interpreter. Each Op carries a handler index specialized by
// opcode and by whether its source and destination live in memory.
X86Halt X86Decoded::run_core(std::int64_t* regs, std::span<std::int64_t> memory,
                             std::int64_t bound, X86Flags& flags, std::int64_t& loopcount,
                             std::size_t& halt_op) const {
    static const void* const table[] = {
#define VARIANTS(NAME) &&NAME##_rr, &&NAME##_mr, &&NAME##_rm, &&NAME##_mm
        VARIANTS(mov), VARIANTS(add), VARIANTS(sub), VARIANTS(imul), VARIANTS(inc),
        VARIANTS(cmp), VARIANTS(test), VARIANTS(shr), VARIANTS(shl),
#undef VARIANTS
        &&jmp_f, &&jmp_b, &&jz_f, &&jz_b, &&jnz_f, &&jnz_b, &&jg_f, &&jg_b, &&end,
    };

    const std::uint64_t n = memory.size();
    std::int64_t* const mem = memory.data();
    const Op* const ops = ops_.data();
    const Op* op = ops;
    // ZF and SF are derived from the last flag-setting result on demand.
    std::int64_t fr = flags.zero ? 0 : (flags.sign ? -1 : 1);
    bool of = flags.overflow;
    std::int64_t loops = loopcount;
    X86Halt halt = X86Halt::end_of_program;
    std::int64_t r = 0;

    // Registers, then the immediates 0..3, then a sink for discarded writes.
    std::int64_t cells[kSinkCell + 1] = {regs[0], regs[1], regs[2], regs[3], regs[4], regs[5],
                                         0, 1, 2, 3, 0};

    // Two consecutive taken backjumps from the same op with identical registers
    // and flags and no memory destination in between mean the machine cycles
    // until the bound; the final state is the current one.
    const Op* last_back = nullptr;
    bool mem_touched = false;
    std::int64_t seen[kX86Registers] = {};
    bool seen_flags[3] = {};
    auto repeats = [&] {
        return std::equal(cells, cells + kX86Registers, seen) && seen_flags[0] == (fr == 0) &&
               seen_flags[1] == (fr < 0) && seen_flags[2] == of;
    };
    auto remember = [&](const Op* at) {
        last_back = at;
        mem_touched = false;
        std::copy(cells, cells + kX86Registers, seen);
        seen_flags[0] = fr == 0;
        seen_flags[1] = fr < 0;
        seen_flags[2] = of;
    };

#define DISPATCH() goto* table[op->handler]
#define NEXT() \
    ++op;      \
    DISPATCH()
#define SRC_R [[maybe_unused]] const std::int64_t src = cells[op->src_cell];
#define SRC_M                                                              \
    const auto sa = static_cast<std::uint64_t>(cells[op->src_reg]);        \
    if (sa >= n) goto violation;                                           \
    [[maybe_unused]] const std::int64_t src = mem[sa];
#define DST_R                                   \
    std::int64_t* const dl = &cells[op->dst_write]; \
    [[maybe_unused]] const std::int64_t dst = cells[op->dst_cell];
#define DST_M                                                              \
    const auto da = static_cast<std::uint64_t>(cells[op->dst_reg]);        \
    if (da >= n) goto violation;                                           \
    std::int64_t* const dl = &mem[da];                                     \
    mem_touched = true;                                                    \
    [[maybe_unused]] const std::int64_t dst = *dl;
#define HANDLERS(NAME, BODY)          \
    NAME##_rr : {                     \
        SRC_R DST_R BODY NEXT();      \
    }                                 \
    NAME##_mr : {                     \
        SRC_M DST_R BODY NEXT();      \
    }                                 \
    NAME##_rm : {                     \
        SRC_R DST_M BODY NEXT();      \
    }                                 \
    NAME##_mm : {                     \
        SRC_M DST_M BODY NEXT();      \
    }
#define FLAGS(OVERFLOW) \
    of = (OVERFLOW);    \
    fr = r;
#define BRANCH(NAME, COND)                                      \
    NAME##_f : {                                                \
        if (COND) {                                             \
            op = ops + op->target;                              \
            DISPATCH();                                         \
        }                                                       \
        NEXT();                                                 \
    }                                                           \
    NAME##_b : {                                                \
        if (COND) {                                             \
            if (loops >= bound || (op == last_back && !mem_touched && repeats())) { \
                loops = bound;                                  \
                halt = X86Halt::loopcount_exceeded;             \
                goto done;                                      \
            }                                                   \
            remember(op);                                       \
            ++loops;                                            \
            op = ops + op->target;                              \
            DISPATCH();                                         \
        }                                                       \
        NEXT();                                                 \
    }

    DISPATCH();

    HANDLERS(mov, *dl = src;)
    HANDLERS(add, FLAGS(__builtin_add_overflow(dst, src, &r)) *dl = r;)
    HANDLERS(sub, FLAGS(__builtin_sub_overflow(dst, src, &r)) *dl = r;)
    HANDLERS(imul, FLAGS(__builtin_mul_overflow(dst, src, &r)) *dl = r;)
    HANDLERS(inc, FLAGS(__builtin_add_overflow(dst, std::int64_t{1}, &r)) *dl = r;)
    HANDLERS(cmp, FLAGS(__builtin_sub_overflow(dst, src, &r)))
    HANDLERS(test, r = dst & src; FLAGS(false))
    HANDLERS(shr,
             r = static_cast<std::int64_t>(static_cast<std::uint64_t>(dst) >>
                                           (static_cast<unsigned>(src) & 63U));
             FLAGS(false) *dl = r;)
    HANDLERS(shl,
             r = static_cast<std::int64_t>(static_cast<std::uint64_t>(dst)
                                           << (static_cast<unsigned>(src) & 63U));
             FLAGS(false) *dl = r;)
    BRANCH(jmp, true)
    BRANCH(jz, fr == 0)
    BRANCH(jnz, fr != 0)
    BRANCH(jg, fr != 0 && (fr < 0) == of)

violation:
    halt = X86Halt::memory_violation;
    goto done;
end:
done:
#undef DISPATCH
#undef NEXT
#undef SRC_R
#undef SRC_M
#undef DST_R
#undef DST_M
#undef HANDLERS
#undef FLAGS
#undef BRANCH
    for (int i = 0; i < kX86Registers; ++i) regs[i] = cells[i];
    flags = {fr == 0, fr < 0, of};
    loopcount = loops;
    halt_op = static_cast<std::size_t>(op - ops);
    return halt;
}

X86Halt X86Decoded::run(std::array<std::int64_t, kX86Registers>& regs,
                        std::span<std::int64_t> memory, std::int64_t loopcount_bound) const {
    X86Flags flags;
    std::int64_t loops = 0;
    std::size_t halt_op = 0;
    return run_core(regs.data(), memory, loopcount_bound, flags, loops, halt_op);
}

X86Halt X86Decoded::run(X86State& state, std::int64_t loopcount_bound) const {
    std::size_t halt_op = 0;
    const X86Halt halt = run_core(state.regs.data(), state.memory, loopcount_bound, state.flags,
                                  state.loopcount_used, halt_op);
    if (halt_op + 1 < ops_.size()) {
        state.ip = ops_[halt_op].origin;
        state.dest = ops_[halt_op].scope_dest;
    } else {
        state.ip = length_;
        state.dest = final_dest_;
    }
    return halt;
}

X86Result execute(const MachineProfile& profile, const Program& program, X86State initial,
                  std::int64_t loopcount_bound) {
    const X86Decoded decoded(profile, program);
    X86Result result{std::move(initial), X86Halt::end_of_program};
    result.halt = decoded.run(result.state, loopcount_bound);
    return result;
}

}  // namespace stepstone
