#include "stepstone/tis_vm.hpp"

#include <algorithm>
#include <stdexcept>

namespace stepstone {

namespace {

int clamp_value(int v) { return std::clamp(v, -kTisValueLimit, kTisValueLimit); }

}  // namespace

int count_matches(const Image& a, const Image& b) {
    int matches = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) matches += a.pixels[i] == b.pixels[i];
    return matches;
}

Image parse_image(std::string_view text) {
    Image image;
    int row = 0;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (row >= kImageHeight) throw ParseError(line_no, "more than 18 image rows");
        if (line.size() != static_cast<std::size_t>(kImageWidth)) {
            throw ParseError(line_no, "image row must have 30 digits");
        }
        for (int x = 0; x < kImageWidth; ++x) {
            const char c = line[static_cast<std::size_t>(x)];
            if (c < '0' || c > '0' + kMaxColor) throw ParseError(line_no, "color must be 0-4");
            image.at(x, row) = static_cast<std::uint8_t>(c - '0');
        }
        ++row;
        if (end == text.size()) break;
    }
    if (row != kImageHeight) throw ParseError(line_no, "expected 18 image rows");
    return image;
}

std::string format_image(const Image& image) {
    std::string out;
    out.reserve(kImageHeight * (kImageWidth + 1));
    for (int y = 0; y < kImageHeight; ++y) {
        for (int x = 0; x < kImageWidth; ++x) out.push_back(static_cast<char>('0' + image.at(x, y)));
        out.push_back('\n');
    }
    return out;
}

Image solid_image(std::uint8_t color) {
    Image image;
    image.pixels.fill(color);
    return image;
}

Image checkerboard_image() {
    Image image;
    for (int y = 0; y < kImageHeight; ++y) {
        for (int x = 0; x < kImageWidth; ++x) image.at(x, y) = (x + y) % 2 == 0 ? 3 : 0;
    }
    return image;
}

int tis_immediate(const MachineProfile& profile, int operand) {
    return operand - profile.operands / 2;
}

int tis_jump_target(const MachineProfile& profile, int operand) {
    return operand * profile.length / profile.operands;
}

// Out-of-grid cursors and invalid colors are dropped; the cursor still advances.
bool imager_send(TisImager& imager, Image& canvas, int value) {
    if (value < 0) {
        imager.phase = TisImager::Phase::expect_x;
        return false;
    }
    switch (imager.phase) {
        case TisImager::Phase::expect_x:
            imager.x = value;
            imager.phase = TisImager::Phase::expect_y;
            return false;
        case TisImager::Phase::expect_y:
            imager.y = value;
            imager.phase = TisImager::Phase::expect_color;
            return false;
        case TisImager::Phase::expect_color: {
            const int x = imager.x++;
            if (x >= kImageWidth || imager.y >= kImageHeight || value > kMaxColor) return false;
            canvas.at(x, imager.y) = static_cast<std::uint8_t>(value);
            return true;
        }
    }
    return false;
}

TisResult tis_execute(const MachineProfile& profile, const Program& program, const Image& target,
                      std::int64_t cycle_bound, const TisTraceHook& hook) {
    if (profile.isa != Isa::tis100 || !program.valid_for(profile)) {
        throw std::invalid_argument("program does not match a TIS-100 profile");
    }
    TisResult result;
    TisState& st = result.state;
    int matches = count_matches(st.canvas, target);
    st.best_match = matches;
    if (matches == kImagePixels) {
        result.solved = true;
        result.score = matches;
        return result;
    }
    const std::size_t length = program.size();

    while (true) {
        const Instruction ins = program[st.ip];
        const auto op = static_cast<TisOp>(ins.opcode);
        const int cost = (op == TisOp::mov_down || op == TisOp::mov_acc_down) ? 2 : 1;
        if (st.cycles_used + cost > cycle_bound) break;
        st.cycles_used += cost;
        if (hook) hook(st.ip, cost);

        std::size_t next = st.ip + 1 == length ? 0 : st.ip + 1;
        int sent = 0;
        bool send = false;
        switch (op) {
            case TisOp::sav: st.bak = st.acc; break;
            case TisOp::swp: std::swap(st.acc, st.bak); break;
            case TisOp::mov_acc_down: sent = st.acc; send = true; break;
            case TisOp::mov_down: sent = tis_immediate(profile, ins.operand); send = true; break;
            case TisOp::mov_acc: st.acc = clamp_value(tis_immediate(profile, ins.operand)); break;
            case TisOp::neg: st.acc = -st.acc; break;
            case TisOp::add: st.acc = clamp_value(st.acc + tis_immediate(profile, ins.operand)); break;
            case TisOp::add_acc: st.acc = clamp_value(st.acc + st.acc); break;
            case TisOp::sub: st.acc = clamp_value(st.acc - tis_immediate(profile, ins.operand)); break;
            case TisOp::sub_acc: st.acc = 0; break;
            case TisOp::nop: break;
            case TisOp::jmp:
            case TisOp::jez:
            case TisOp::jnz:
            case TisOp::jlz:
            case TisOp::jgz: {
                const bool taken = op == TisOp::jmp || (op == TisOp::jez && st.acc == 0) ||
                                   (op == TisOp::jnz && st.acc != 0) ||
                                   (op == TisOp::jlz && st.acc < 0) ||
                                   (op == TisOp::jgz && st.acc > 0);
                if (taken) next = static_cast<std::size_t>(tis_jump_target(profile, ins.operand));
                break;
            }
        }

        if (send) {
            const int x = st.imager.x;
            const int y = st.imager.y;
            const bool in_grid = st.imager.phase == TisImager::Phase::expect_color && x >= 0 &&
                                 x < kImageWidth && y >= 0 && y < kImageHeight;
            const bool before = in_grid && st.canvas.at(x, y) == target.at(x, y);
            if (imager_send(st.imager, st.canvas, sent)) {
                const bool after = st.canvas.at(x, y) == target.at(x, y);
                matches += static_cast<int>(after) - static_cast<int>(before);
                if (matches > st.best_match) st.best_match = matches;
                if (matches == kImagePixels) {
                    st.ip = next;
                    result.solved = true;
                    break;
                }
            }
        }
        st.ip = next;
    }

    result.score = st.best_match;
    result.cycles_used = st.cycles_used;
    return result;
}

}  // namespace stepstone
