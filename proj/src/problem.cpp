#include "stepstone/problem.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stepstone {

std::int64_t ArrayInstance::max_points() const {
    return (expected_scalar ? 1 : 0) + static_cast<std::int64_t>(expected_array.size());
}

void ArrayInstance::validate() const {
    if (!expected_scalar && !output_array) {
        throw std::invalid_argument("instance has neither expected scalar nor output array");
    }
    if (output_array) {
        if (*output_array >= input.arrays.size()) {
            throw std::invalid_argument("output array index out of range");
        }
        if (input.arrays[*output_array].values.size() != expected_array.size()) {
            throw std::invalid_argument("expected output length differs from output array");
        }
    } else if (!expected_array.empty()) {
        throw std::invalid_argument("expected array without output array");
    }
    if (time_bound < 1) throw std::invalid_argument("time bound must be >= 1");
}

std::int64_t max_points(const ProblemInstance& instance) {
    return std::visit([](const auto& i) { return i.max_points(); }, instance);
}

std::int64_t ProblemSet::max_points() const {
    std::int64_t total = 0;
    for (const auto& i : instances) total += stepstone::max_points(i);
    return total;
}

bool operator==(const ProblemSet& a, const ProblemSet& b) {
    const bool same_profile = (a.profile == nullptr && b.profile == nullptr) ||
                              (a.profile && b.profile && *a.profile == *b.profile);
    return same_profile && a.benchmark == b.benchmark && a.split == b.split && a.seed == b.seed &&
           a.instances == b.instances;
}

namespace {

void write_values(std::ostream& out, const std::vector<std::int64_t>& values) {
    for (const auto v : values) out << ' ' << v;
    out << '\n';
}

}  // namespace

void write_problem_set(std::ostream& out, const ProblemSet& set) {
    if (set.profile == nullptr) throw std::invalid_argument("problem set has no profile");
    out << "format: " << kProblemFormat << '\n'
        << "benchmark: " << set.benchmark << '\n'
        << "profile: " << set.profile->name << '\n'
        << "split: " << set.split << '\n'
        << "seed: " << set.seed << '\n'
        << "instances: " << set.instances.size() << '\n';
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
        out << "instance " << i << '\n';
        if (const auto* a = std::get_if<ArrayInstance>(&set.instances[i])) {
            out << "bound: " << a->time_bound << '\n';
            out << "scalars:";
            write_values(out, a->input.scalars);
            for (const auto& arr : a->input.arrays) {
                out << "array " << arr.row_size << ':';
                write_values(out, arr.values);
            }
            if (a->expected_scalar) out << "expect-scalar: " << *a->expected_scalar << '\n';
            if (a->output_array) {
                out << "expect-array " << *a->output_array << ':';
                write_values(out, a->expected_array);
            }
        } else {
            const auto& img = std::get<ImageInstance>(set.instances[i]);
            out << "bound: " << img.time_bound << '\n' << "image:\n" << format_image(img.target);
        }
        out << "end\n";
    }
}

namespace {

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            return true;
        }
        return false;
    }

    std::string require() {
        std::string line;
        if (!next(line)) fail("unexpected end of file");
        return line;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(number_, what); }

    std::string value(const std::string& line, std::string_view key) const {
        if (line.rfind(key, 0) != 0 || line.size() <= key.size() || line[key.size()] != ':') {
            fail("expected '" + std::string(key) + ":'");
        }
        std::string v = line.substr(key.size() + 1);
        const auto first = v.find_first_not_of(' ');
        return first == std::string::npos ? std::string{} : v.substr(first);
    }

    template <class Int>
    Int integer(std::string_view text) const {
        Int v{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail("invalid integer '" + std::string(text) + "'");
        }
        return v;
    }

    std::vector<std::int64_t> integers(const std::string& text) const {
        std::vector<std::int64_t> out;
        std::istringstream ss(text);
        std::string tok;
        while (ss >> tok) out.push_back(integer<std::int64_t>(tok));
        return out;
    }

    int number() const { return number_; }

private:
    std::istream& in_;
    int number_ = 0;
};

}  // namespace

ProblemSet read_problem_set(std::istream& in) {
    Reader r(in);
    ProblemSet set;
    if (r.value(r.require(), "format") != kProblemFormat) r.fail("unsupported problem-set format");
    set.benchmark = r.value(r.require(), "benchmark");
    try {
        set.profile = &profile_by_name(r.value(r.require(), "profile"));
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    set.split = r.value(r.require(), "split");
    set.seed = r.integer<std::uint64_t>(r.value(r.require(), "seed"));
    const auto count = r.integer<std::size_t>(r.value(r.require(), "instances"));
    set.instances.reserve(count);

    for (std::size_t i = 0; i < count; ++i) {
        if (r.require() != "instance " + std::to_string(i)) {
            r.fail("expected 'instance " + std::to_string(i) + "'");
        }
        const auto bound = r.integer<std::int64_t>(r.value(r.require(), "bound"));
        std::string line = r.require();
        if (line == "image:") {
            std::string rows;
            for (int y = 0; y < kImageHeight; ++y) rows += r.require() + '\n';
            ImageInstance img;
            try {
                img.target = parse_image(rows);
            } catch (const ParseError& e) {
                r.fail(e.what());
            }
            img.time_bound = bound;
            set.instances.emplace_back(img);
            if (r.require() != "end") r.fail("expected 'end'");
            continue;
        }
        ArrayInstance a;
        a.time_bound = bound;
        a.input.scalars = r.integers(r.value(line, "scalars"));
        while (true) {
            line = r.require();
            if (line == "end") break;
            if (line.rfind("array ", 0) == 0) {
                const auto colon = line.find(':');
                if (colon == std::string::npos) r.fail("expected 'array <row_size>:'");
                InputArray arr;
                arr.row_size = r.integer<std::size_t>(std::string_view(line).substr(6, colon - 6));
                arr.values = r.integers(line.substr(colon + 1));
                a.input.arrays.push_back(std::move(arr));
            } else if (line.rfind("expect-scalar", 0) == 0) {
                a.expected_scalar = r.integer<std::int64_t>(r.value(line, "expect-scalar"));
            } else if (line.rfind("expect-array ", 0) == 0) {
                const auto colon = line.find(':');
                if (colon == std::string::npos) r.fail("expected 'expect-array <index>:'");
                a.output_array = r.integer<std::size_t>(std::string_view(line).substr(13, colon - 13));
                a.expected_array = r.integers(line.substr(colon + 1));
            } else {
                r.fail("unexpected line '" + line + "'");
            }
        }
        try {
            a.validate();
        } catch (const std::invalid_argument& e) {
            r.fail(e.what());
        }
        set.instances.emplace_back(std::move(a));
    }
    std::string extra;
    if (r.next(extra)) r.fail("trailing content after last instance");
    return set;
}

ProblemSet load_problem_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem set '" + path + "'");
    return read_problem_set(in);
}

void save_problem_set(const std::string& path, const ProblemSet& set) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write problem set '" + path + "'");
    write_problem_set(out, set);
}

}  // namespace stepstone
