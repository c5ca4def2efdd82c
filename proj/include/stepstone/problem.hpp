// Problem instances and the versioned problem-set text format.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stepstone/isa.hpp"
#include "stepstone/tis_vm.hpp"
#include "stepstone/x86_vm.hpp"

namespace stepstone {

/// x86 instance: input layout, expected scalar in R0 and/or expected contents
/// of one array of the memory block (in-place input or preallocated space).
struct ArrayInstance {
    ArrayInput input;
    std::optional<std::int64_t> expected_scalar;
    std::optional<std::size_t> output_array;
    std::vector<std::int64_t> expected_array;
    std::int64_t time_bound = 1;  // loopcount

    std::int64_t max_points() const;
    /// Throws std::invalid_argument if the instance is malformed.
    void validate() const;

    friend bool operator==(const ArrayInstance&, const ArrayInstance&) = default;
};

/// TIS-100 instance: the target image and the cycle bound.
struct ImageInstance {
    Image target;
    std::int64_t time_bound = 10000;  // cycles

    std::int64_t max_points() const { return kImagePixels; }
    friend bool operator==(const ImageInstance&, const ImageInstance&) = default;
};

using ProblemInstance = std::variant<ArrayInstance, ImageInstance>;

std::int64_t max_points(const ProblemInstance& instance);

struct ProblemSet {
    std::string benchmark;
    std::string split;  // "train" or "test"
    const MachineProfile* profile = nullptr;
    std::uint64_t seed = 0;
    std::vector<ProblemInstance> instances;

    std::int64_t max_points() const;
    bool empty() const { return instances.empty(); }

    friend bool operator==(const ProblemSet& a, const ProblemSet& b);
};

inline constexpr std::string_view kProblemFormat = "stepstone-problems 1";

/// Format (one key per line, integers in decimal):
///   format: stepstone-problems 1
///   benchmark: <name>
///   profile: <profile>
///   split: train|test
///   seed: <u64>
///   instances: <count>
/// then per instance:
///   instance <i>
///   bound: <time bound>
///   scalars: <v>...
///   array <row_size>: <v>...        (row_size 0 for 1d; one line per array)
///   expect-scalar: <v>
///   expect-array <array index>: <v>...
///   image:                           (TIS-100; followed by 18 rows of 30 digits)
///   end
void write_problem_set(std::ostream& out, const ProblemSet& set);
/// Throws ParseError.
ProblemSet read_problem_set(std::istream& in);

ProblemSet load_problem_set(const std::string& path);
void save_problem_set(const std::string& path, const ProblemSet& set);

}  // namespace stepstone
