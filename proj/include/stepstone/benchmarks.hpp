// Benchmark catalog: instance generators, reference oracles, register layouts
// and time-bound formulas.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stepstone/isa.hpp"
#include "stepstone/problem.hpp"
#include "stepstone/rng.hpp"

namespace stepstone {

enum class Tier : std::uint8_t { preliminary, established, additional, tis100 };
enum class Split : std::uint8_t { train, test };

std::string_view to_string(Tier tier);
std::string_view to_string(Split split);

struct ExpectedOutput {
    std::optional<std::int64_t> scalar;
    std::vector<std::int64_t> array;  // contents of the output array, if any

    friend bool operator==(const ExpectedOutput&, const ExpectedOutput&) = default;
};

struct BenchmarkDef {
    std::string_view name;
    std::string_view title;
    Tier tier;
    const MachineProfile* profile;

    // Catalog text.
    std::string_view task;
    std::string_view layout;
    std::string_view bound_formula;
    std::string_view generation;

    // x86 benchmarks.
    std::optional<std::size_t> output_array;  // index into ArrayInput::arrays
    bool scalar_output = false;
    std::function<ArrayInput(Rng&, Split)> generate;
    std::function<ExpectedOutput(const ArrayInput&)> oracle;
    /// Time bound from the size measure (n, or x for Integer Sqrt).
    std::function<std::int64_t(std::int64_t size, Split)> bound;
    std::function<std::int64_t(const ArrayInput&)> size_measure;

    // TIS-100 benchmarks.
    std::optional<Image> target;
    std::int64_t cycle_bound = 0;

    bool is_image() const { return target.has_value(); }
};

std::span<const BenchmarkDef> benchmarks();
/// Throws std::invalid_argument for unknown names.
const BenchmarkDef& benchmark_by_name(std::string_view name);

ExpectedOutput oracle(const BenchmarkDef& benchmark, const ArrayInput& input);
std::int64_t time_bound(const BenchmarkDef& benchmark, const ArrayInput& input, Split split);

/// Builds an instance whose expected outputs come from the oracle.
ArrayInstance make_instance(const BenchmarkDef& benchmark, ArrayInput input, Split split);

/// TIS-100 benchmarks yield a single image instance regardless of count;
/// `profile` selects the operand range for them and must match otherwise.
ProblemSet generate_problem_set(const BenchmarkDef& benchmark, Split split, std::uint64_t seed,
                                std::size_t count, const MachineProfile* profile = nullptr);

inline constexpr std::size_t kTrainCount = 200;
inline constexpr std::size_t kTestCount = 2000;

ProblemSet generate_training_set(const BenchmarkDef& benchmark, std::uint64_t seed,
                                 std::size_t count = kTrainCount,
                                 const MachineProfile* profile = nullptr);
ProblemSet generate_test_set(const BenchmarkDef& benchmark, std::uint64_t seed,
                             std::size_t count = kTestCount,
                             const MachineProfile* profile = nullptr);

/// Initial machine state for an instance.
inline X86State init_layout(const ArrayInstance& instance) { return init_state(instance.input); }
inline const Image& init_layout(const ImageInstance& instance) { return instance.target; }

// Bound formulas: floor(f(n) + 1), with lg taken of n + 1.
std::int64_t bound_linear(std::int64_t n);          // 2n
std::int64_t bound_quadratic(std::int64_t n);       // 2n^2
std::int64_t bound_log(std::int64_t n);             // 2 lg n
std::int64_t bound_n_log_n(std::int64_t n);         // 2n lg n
std::int64_t bound_five_thirds(std::int64_t n);     // n^(5/3)

/// Markdown catalog of every benchmark.
std::string catalog_markdown();

}  // namespace stepstone
