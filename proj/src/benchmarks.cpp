#include "stepstone/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace stepstone {

std::string_view to_string(Tier tier) {
    switch (tier) {
        case Tier::preliminary: return "preliminary";
        case Tier::established: return "established";
        case Tier::additional: return "additional";
        case Tier::tis100: return "tis100";
    }
    return "?";
}

std::string_view to_string(Split split) { return split == Split::train ? "train" : "test"; }

std::int64_t bound_linear(std::int64_t n) { return 2 * n + 1; }

std::int64_t bound_quadratic(std::int64_t n) { return 2 * n * n + 1; }

std::int64_t bound_log(std::int64_t n) {
    return static_cast<std::int64_t>(std::floor(2.0 * std::log2(static_cast<double>(n) + 1.0) + 1.0));
}

std::int64_t bound_n_log_n(std::int64_t n) {
    const double v = 2.0 * static_cast<double>(n) * std::log2(static_cast<double>(n) + 1.0);
    return static_cast<std::int64_t>(std::floor(v + 1.0));
}

std::int64_t bound_five_thirds(std::int64_t n) {
    // floor(n^(5/3)) is the integer cube root of n^5, computed exactly.
    const __int128 target = static_cast<__int128>(n) * n * n * n * n;
    auto k = static_cast<__int128>(std::cbrt(static_cast<double>(target)));
    while (k > 0 && k * k * k > target) --k;
    while ((k + 1) * (k + 1) * (k + 1) <= target) ++k;
    return static_cast<std::int64_t>(k) + 1;
}

namespace {

using Values = std::vector<std::int64_t>;

// Uniform k-bit non-negative integer: [0, 2^k).
std::int64_t random_bits(Rng& rng, int k) {
    const std::uint64_t mask = k >= 64 ? ~0ULL : ((1ULL << k) - 1);
    return static_cast<std::int64_t>(rng() & mask);
}

std::size_t uniform_length(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + uniform_index(rng, hi - lo + 1);
}

Values kbit_array(Rng& rng, std::size_t length) {
    const int k = static_cast<int>(uniform_length(rng, 1, 63));
    Values v(length);
    for (auto& x : v) x = random_bits(rng, k);
    return v;
}

// Preliminary benchmarks: up to 31 bits, then a random sign.
Values signed31_array(Rng& rng, std::size_t length) {
    const int k = static_cast<int>(uniform_length(rng, 1, 31));
    Values v(length);
    for (auto& x : v) {
        x = random_bits(rng, k);
        if (rng() & 1) x = -x;
    }
    return v;
}

Values range_array(Rng& rng, std::size_t length, std::int64_t lo, std::int64_t hi) {
    Values v(length);
    for (auto& x : v) x = uniform_int(rng, lo, hi);
    return v;
}

std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

ArrayInput one_array(Values a) {
    ArrayInput in;
    in.arrays.push_back({std::move(a), 0});
    return in;
}

ArrayInput one_scalar(std::int64_t x) {
    ArrayInput in;
    in.scalars.push_back(x);
    return in;
}

const Values& array0(const ArrayInput& in) { return in.arrays.at(0).values; }

std::int64_t memory_n(const ArrayInput& in) { return static_cast<std::int64_t>(in.memory_size()); }

std::size_t max_length(Split split, std::size_t train, std::size_t test) {
    return split == Split::train ? train : test;
}

// Topological levels b[i] = min L >= 0 with b[j] < L for every edge j->i.
Values topological_levels(const ArrayInput& in) {
    const auto& a = array0(in);
    const std::size_t v = in.arrays.at(0).row_size;
    Values level(v, 0);
    std::vector<std::size_t> indegree(v, 0);
    for (std::size_t j = 0; j < v; ++j) {
        for (std::size_t i = 0; i < v; ++i) indegree[i] += a[j * v + i] == 1;
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < v; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
        const std::size_t j = ready.back();
        ready.pop_back();
        for (std::size_t i = 0; i < v; ++i) {
            if (a[j * v + i] != 1) continue;
            level[i] = std::max(level[i], level[j] + 1);
            if (--indegree[i] == 0) ready.push_back(i);
        }
    }
    return level;
}

// Random levels, a minimal edge set realizing them, then extra edges that
// only go from lower to higher levels.
ArrayInput random_graph(Rng& rng, Split split) {
    const std::size_t v = uniform_length(rng, 1, max_length(split, 9, 201));
    const std::size_t height = uniform_index(rng, v);
    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> level(v);
    for (std::size_t i = 0; i < v; ++i) {
        level[order[i]] = i <= height ? i : uniform_index(rng, height + 1);
    }
    std::vector<std::vector<std::size_t>> by_level(height + 1);
    for (std::size_t i = 0; i < v; ++i) by_level[level[i]].push_back(i);

    Values a(v * v, 0);
    for (std::size_t i = 0; i < v; ++i) {
        if (level[i] == 0) continue;
        const auto& below = by_level[level[i] - 1];
        a[below[uniform_index(rng, below.size())] * v + i] = 1;
    }
    const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t j = 0; j < v; ++j) {
        for (std::size_t i = 0; i < v; ++i) {
            if (level[j] < level[i] && chance(rng, density)) a[j * v + i] = 1;
        }
    }
    ArrayInput in;
    in.arrays.push_back({std::move(a), v});
    in.arrays.push_back({Values(v, 0), 0});
    return in;
}

// Sorted distinct k-bit values, k raised until the range can hold them.
Values distinct_sorted(Rng& rng, std::size_t length) {
    int k = static_cast<int>(uniform_length(rng, 1, 63));
    while (k < 63 && (std::uint64_t{1} << k) < length) ++k;
    const std::uint64_t range = std::uint64_t{1} << k;
    Values out;
    if (range <= 4 * static_cast<std::uint64_t>(length)) {
        Values all(range);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(length));
    } else {
        std::unordered_set<std::int64_t> seen;
        while (out.size() < length) {
            const std::int64_t x = random_bits(rng, k);
            if (seen.insert(x).second) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BenchmarkDef> build_catalog() {
    std::vector<BenchmarkDef> defs;
    const MachineProfile* mem = &x86_memory_profile();
    const MachineProfile* scalar = &x86_scalar_profile();

    auto in_place = [](std::function<std::int64_t(std::int64_t)> f) {
        return [f](const ArrayInput& in) {
            ExpectedOutput e;
            for (const auto x : array0(in)) e.array.push_back(f(x));
            return e;
        };
    };
    auto scalar_of = [](std::function<std::int64_t(const ArrayInput&)> f) {
        return [f](const ArrayInput& in) {
            ExpectedOutput e;
            e.scalar = f(in);
            return e;
        };
    };
    auto linear = [](std::int64_t n, Split) { return bound_linear(n); };
    auto constant300 = [](std::int64_t, Split) { return std::int64_t{300}; };

    constexpr std::string_view kOneArray = "memory: a; R1=n-1, R2=n";
    constexpr std::string_view kPrelimGen =
        "length uniform in [1,6] (train) / [1,2001] (test); per instance k in [1,31], elements "
        "uniform k-bit magnitudes with random sign";
    auto prelim = [](Rng& rng, Split split) {
        return one_array(signed31_array(rng, uniform_length(rng, 1, max_length(split, 6, 2001))));
    };

    defs.push_back({"cube-elements", "Cube Elements", Tier::preliminary, mem,
                    "cube each element of a in place (mod 2^64)", kOneArray, "2n", kPrelimGen, 0,
                    false, prelim, in_place([](std::int64_t x) { return wrap_mul(wrap_mul(x, x), x); }),
                    linear, memory_n});
    defs.push_back({"fourth-power", "4th Power", Tier::preliminary, mem,
                    "raise each element of a to the 4th power in place (mod 2^64)", kOneArray, "2n",
                    kPrelimGen, 0, false, prelim, in_place([](std::int64_t x) {
                        const std::int64_t sq = wrap_mul(x, x);
                        return wrap_mul(sq, sq);
                    }),
                    linear, memory_n});
    defs.push_back({"sum-sq-elements", "Sum Sq of Elem", Tier::preliminary, mem,
                    "R0 = sum of a[i]^2 (mod 2^64)", kOneArray, "2n", kPrelimGen, std::nullopt, true,
                    prelim, scalar_of([](const ArrayInput& in) {
                        std::int64_t s = 0;
                        for (const auto x : array0(in)) s = wrap_add(s, wrap_mul(x, x));
                        return s;
                    }),
                    linear, memory_n});
    defs.push_back({"prod-sq-elements", "Prod Sq of Elem", Tier::preliminary, mem,
                    "R0 = product of a[i]^2 (mod 2^64)", kOneArray, "2n", kPrelimGen, std::nullopt,
                    true, prelim, scalar_of([](const ArrayInput& in) {
                        std::int64_t p = 1;
                        for (const auto x : array0(in)) p = wrap_mul(p, wrap_mul(x, x));
                        return p;
                    }),
                    linear, memory_n});
    defs.push_back({"sum-abs", "Sum Abs", Tier::preliminary, mem, "R0 = sum of |a[i]|", kOneArray,
                    "2n", kPrelimGen, std::nullopt, true, prelim,
                    scalar_of([](const ArrayInput& in) {
                        std::int64_t s = 0;
                        for (const auto x : array0(in)) s = wrap_add(s, x < 0 ? -x : x);
                        return s;
                    }),
                    linear, memory_n});

    defs.push_back({"negative-to-zero", "Negative To Zero", Tier::established, mem,
                    "replace negative elements of a with 0 in place", kOneArray, "300",
                    "length uniform in [1,50]; elements uniform in [-1000,1000]", 0, false,
                    [](Rng& rng, Split) {
                        return one_array(range_array(rng, uniform_length(rng, 1, 50), -1000, 1000));
                    },
                    in_place([](std::int64_t x) { return std::max<std::int64_t>(x, 0); }),
                    constant300, memory_n});
    defs.push_back({"vectors-summed", "Vectors Summed", Tier::established, mem,
                    "c[i] = a[i] + b[i] into preallocated c",
                    "memory: a, b, c (zeros); R1=|a|-1, R2=2|a|-1, R3=n-1, R4=|a|, R5=2|a|, R0=n",
                    "300",
                    "common length uniform in [1,50]; elements uniform in [-1000,1000]", 2, false,
                    [](Rng& rng, Split) {
                        const std::size_t len = uniform_length(rng, 1, 50);
                        ArrayInput in;
                        in.arrays.push_back({range_array(rng, len, -1000, 1000), 0});
                        in.arrays.push_back({range_array(rng, len, -1000, 1000), 0});
                        in.arrays.push_back({Values(len, 0), 0});
                        return in;
                    },
                    [](const ArrayInput& in) {
                        ExpectedOutput e;
                        const auto& a = in.arrays.at(0).values;
                        const auto& b = in.arrays.at(1).values;
                        for (std::size_t i = 0; i < a.size(); ++i) e.array.push_back(wrap_add(a[i], b[i]));
                        return e;
                    },
                    constant300, memory_n});
    defs.push_back({"last-index-of-zero", "Last Index of Zero", Tier::established, mem,
                    "R0 = max i with a[i] = 0", kOneArray, "300",
                    "length uniform in [1,50]; elements uniform in [-50,50]; between 1 and "
                    "max(1,len/4) random positions forced to 0",
                    std::nullopt, true,
                    [](Rng& rng, Split) {
                        const std::size_t len = uniform_length(rng, 1, 50);
                        Values a = range_array(rng, len, -50, 50);
                        const std::size_t zeros = uniform_length(rng, 1, std::max<std::size_t>(1, len / 4));
                        for (std::size_t z = 0; z < zeros; ++z) a[uniform_index(rng, len)] = 0;
                        return one_array(std::move(a));
                    },
                    scalar_of([](const ArrayInput& in) {
                        const auto& a = array0(in);
                        std::int64_t last = -1;
                        for (std::size_t i = 0; i < a.size(); ++i) {
                            if (a[i] == 0) last = static_cast<std::int64_t>(i);
                        }
                        return last;
                    }),
                    constant300, memory_n});
    defs.push_back({"count-odds", "Count Odds", Tier::established, mem,
                    "R0 = number of odd elements of a", kOneArray, "300",
                    "length uniform in [0,50]; elements uniform in [-1000,1000]", std::nullopt, true,
                    [](Rng& rng, Split) {
                        return one_array(range_array(rng, uniform_length(rng, 0, 50), -1000, 1000));
                    },
                    scalar_of([](const ArrayInput& in) {
                        const auto& a = array0(in);
                        return static_cast<std::int64_t>(
                            std::count_if(a.begin(), a.end(), [](std::int64_t x) { return x % 2 != 0; }));
                    }),
                    constant300, memory_n});
    defs.push_back({"mirror-image", "Mirror Image", Tier::established, mem,
                    "R0 = 1 iff a is the reverse of b, else 0",
                    "memory: a, b; R1=|a|-1, R2=n-1, R3=|a|, R4=n", "300",
                    "common length uniform in [0,50]; elements uniform in [-1000,1000]; b is the "
                    "exact reverse of a (1/2), the reverse with one element changed (1/4), or "
                    "random (1/4)",
                    std::nullopt, true,
                    [](Rng& rng, Split) {
                        const std::size_t len = uniform_length(rng, 0, 50);
                        Values a = range_array(rng, len, -1000, 1000);
                        Values b(a.rbegin(), a.rend());
                        const auto mode = uniform_index(rng, 4);
                        if (mode == 2 && len > 0) {
                            const std::size_t i = uniform_index(rng, len);
                            b[i] = b[i] == 1000 ? -1000 : b[i] + 1 + uniform_int(rng, 0, 1000 - b[i] - 1);
                        } else if (mode == 3) {
                            b = range_array(rng, len, -1000, 1000);
                        }
                        ArrayInput in;
                        in.arrays.push_back({std::move(a), 0});
                        in.arrays.push_back({std::move(b), 0});
                        return in;
                    },
                    scalar_of([](const ArrayInput& in) {
                        const auto& a = in.arrays.at(0).values;
                        const auto& b = in.arrays.at(1).values;
                        return static_cast<std::int64_t>(
                            a.size() == b.size() && std::equal(a.begin(), a.end(), b.rbegin()));
                    }),
                    constant300, memory_n});
    defs.push_back({"sum-of-squares", "Sum of Squares", Tier::established, scalar,
                    "R0 = sum of i^2 for i = 1..x", "no memory; R1=x", "300",
                    "x uniform in [1,100]", std::nullopt, true,
                    [](Rng& rng, Split) { return one_scalar(uniform_int(rng, 1, 100)); },
                    scalar_of([](const ArrayInput& in) {
                        std::int64_t s = 0;
                        for (std::int64_t i = 1; i <= in.scalars.at(0); ++i) s += i * i;
                        return s;
                    }),
                    constant300, [](const ArrayInput&) { return std::int64_t{0}; }});
    defs.push_back({"collatz-numbers", "Collatz Numbers", Tier::established, scalar,
                    "R0 = number of steps (x -> x/2 if even, 3x+1 if odd) to reach 1",
                    "no memory; R1=x", "300", "x uniform in [1,10000]", std::nullopt, true,
                    [](Rng& rng, Split) { return one_scalar(uniform_int(rng, 1, 10000)); },
                    scalar_of([](const ArrayInput& in) {
                        std::int64_t x = in.scalars.at(0);
                        std::int64_t steps = 0;
                        while (x > 1) {
                            x = x % 2 == 0 ? x / 2 : 3 * x + 1;
                            ++steps;
                        }
                        return steps;
                    }),
                    constant300, [](const ArrayInput&) { return std::int64_t{0}; }});

    defs.push_back({"binary-search", "Binary Search", Tier::additional, mem,
                    "R0 = index i with a[i] = x in sorted a", "memory: a; R1=x, R2=n-1, R3=n",
                    "2 lg n",
                    "length uniform in [1,1001] (train) / [1,100001] (test); distinct sorted k-bit "
                    "values (k raised until 2^k >= length); x drawn from a",
                    std::nullopt, true,
                    [](Rng& rng, Split split) {
                        const std::size_t len = uniform_length(rng, 1, max_length(split, 1001, 100001));
                        Values a = distinct_sorted(rng, len);
                        ArrayInput in;
                        in.scalars.push_back(a[uniform_index(rng, len)]);
                        in.arrays.push_back({std::move(a), 0});
                        return in;
                    },
                    scalar_of([](const ArrayInput& in) {
                        const auto& a = array0(in);
                        const auto it = std::lower_bound(a.begin(), a.end(), in.scalars.at(0));
                        return static_cast<std::int64_t>(it - a.begin());
                    }),
                    [](std::int64_t n, Split) { return bound_log(n); }, memory_n});
    defs.push_back({"integer-sqrt", "Integer Sqrt", Tier::additional, scalar,
                    "R0 = floor(sqrt(x)) for x >= 0", "no memory; R1=x", "2 lg x",
                    "per instance k in [1,63]; x uniform k-bit", std::nullopt, true,
                    [](Rng& rng, Split) {
                        return one_scalar(random_bits(rng, static_cast<int>(uniform_length(rng, 1, 63))));
                    },
                    scalar_of([](const ArrayInput& in) {
                        const auto x = static_cast<std::uint64_t>(in.scalars.at(0));
                        auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
                        while (r > 0 && static_cast<unsigned __int128>(r) * r > x) --r;
                        while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= x) ++r;
                        return static_cast<std::int64_t>(r);
                    }),
                    [](std::int64_t x, Split) { return bound_log(x); },
                    [](const ArrayInput& in) { return in.scalars.at(0); }});
    defs.push_back({"merge", "Merge", Tier::additional, mem,
                    "merge sorted a and b into preallocated c",
                    "memory: a, b, c (zeros); R1=|a|-1, R2=|a|+|b|-1, R3=n-1, R4=|a|, "
                    "R5=|a|+|b|, R0=n",
                    "2n",
                    "|a|, |b| uniform in [1,21] (train) / [1,2001] (test); per instance k in "
                    "[1,63]; k-bit values, each array sorted",
                    2, false,
                    [](Rng& rng, Split split) {
                        const std::size_t hi = max_length(split, 21, 2001);
                        const std::size_t la = uniform_length(rng, 1, hi);
                        const std::size_t lb = uniform_length(rng, 1, hi);
                        Values all = kbit_array(rng, la + lb);
                        Values a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(la));
                        Values b(all.begin() + static_cast<std::ptrdiff_t>(la), all.end());
                        std::sort(a.begin(), a.end());
                        std::sort(b.begin(), b.end());
                        ArrayInput in;
                        in.arrays.push_back({std::move(a), 0});
                        in.arrays.push_back({std::move(b), 0});
                        in.arrays.push_back({Values(la + lb, 0), 0});
                        return in;
                    },
                    [](const ArrayInput& in) {
                        ExpectedOutput e;
                        const auto& a = in.arrays.at(0).values;
                        const auto& b = in.arrays.at(1).values;
                        e.array.resize(a.size() + b.size());
                        std::merge(a.begin(), a.end(), b.begin(), b.end(), e.array.begin());
                        return e;
                    },
                    linear, memory_n});

    auto sorted = [](const ArrayInput& in) {
        ExpectedOutput e;
        e.array = array0(in);
        std::sort(e.array.begin(), e.array.end());
        return e;
    };
    defs.push_back({"slow-sort", "Slow Sort", Tier::additional, mem,
                    "sort a in increasing order in place", kOneArray, "2n^2",
                    "length uniform in [1,21] (train) / [1,2001] (test); per instance k in [1,63]; "
                    "k-bit values",
                    0, false,
                    [](Rng& rng, Split split) {
                        return one_array(kbit_array(rng, uniform_length(rng, 1, max_length(split, 21, 2001))));
                    },
                    sorted, [](std::int64_t n, Split) { return bound_quadratic(n); }, memory_n});
    defs.push_back({"fast-sort", "Fast Sort", Tier::additional, mem,
                    "sort a in increasing order in place", kOneArray, "2n lg n (train), n^(5/3) (test)",
                    "length uniform in [1,201] (train) / [1,100001] (test); per instance k in "
                    "[1,63]; k-bit values",
                    0, false,
                    [](Rng& rng, Split split) {
                        return one_array(kbit_array(rng, uniform_length(rng, 1, max_length(split, 201, 100001))));
                    },
                    sorted,
                    [](std::int64_t n, Split split) {
                        return split == Split::train ? bound_n_log_n(n) : bound_five_thirds(n);
                    },
                    memory_n});

    constexpr std::string_view kGraphLayout =
        "memory: a (v x v, row-major, a[j][i]=1 for edge j->i), b (zeros, length v); "
        "R1=v^2-1, R2=v^2+v-1, R3=v^2, R4=n, R5=v-1, R0=v";
    constexpr std::string_view kGraphGen =
        "v uniform in [1,9] (train) / [1,201] (test); random levels using every level up to a "
        "random height, one edge from the level below per vertex, then extra edges from lower to "
        "higher levels with a random density";
    defs.push_back({"topological-sort", "Topological Sort", Tier::additional, mem,
                    "b[i] = min L >= 0 with b[j] < L for every edge j->i", kGraphLayout, "2n",
                    kGraphGen, 1, false, random_graph,
                    [](const ArrayInput& in) {
                        ExpectedOutput e;
                        e.array = topological_levels(in);
                        return e;
                    },
                    linear, memory_n});
    defs.push_back({"dag-sources", "DAG Sources", Tier::additional, mem,
                    "b[i] = 1 iff no edge enters i", kGraphLayout, "2n", kGraphGen, 1, false,
                    random_graph,
                    [](const ArrayInput& in) {
                        ExpectedOutput e;
                        const auto& a = array0(in);
                        const std::size_t v = in.arrays.at(0).row_size;
                        for (std::size_t i = 0; i < v; ++i) {
                            bool source = true;
                            for (std::size_t j = 0; j < v; ++j) source = source && a[j * v + i] == 0;
                            e.array.push_back(source ? 1 : 0);
                        }
                        return e;
                    },
                    linear, memory_n});

    BenchmarkDef p1{"image-test-pattern-1", "Image Test Pattern 1", Tier::tis100,
                    &tis100_profile(1999), "paint the 30x18 image all color 3",
                    "no input; ACC=BAK=0", "10000 cycles", "single fixed target image"};
    p1.target = solid_image(3);
    p1.cycle_bound = 10000;
    defs.push_back(std::move(p1));
    BenchmarkDef p2{"image-test-pattern-2", "Image Test Pattern 2", Tier::tis100,
                    &tis100_profile(1999),
                    "checkerboard: (X,Y) color 3 if X+Y even, else 0", "no input; ACC=BAK=0",
                    "10000 cycles", "single fixed target image"};
    p2.target = checkerboard_image();
    p2.cycle_bound = 10000;
    defs.push_back(std::move(p2));
    return defs;
}

const std::vector<BenchmarkDef>& catalog() {
    static const std::vector<BenchmarkDef> defs = build_catalog();
    return defs;
}

}  // namespace

std::span<const BenchmarkDef> benchmarks() { return catalog(); }

const BenchmarkDef& benchmark_by_name(std::string_view name) {
    for (const auto& def : catalog()) {
        if (def.name == name) return def;
    }
    throw std::invalid_argument("unknown benchmark '" + std::string(name) + "'");
}

ExpectedOutput oracle(const BenchmarkDef& benchmark, const ArrayInput& input) {
    return benchmark.oracle(input);
}

std::int64_t time_bound(const BenchmarkDef& benchmark, const ArrayInput& input, Split split) {
    return benchmark.bound(benchmark.size_measure(input), split);
}

ArrayInstance make_instance(const BenchmarkDef& benchmark, ArrayInput input, Split split) {
    ArrayInstance inst;
    const ExpectedOutput expected = oracle(benchmark, input);
    inst.time_bound = time_bound(benchmark, input, split);
    if (benchmark.scalar_output) inst.expected_scalar = expected.scalar;
    if (benchmark.output_array) {
        inst.output_array = benchmark.output_array;
        inst.expected_array = expected.array;
    }
    inst.input = std::move(input);
    inst.validate();
    return inst;
}

ProblemSet generate_problem_set(const BenchmarkDef& benchmark, Split split, std::uint64_t seed,
                                std::size_t count, const MachineProfile* profile) {
    ProblemSet set;
    set.benchmark = std::string(benchmark.name);
    set.split = std::string(to_string(split));
    set.seed = seed;
    set.profile = benchmark.profile;
    if (profile != nullptr) {
        const bool compatible = benchmark.is_image() ? profile->isa == Isa::tis100
                                                     : *profile == *benchmark.profile;
        if (!compatible) {
            throw std::invalid_argument("profile " + std::string(profile->name) +
                                        " does not fit benchmark " + std::string(benchmark.name));
        }
        set.profile = profile;
    }
    if (benchmark.is_image()) {
        set.instances.emplace_back(ImageInstance{*benchmark.target, benchmark.cycle_bound});
        return set;
    }
    Rng rng(seed);
    set.instances.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        set.instances.emplace_back(make_instance(benchmark, benchmark.generate(rng, split), split));
    }
    return set;
}

ProblemSet generate_training_set(const BenchmarkDef& benchmark, std::uint64_t seed,
                                 std::size_t count, const MachineProfile* profile) {
    return generate_problem_set(benchmark, Split::train, seed, count, profile);
}

ProblemSet generate_test_set(const BenchmarkDef& benchmark, std::uint64_t seed, std::size_t count,
                             const MachineProfile* profile) {
    return generate_problem_set(benchmark, Split::test, seed, count, profile);
}

std::string catalog_markdown() {
    std::ostringstream out;
    out << "# Benchmark catalog\n\n"
        << "Generated by `stepstone catalog`. Time bounds are floor(f(n) + 1) with lg taken of "
           "n + 1, where n is the total memory size (all arrays including preallocated output); "
           "constant bounds are used as given. Registers not listed start at 0.\n";
    for (const auto& def : catalog()) {
        out << "\n## " << def.title << " (`" << def.name << "`)\n\n"
            << "- tier: " << to_string(def.tier) << '\n'
            << "- profile: " << def.profile->name << '\n'
            << "- task: " << def.task << '\n'
            << "- layout: " << def.layout << '\n'
            << "- time bound: " << def.bound_formula << '\n'
            << "- generation: " << def.generation << '\n';
        if (!def.is_image()) {
            out << "- output: "
                << (def.scalar_output ? "scalar in R0"
                                      : "array " + std::to_string(*def.output_array) + " of memory")
                << '\n';
        }
    }
    return out.str();
}

}  // namespace stepstone
