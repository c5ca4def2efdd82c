#include "stepstone/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace stepstone {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kTrainStream = 0x747261696eULL;
constexpr std::uint64_t kTestStream = 0x74657374ULL;

Json program_json(const Program& program, const MachineProfile& profile) {
    Json out = Json::array();
    for (const Instruction ins : program.instructions()) {
        out.push_back(std::string(mnemonic(profile, ins.opcode)) + " " + std::to_string(ins.operand));
    }
    return out;
}

Program program_from_json(const Json& j, const MachineProfile& profile) {
    std::vector<Instruction> slots;
    for (const auto& item : j) {
        std::istringstream in(item.get<std::string>());
        std::string mnem;
        int operand = -1;
        in >> mnem >> operand;
        slots.push_back(Instruction::make(profile, opcode_from_mnemonic(profile, mnem), operand));
    }
    return Program(profile, slots);
}

std::string format_pct(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << v;
    return out.str();
}

}  // namespace

std::vector<ProtocolLevel> default_levels() {
    return {{100, 75000, 4}, {100, 2000000, 9}, {30, 100000000, 10}};
}

ProtocolLevel desk_level() { return {10, 75000, 4}; }

std::uint64_t run_seed(std::uint64_t seed_base, std::size_t level, std::size_t run) {
    return mix_seed(mix_seed(seed_base, level), run);
}

std::uint64_t train_data_seed(std::uint64_t seed_base) { return mix_seed(seed_base, kTrainStream); }

std::uint64_t test_data_seed(std::uint64_t seed_base) { return mix_seed(seed_base, kTestStream); }

std::optional<Program> simplest_success(const RunRecord& record, const MachineProfile& profile,
                                        std::int64_t success_score) {
    std::optional<Program> best;
    int best_noops = -1;
    auto consider = [&](const Program& p, std::int64_t score) {
        if (score < success_score) return;
        const int noops = count_noops(p, profile);
        if (noops > best_noops) {
            best = p;
            best_noops = noops;
        }
    };
    for (const auto& m : record.milestones) consider(m.program, m.train_score);
    if (record.final_program) consider(*record.final_program, record.final_score);
    return best;
}

RunRecord run_search(const ProblemSet& training, Algorithm algorithm, const SearchParams& params,
                     std::uint64_t seed, std::optional<std::int64_t> budget,
                     std::optional<std::int64_t> extension_max_periods) {
    auto evaluator_state = std::make_shared<TrainingEvaluator>(training);
    Evaluator evaluator{[evaluator_state](const Program& p, std::int64_t floor) {
                            return (*evaluator_state)(p, floor);
                        },
                        training.max_points()};
    SearchLimits limits;
    limits.max_periods = params.max_periods;
    if (budget) limits.max_evaluations = *budget;

    auto drive = [&](auto& search) {
        search.run(limits);
        if (extension_max_periods && search.record().train_success && !search.finished()) {
            SearchLimits extended;
            extended.max_periods = std::max(*extension_max_periods, params.max_periods);
            search.run(extended);
        }
        return search.record();
    };
    if (algorithm == Algorithm::delayed_acceptance) {
        DelayedAcceptanceSearch search(evaluator, *training.profile, params, seed);
        return drive(search);
    }
    BasicHillclimbingSearch search(evaluator, *training.profile, params, seed);
    return drive(search);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

BenchmarkReport run_protocol(const ProtocolConfig& config) {
    if (config.levels.empty()) throw std::invalid_argument("protocol needs at least one level");
    const BenchmarkDef& def = benchmark_by_name(config.benchmark);
    const ProblemSet training =
        generate_training_set(def, train_data_seed(config.seed_base), config.train_count, config.profile);
    const MachineProfile& profile = *training.profile;
    std::optional<ProblemSet> test;

    BenchmarkReport report;
    report.benchmark = config.benchmark;
    report.profile = std::string(profile.name);
    report.algorithm = std::string(to_string(config.algorithm));
    report.seed_base = config.seed_base;
    report.train_count = def.is_image() ? 1 : config.train_count;
    report.test_count = def.is_image() ? 1 : config.test_count;

    for (std::size_t li = 0; li < config.levels.size(); ++li) {
        const ProtocolLevel& level = config.levels[li];
        SearchParams params = config.params;
        params.period = level.period;
        params.max_periods = level.max_periods;
        params.validate();

        std::vector<RunSummary> runs(static_cast<std::size_t>(std::max(level.runs, 0)));
        parallel_for(runs.size(), config.threads, [&](std::size_t i) {
            const auto start = std::chrono::steady_clock::now();
            RunSummary& run = runs[i];
            run.index = i;
            run.record = run_search(training, config.algorithm, params, run_seed(config.seed_base, li, i),
                                    std::nullopt, config.extension_max_periods);
            run.simplest = simplest_success(run.record, profile, training.max_points());
            if (config.record_wall_time) {
                run.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
        });

        report.level_index = li;
        report.level = level;
        report.runs = std::move(runs);
        report.train_successes = static_cast<int>(std::count_if(
            report.runs.begin(), report.runs.end(), [](const RunSummary& r) { return r.simplest.has_value(); }));
        if (report.train_successes > 0) break;
    }

    if (report.train_successes > 0) {
        test.emplace(generate_test_set(def, test_data_seed(config.seed_base), config.test_count, config.profile));
        parallel_for(report.runs.size(), config.threads, [&](std::size_t i) {
            RunSummary& run = report.runs[i];
            if (!run.simplest) return;
            const Generalization g = generalization_test(*run.simplest, *test);
            run.test_perfect = g.perfect;
            run.test_fraction = g.fraction;
            if (def.is_image()) {
                const auto& img = std::get<ImageInstance>(test->instances.front());
                run.cycles = tis_execute(profile, *run.simplest, img.target, img.time_bound).cycles_used;
            }
        });
    }

    const double total = static_cast<double>(report.runs.size());
    for (const RunSummary& run : report.runs) {
        if (!run.simplest) continue;
        report.perfect_generalizations += run.test_perfect ? 1 : 0;
        const int size = program_size(*run.simplest, profile);
        if (!report.smallest_size || size < *report.smallest_size) report.smallest_size = size;
        if (run.cycles) {
            const std::pair<int, std::int64_t> pair{size, *run.cycles};
            if (!report.best_size_cycles || pair < *report.best_size_cycles) report.best_size_cycles = pair;
        }
    }
    if (total > 0) {
        report.pct_train_success = 100.0 * report.train_successes / total;
        report.pct_generalize = 100.0 * report.perfect_generalizations / total;
    }
    return report;
}

std::vector<GridCell> grid_cells(const GridConfig& config) {
    std::vector<GridCell> cells;
    for (const double s : config.swap_p) {
        for (const double d : config.double_p) {
            for (const double c : config.copy_p) {
                for (const std::int64_t p : config.periods) cells.push_back({s, d, c, p});
            }
        }
    }
    return cells;
}

GridResult grid_search(const GridConfig& config) {
    GridResult result;
    if (config.benchmarks.empty()) {
        for (const auto& def : benchmarks()) {
            if (def.tier == Tier::preliminary) result.benchmarks.emplace_back(def.name);
        }
    } else {
        result.benchmarks = config.benchmarks;
    }
    if (config.runs_per_cell <= 0) return result;

    const std::vector<GridCell> cells = grid_cells(config);
    struct Data {
        ProblemSet training;
        ProblemSet test;
    };
    std::vector<Data> data;
    for (const auto& name : result.benchmarks) {
        const BenchmarkDef& def = benchmark_by_name(name);
        data.push_back({generate_training_set(def, train_data_seed(config.seed_base), config.train_count),
                        generate_test_set(def, test_data_seed(config.seed_base), config.test_count)});
    }

    const std::size_t per_cell = result.benchmarks.size() * static_cast<std::size_t>(config.runs_per_cell);
    std::vector<char> perfect(cells.size() * per_cell, 0);
    parallel_for(perfect.size(), config.threads, [&](std::size_t job) {
        const std::size_t cell = job / per_cell;
        const std::size_t bench = (job % per_cell) / static_cast<std::size_t>(config.runs_per_cell);
        const std::size_t run = job % static_cast<std::size_t>(config.runs_per_cell);
        SearchParams params;
        params.swap_p = cells[cell].swap_p;
        params.double_p = cells[cell].double_p;
        params.copy_p = cells[cell].copy_p;
        params.period = cells[cell].period;
        params.max_periods = (config.budget + params.period - 1) / params.period;
        const Data& d = data[bench];
        const RunRecord record = run_search(d.training, Algorithm::delayed_acceptance, params,
                                            run_seed(config.seed_base, cell, bench * 1000003 + run),
                                            config.budget);
        const auto simplest = simplest_success(record, *d.training.profile, d.training.max_points());
        perfect[job] = simplest && generalization_test(*simplest, d.test).perfect;
    });

    for (std::size_t c = 0; c < cells.size(); ++c) {
        GridRow row{cells[c], std::vector<int>(result.benchmarks.size(), 0), 0};
        for (std::size_t b = 0; b < result.benchmarks.size(); ++b) {
            for (int r = 0; r < config.runs_per_cell; ++r) {
                row.perfect_per_benchmark[b] += perfect[c * per_cell + b * config.runs_per_cell + r];
            }
            row.total_perfect += row.perfect_per_benchmark[b];
        }
        result.rows.push_back(std::move(row));
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const GridRow& a, const GridRow& b) { return a.total_perfect > b.total_perfect; });
    return result;
}

std::vector<TrajectoryRow> export_trajectory(const RunRecord& record, const ProblemSet& training,
                                             const ProblemSet& test) {
    std::vector<TrajectoryRow> rows;
    const double train_max = static_cast<double>(training.max_points());
    for (std::size_t i = 0; i < record.milestones.size(); ++i) {
        const Milestone& m = record.milestones[i];
        TrajectoryRow row;
        row.milestone = i;
        row.period = m.period;
        row.evaluations = m.evaluations;
        row.train_score = m.train_score;
        row.train_pct = train_max > 0 ? 100.0 * static_cast<double>(eval_program(m.program, training).raw) / train_max
                                      : 100.0;
        row.test_pct = 100.0 * generalization_test(m.program, test).fraction;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TrajectoryRow& a, const TrajectoryRow& b) { return a.evaluations < b.evaluations; });
    return rows;
}

std::string run_log_line(const BenchmarkReport& report, const RunSummary& run,
                         const MachineProfile& profile) {
    Json j;
    j["benchmark"] = report.benchmark;
    j["profile"] = report.profile;
    j["algorithm"] = report.algorithm;
    j["seed_base"] = report.seed_base;
    j["train_count"] = report.train_count;
    j["test_count"] = report.test_count;
    j["level"] = report.level_index;
    j["period"] = report.level.period;
    j["max_periods"] = report.level.max_periods;
    j["run"] = run.index;
    j["seed"] = run.record.seed;
    j["halt"] = std::string(to_string(run.record.halt_reason));
    j["evaluations"] = run.record.total_evaluations;
    j["final_score"] = run.record.final_score;
    j["train_success"] = run.record.train_success;
    j["final_program"] = run.record.final_program ? program_json(*run.record.final_program, profile) : Json();
    Json milestones = Json::array();
    for (const Milestone& m : run.record.milestones) {
        Json mj;
        mj["period"] = m.period;
        mj["evaluations"] = m.evaluations;
        mj["train_score"] = m.train_score;
        mj["program"] = program_json(m.program, profile);
        milestones.push_back(std::move(mj));
    }
    j["milestones"] = std::move(milestones);
    if (run.simplest) {
        j["simplest"] = program_json(*run.simplest, profile);
        j["simplest_size"] = program_size(*run.simplest, profile);
        j["test_perfect"] = run.test_perfect;
        j["test_fraction"] = run.test_fraction;
        if (run.cycles) j["cycles"] = *run.cycles;
    }
    if (run.wall_seconds) j["wall_seconds"] = *run.wall_seconds;
    return j.dump();
}

void write_run_log(std::ostream& out, const BenchmarkReport& report, const MachineProfile& profile) {
    for (const RunSummary& run : report.runs) out << run_log_line(report, run, profile) << '\n';
}

LoggedRun parse_run_log_line(const std::string& line) {
    const Json j = Json::parse(line);
    LoggedRun logged;
    logged.benchmark = j.at("benchmark").get<std::string>();
    logged.profile = j.at("profile").get<std::string>();
    logged.seed_base = j.at("seed_base").get<std::uint64_t>();
    logged.train_count = j.at("train_count").get<std::size_t>();
    logged.test_count = j.at("test_count").get<std::size_t>();
    logged.run = j.at("run").get<std::size_t>();
    const MachineProfile& profile = profile_by_name(logged.profile);
    RunRecord& r = logged.record;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.halt_reason = halt_reason_from_string(j.at("halt").get<std::string>());
    r.total_evaluations = j.at("evaluations").get<std::int64_t>();
    r.final_score = j.at("final_score").get<std::int64_t>();
    r.train_success = j.at("train_success").get<bool>();
    if (!j.at("final_program").is_null()) r.final_program = program_from_json(j.at("final_program"), profile);
    for (const auto& mj : j.at("milestones")) {
        r.milestones.push_back({mj.at("period").get<std::int64_t>(), program_from_json(mj.at("program"), profile),
                                mj.at("train_score").get<std::int64_t>(),
                                mj.at("evaluations").get<std::int64_t>(), std::nullopt});
    }
    return logged;
}

std::string report_json(const BenchmarkReport& report) {
    Json j;
    j["benchmark"] = report.benchmark;
    j["profile"] = report.profile;
    j["algorithm"] = report.algorithm;
    j["seed_base"] = report.seed_base;
    j["level"] = report.level_index;
    j["runs"] = report.runs.size();
    j["period"] = report.level.period;
    j["max_periods"] = report.level.max_periods;
    j["train_successes"] = report.train_successes;
    j["perfect_generalizations"] = report.perfect_generalizations;
    j["pct_train_success"] = report.pct_train_success;
    j["pct_generalize"] = report.pct_generalize;
    j["smallest_size"] = report.smallest_size ? Json(*report.smallest_size) : Json();
    if (report.best_size_cycles) {
        j["best_size"] = report.best_size_cycles->first;
        j["best_cycles"] = report.best_size_cycles->second;
    }
    return j.dump(2);
}

void write_report_csv(std::ostream& out, const std::vector<BenchmarkReport>& reports) {
    out << "benchmark,profile,algorithm,seed_base,level,runs,period,max_periods,train_successes,"
           "perfect_generalizations,pct_train_success,pct_generalize,smallest_size,best_size,best_cycles\n";
    for (const auto& r : reports) {
        out << r.benchmark << ',' << r.profile << ',' << r.algorithm << ',' << r.seed_base << ','
            << r.level_index << ',' << r.runs.size() << ',' << r.level.period << ',' << r.level.max_periods
            << ',' << r.train_successes << ',' << r.perfect_generalizations << ','
            << format_pct(r.pct_train_success) << ',' << format_pct(r.pct_generalize) << ',';
        if (r.smallest_size) out << *r.smallest_size;
        out << ',';
        if (r.best_size_cycles) out << r.best_size_cycles->first << ',' << r.best_size_cycles->second;
        else out << ',';
        out << '\n';
    }
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
    out << "rank,swap_p,double_p,copy_p,period,total_perfect";
    for (const auto& b : result.benchmarks) out << ',' << b;
    out << '\n';
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const GridRow& row = result.rows[i];
        out << i + 1 << ',' << row.cell.swap_p << ',' << row.cell.double_p << ',' << row.cell.copy_p << ','
            << row.cell.period << ',' << row.total_perfect;
        for (const int n : row.perfect_per_benchmark) out << ',' << n;
        out << '\n';
    }
}

void write_trajectory_header(std::ostream& out) {
    out << "run,milestone,period,evaluations,train_score,train_pct,test_pct\n";
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows, std::size_t run_index) {
    for (const TrajectoryRow& row : rows) {
        out << run_index << ',' << row.milestone << ',' << row.period << ',' << row.evaluations << ','
            << row.train_score << ',' << format_pct(row.train_pct) << ',' << format_pct(row.test_pct) << '\n';
    }
}

}  // namespace stepstone
