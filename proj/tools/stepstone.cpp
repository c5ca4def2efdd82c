// stepstone: synthesis runs, protocols, grid search, execution and data generation.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stepstone/benchmarks.hpp"
#include "stepstone/harness.hpp"

namespace fs = std::filesystem;
using namespace stepstone;

namespace {

std::vector<std::string> benchmark_names() {
    std::vector<std::string> names;
    for (const auto& def : benchmarks()) names.emplace_back(def.name);
    return names;
}

std::vector<std::string> profile_names() {
    std::vector<std::string> names;
    for (const auto& p : all_profiles()) names.emplace_back(p.name);
    return names;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

struct SearchOptions {
    std::uint64_t seed = 1;
    std::int64_t period = 75000;
    std::int64_t max_periods = 4;
    double swap_p = 0.1;
    double double_p = 0.9;
    double copy_p = 0.5;
    std::string algorithm = "delayed-acceptance";
    std::string profile;
    std::size_t train_count = kTrainCount;
    std::size_t test_count = kTestCount;
    std::int64_t extension = 40;
    int threads = 1;
    bool wall_time = false;
    std::string out = "stepstone-out";
};

void add_search_options(CLI::App* cmd, SearchOptions& o) {
    cmd->add_option("--seed", o.seed, "Seed base")->capture_default_str();
    cmd->add_option("--swap-p", o.swap_p, "Probability of a swap move")->capture_default_str();
    cmd->add_option("--double-p", o.double_p, "Probability of a second replacement")->capture_default_str();
    cmd->add_option("--copy-p", o.copy_p, "Probability of copying an opcode/operand")->capture_default_str();
    cmd->add_option("--algorithm", o.algorithm, "delayed-acceptance (da) or basic-hillclimbing (bh)")
        ->check(CLI::IsMember({"delayed-acceptance", "da", "basic-hillclimbing", "bh"}))
        ->capture_default_str();
    cmd->add_option("--profile", o.profile, "Machine profile override")->check(CLI::IsMember(profile_names()));
    cmd->add_option("--train-count", o.train_count, "Training instances")->capture_default_str();
    cmd->add_option("--test-count", o.test_count, "Test instances")->capture_default_str();
    cmd->add_option("--extension-periods", o.extension,
                    "Period cap for extending training-success runs")
        ->capture_default_str();
    cmd->add_flag("--wall-time", o.wall_time, "Record wall-clock seconds in run logs");
    cmd->add_option("--out", o.out, "Output directory")->envname("STEPSTONE_OUT")->capture_default_str();
}

ProtocolConfig make_config(const SearchOptions& o, const std::string& benchmark) {
    ProtocolConfig c;
    c.benchmark = benchmark;
    c.seed_base = o.seed;
    c.threads = o.threads;
    c.algorithm = algorithm_from_string(o.algorithm);
    c.params.swap_p = o.swap_p;
    c.params.double_p = o.double_p;
    c.params.copy_p = o.copy_p;
    c.train_count = o.train_count;
    c.test_count = o.test_count;
    c.extension_max_periods = o.extension;
    c.record_wall_time = o.wall_time;
    if (!o.profile.empty()) c.profile = &profile_by_name(o.profile);
    return c;
}

void print_report(const BenchmarkReport& r) {
    std::cout << r.benchmark << ": level " << r.level_index << " (" << r.runs.size() << " runs, I=" << r.level.period
              << ", " << r.level.max_periods << " periods) train success " << r.train_successes << "/"
              << r.runs.size() << ", perfect generalization " << r.perfect_generalizations << "/" << r.runs.size();
    if (r.smallest_size) std::cout << ", smallest size " << *r.smallest_size;
    if (r.best_size_cycles) {
        std::cout << ", best (size, cycles) (" << r.best_size_cycles->first << ", " << r.best_size_cycles->second
                  << ")";
    }
    std::cout << '\n';
}

int cmd_run(const SearchOptions& o, const std::string& benchmark) {
    ProtocolConfig c = make_config(o, benchmark);
    c.levels = {{1, o.period, o.max_periods}};
    const BenchmarkReport report = run_protocol(c);
    const MachineProfile& profile = profile_by_name(report.profile);
    auto log = open_out(fs::path(o.out) / "run.jsonl");
    write_run_log(log, report, profile);
    const RunSummary& run = report.runs.front();
    std::cout << "halt: " << to_string(run.record.halt_reason) << "\nevaluations: " << run.record.total_evaluations
              << "\nfinal score: " << run.record.final_score << "\ntrain success: "
              << (run.record.train_success ? "true" : "false") << '\n';
    if (run.simplest) {
        std::cout << "test perfect: " << (run.test_perfect ? "true" : "false") << "\ntest fraction: "
                  << run.test_fraction << "\nsimplest program:\n"
                  << serialize(*run.simplest, profile);
    }
    return 0;
}

int cmd_protocol(const SearchOptions& o, const std::vector<std::string>& names, const std::string& preset,
                 int runs, bool override_level) {
    std::vector<ProtocolLevel> levels = preset == "full" ? default_levels() : std::vector{desk_level()};
    if (override_level) levels = {{runs, o.period, o.max_periods}};
    const fs::path dir(o.out);
    auto log = open_out(dir / "runs.jsonl");
    std::vector<BenchmarkReport> reports;
    for (const auto& name : names) {
        ProtocolConfig c = make_config(o, name);
        c.levels = levels;
        BenchmarkReport report = run_protocol(c);
        write_run_log(log, report, profile_by_name(report.profile));
        log.flush();
        auto json = open_out(dir / (name + ".report.json"));
        json << report_json(report) << '\n';
        print_report(report);
        reports.push_back(std::move(report));
    }
    auto csv = open_out(dir / "report.csv");
    write_report_csv(csv, reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Program synthesis by delayed-acceptance hillclimbing"};
    app.set_config("--config", "", "Key-value config file mirroring the command-line flags");
    app.require_subcommand(1);
    const auto names = benchmark_names();

    SearchOptions run_opts;
    std::string run_benchmark;
    auto* run = app.add_subcommand("run", "Single synthesis run");
    run->add_option("--benchmark", run_benchmark, "Benchmark name")->required()->check(CLI::IsMember(names));
    run->add_option("--period", run_opts.period, "Evaluations per period (I)")->capture_default_str();
    run->add_option("--max-periods", run_opts.max_periods, "Period cap")->capture_default_str();
    add_search_options(run, run_opts);

    SearchOptions proto_opts;
    std::vector<std::string> proto_benchmarks;
    std::string preset = "full";
    int proto_runs = 10;
    auto* protocol = app.add_subcommand("protocol", "Multi-level run protocol");
    protocol->add_option("--benchmark", proto_benchmarks, "Benchmark names")->required()->check(CLI::IsMember(names));
    protocol->add_option("--levels", preset, "Level preset: full or desk")
        ->check(CLI::IsMember({"full", "desk"}))
        ->capture_default_str();
    auto* runs_opt = protocol->add_option("--runs", proto_runs, "Runs (single custom level)");
    auto* period_opt = protocol->add_option("--period", proto_opts.period, "Period length (single custom level)");
    auto* periods_opt = protocol->add_option("--max-periods", proto_opts.max_periods, "Period cap (single custom level)");
    protocol->add_option("--threads", proto_opts.threads, "Worker threads")->capture_default_str();
    add_search_options(protocol, proto_opts);

    GridConfig grid_cfg;
    std::string grid_out = "stepstone-out";
    auto* grid = app.add_subcommand("grid", "Parameter grid search");
    grid->add_option("--benchmark", grid_cfg.benchmarks, "Benchmarks (default: preliminary tier)")
        ->check(CLI::IsMember(names));
    grid->add_option("--runs", grid_cfg.runs_per_cell, "Runs per cell and benchmark")->capture_default_str();
    grid->add_option("--budget", grid_cfg.budget, "Evaluations per run")->capture_default_str();
    grid->add_option("--seed", grid_cfg.seed_base, "Seed base")->capture_default_str();
    grid->add_option("--threads", grid_cfg.threads, "Worker threads")->capture_default_str();
    grid->add_option("--swap-grid", grid_cfg.swap_p, "swapP values");
    grid->add_option("--double-grid", grid_cfg.double_p, "doubleP values");
    grid->add_option("--copy-grid", grid_cfg.copy_p, "copyP values");
    grid->add_option("--period-grid", grid_cfg.periods, "Period lengths");
    grid->add_option("--train-count", grid_cfg.train_count, "Training instances")->capture_default_str();
    grid->add_option("--test-count", grid_cfg.test_count, "Test instances")->capture_default_str();
    grid->add_option("--out", grid_out, "Output directory")->envname("STEPSTONE_OUT")->capture_default_str();

    std::string program_path, problems_path;
    auto* exec = app.add_subcommand("exec", "Score a program file against a problem set");
    exec->add_option("program", program_path, "Program file")->required()->check(CLI::ExistingFile);
    exec->add_option("problems", problems_path, "Problem-set file")->required()->check(CLI::ExistingFile);

    std::string gen_benchmark, gen_split = "train", gen_profile, gen_out;
    std::uint64_t gen_seed = 1;
    std::size_t gen_count = 0;
    auto* gen = app.add_subcommand("gen", "Write a problem-set file");
    gen->add_option("--benchmark", gen_benchmark, "Benchmark name")->required()->check(CLI::IsMember(names));
    gen->add_option("--split", gen_split, "train or test")->check(CLI::IsMember({"train", "test"}))->capture_default_str();
    gen->add_option("--seed", gen_seed, "Data seed")->capture_default_str();
    gen->add_option("--count", gen_count, "Instances (default 200 train, 2000 test)");
    gen->add_option("--profile", gen_profile, "Machine profile override")->check(CLI::IsMember(profile_names()));
    gen->add_option("--out", gen_out, "Output file (default: stdout)");

    std::string trace_log, trace_out;
    auto* trace = app.add_subcommand("trace", "Trajectory table from a run log");
    trace->add_option("log", trace_log, "JSONL run log")->required()->check(CLI::ExistingFile);
    trace->add_option("--out", trace_out, "CSV file (default: stdout)");

    std::string catalog_out;
    auto* catalog = app.add_subcommand("catalog", "Print the benchmark catalog as markdown");
    catalog->add_option("--out", catalog_out, "Output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_opts, run_benchmark);
        if (*protocol) {
            const bool custom = runs_opt->count() + period_opt->count() + periods_opt->count() > 0;
            return cmd_protocol(proto_opts, proto_benchmarks, preset, proto_runs, custom);
        }
        if (*grid) {
            const GridResult result = grid_search(grid_cfg);
            auto csv = open_out(fs::path(grid_out) / "grid.csv");
            write_grid_csv(csv, result);
            write_grid_csv(std::cout, result);
            return 0;
        }
        if (*exec) {
            const auto [profile, program] = deserialize_any(read_file(program_path));
            ProblemSet set = load_problem_set(problems_path);
            if (!(*set.profile == *profile)) {
                std::cerr << "error: program profile " << profile->name << " does not match problem set profile "
                          << set.profile->name << '\n';
                return 2;
            }
            const Score s = eval_program(program, set);
            const double fraction =
                set.max_points() == 0 ? 1.0 : static_cast<double>(s.raw) / static_cast<double>(set.max_points());
            std::cout << "benchmark: " << set.benchmark << "\nsplit: " << set.split << "\ninstances: "
                      << set.instances.size() << "\nscore: " << s.raw << "/" << set.max_points()
                      << "\nscore with bonus: " << s.with_bonus << "\nfraction: " << fraction
                      << "\nperfect=" << (s.fully_correct ? "true" : "false") << '\n';
            return 0;
        }
        if (*gen) {
            const BenchmarkDef& def = benchmark_by_name(gen_benchmark);
            const Split split = gen_split == "train" ? Split::train : Split::test;
            const std::size_t count = gen_count != 0 ? gen_count : (split == Split::train ? kTrainCount : kTestCount);
            const MachineProfile* profile = gen_profile.empty() ? nullptr : &profile_by_name(gen_profile);
            const ProblemSet set = generate_problem_set(def, split, gen_seed, count, profile);
            if (gen_out.empty()) {
                write_problem_set(std::cout, set);
            } else {
                auto out = open_out(gen_out);
                write_problem_set(out, set);
            }
            return 0;
        }
        if (*trace) {
            std::ifstream in(trace_log);
            std::ofstream file;
            if (!trace_out.empty()) file = open_out(trace_out);
            std::ostream& out = trace_out.empty() ? std::cout : file;
            write_trajectory_header(out);
            std::string line, data_key;
            ProblemSet training, test;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const LoggedRun logged = parse_run_log_line(line);
                const std::string key = logged.benchmark + ' ' + logged.profile + ' ' +
                                        std::to_string(logged.seed_base) + ' ' + std::to_string(logged.train_count) +
                                        ' ' + std::to_string(logged.test_count);
                if (key != data_key) {
                    const BenchmarkDef& def = benchmark_by_name(logged.benchmark);
                    const MachineProfile* profile = &profile_by_name(logged.profile);
                    training = generate_training_set(def, train_data_seed(logged.seed_base), logged.train_count, profile);
                    test = generate_test_set(def, test_data_seed(logged.seed_base), logged.test_count, profile);
                    data_key = key;
                }
                write_trajectory_csv(out, export_trajectory(logged.record, training, test), logged.run);
            }
            return 0;
        }
        if (*catalog) {
            if (catalog_out.empty()) {
                std::cout << catalog_markdown();
            } else {
                auto out = open_out(catalog_out);
                out << catalog_markdown();
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
