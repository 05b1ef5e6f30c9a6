#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "samgp/error.hpp"
#include "samgp/gpm.hpp"
#include "samgp/parallel.hpp"
#include "samgp/rng.hpp"

namespace samgp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kIngestion = 3;

TargetColumn parse_target(const std::string& s)
{
    long idx = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
    if (ec == std::errc{} && p == s.data() + s.size()) {
        return idx;
    }
    return s;
}

json opt_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from(const json& j)
{
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

json config_json(const RunConfig& c)
{
    return json{
        {"pop_size", c.pop_size},
        {"generations", c.generations},
        {"p_crossover", c.variation.p_crossover},
        {"p_mutation", c.variation.p_mutation},
        {"init_max_depth", c.variation.init_max_depth},
        {"constant_range", {c.variation.constant_min, c.variation.constant_max}},
        {"sam", {{"mode", std::string(to_string(c.sam.mode))}, {"n", c.sam.n}, {"epsilon", c.sam.epsilon}}},
        {"seed", c.seed},
        {"elitism_count", c.elitism_count},
        {"tournament", {c.tournament.qualifier, c.tournament.final_round}},
        {"gpm_every", c.gpm_every},
        {"gpm_tolerance", c.gpm_tolerance},
        {"max_size", c.max_size},
    };
}

RunConfig config_from_json(const json& j)
{
    RunConfig c;
    c.pop_size = j.at("pop_size").get<std::size_t>();
    c.generations = j.at("generations").get<std::size_t>();
    c.variation.p_crossover = j.at("p_crossover").get<double>();
    c.variation.p_mutation = j.at("p_mutation").get<double>();
    c.variation.init_max_depth = j.at("init_max_depth").get<int>();
    c.variation.constant_min = j.at("constant_range").at(0).get<double>();
    c.variation.constant_max = j.at("constant_range").at(1).get<double>();
    c.sam.mode = sam_mode_from_string(j.at("sam").at("mode").get<std::string>());
    c.sam.n = j.at("sam").at("n").get<std::size_t>();
    c.sam.epsilon = j.at("sam").at("epsilon").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.elitism_count = j.at("elitism_count").get<std::size_t>();
    c.tournament.qualifier = j.at("tournament").at(0).get<std::size_t>();
    c.tournament.final_round = j.at("tournament").at(1).get<std::size_t>();
    c.gpm_every = j.at("gpm_every").get<std::size_t>();
    c.gpm_tolerance = j.at("gpm_tolerance").get<double>();
    c.max_size = j.value("max_size", std::size_t{0});
    return c;
}

json data_json(const DataSource& d)
{
    json j{{"name", d.name()}, {"train_fraction", d.effective_train_fraction()}};
    if (d.csv) {
        j["csv"] = d.csv->string();
        j["target"] = d.target;
        j["has_header"] = d.has_header;
    } else {
        j["synthetic"] = *d.synthetic;
        j["n_points"] = d.n_points;
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text)
{
    // Write-then-rename so an interrupted run never leaves a half-written record behind.
    const auto tmp = fs::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out << text;
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

fs::path resolve_out_dir(const fs::path& flag)
{
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "samgp-out";
}

bool validate_source(const DataSource& d, std::ostream& err)
{
    if (d.csv.has_value() == d.synthetic.has_value()) {
        err << "error: exactly one data source is required (--data PATH or --synthetic NAME)\n";
        return false;
    }
    return true;
}

Dataset load_dataset(const DataSource& src, std::uint64_t data_seed)
{
    if (src.csv) {
        auto d = load_csv(*src.csv, parse_target(src.target), CsvOptions{src.has_header, ','});
        d.name = src.name();
        return d;
    }
    auto rng = Rng{data_seed};
    return sample_synthetic(synth_from_name(*src.synthetic), src.n_points, rng);
}

SplitPair split_dataset(const Dataset& d, const DataSource& src, std::uint64_t split_seed)
{
    auto rng = Rng{split_seed};
    return monte_carlo_split(d, src.effective_train_fraction(), rng);
}

// Runs `body`, mapping library exceptions to exit codes and diagnostics.
template <typename Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const IngestionError& e) {
        err << "ingestion error: " << e.what() << '\n';
        return kIngestion;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kUsage;
    } catch (const StructuralError& e) {
        err << "expression error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

std::string fmt_opt(const std::optional<double>& v)
{
    return v ? format_real(*v) : std::string("invalid");
}

} // namespace

std::string DataSource::name() const
{
    if (!label.empty()) {
        return label;
    }
    if (synthetic) {
        return *synthetic;
    }
    return csv ? csv->stem().string() : std::string("data");
}

SplitPair prepare_split(const DataSource& src, std::uint64_t data_seed, std::uint64_t split_seed)
{
    return split_dataset(load_dataset(src, data_seed), src, split_seed);
}

std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& algorithm, const std::string& problem, std::size_t run)
{
    return derive_seed(base_seed, {hash_string(algorithm), hash_string(problem), run});
}

std::uint64_t cell_data_seed(std::uint64_t base_seed, const std::string& problem, std::size_t run)
{
    return derive_seed(base_seed, {stream::synthetic, hash_string(problem), run});
}

fs::path run_record_path(const fs::path& dir, const std::string& problem, const std::string& algorithm, std::size_t run)
{
    return dir / problem / algorithm / ("run_" + std::to_string(run) + ".json");
}

void save_stats_csv(const RunResult& r, const fs::path& path)
{
    std::ostringstream os;
    write_stats_csv(r.stats, os);
    write_text(path, os.str());
}

void save_run_result(const RunResult& r, const fs::path& path, const std::string& problem)
{
    json stats = json::array();
    for (const auto& s : r.stats) {
        stats.push_back({
            {"generation", s.generation},
            {"pop_train_mean", opt_json(s.pop_train_mean)},
            {"pop_train_median", opt_json(s.pop_train_median)},
            {"pop_test_mean", opt_json(s.pop_test_mean)},
            {"pop_test_median", opt_json(s.pop_test_median)},
            {"elite_train", opt_json(s.elite_train)},
            {"elite_test", opt_json(s.elite_test)},
            {"mean_size", s.mean_size},
            {"mean_phenotype_size", opt_json(s.mean_phenotype_size)},
            {"mean_redundancy", opt_json(s.mean_redundancy)},
            {"mean_sharpness", opt_json(s.mean_sharpness)},
            {"invalid_train", s.invalid_train},
            {"invalid_test", s.invalid_test},
        });
    }
    json j{
        {"problem", problem},
        {"algorithm", algorithm_label(r.config.sam)},
        {"config", config_json(r.config)},
        {"final_elite", r.final_elite},
        {"final_elite_train", opt_json(r.final_elite_train)},
        {"final_elite_test", opt_json(r.final_elite_test)},
        {"elite_per_generation", r.elite_per_generation},
        {"sharpness_evaluations", r.sharpness_evaluations},
        {"noise_draws", r.noise_draws},
        {"wall_time_seconds", r.wall_time_seconds},
        {"stats", stats},
    };
    write_text(path, j.dump(1) + "\n");
}

RunResult load_run_result(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path.string() + "'");
    }
    const auto j = json::parse(in);
    RunResult r;
    r.config = config_from_json(j.at("config"));
    r.final_elite = j.at("final_elite").get<std::string>();
    r.final_elite_train = opt_from(j.at("final_elite_train"));
    r.final_elite_test = opt_from(j.at("final_elite_test"));
    r.elite_per_generation = j.at("elite_per_generation").get<std::vector<std::string>>();
    r.sharpness_evaluations = j.at("sharpness_evaluations").get<std::size_t>();
    r.noise_draws = j.at("noise_draws").get<std::size_t>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    for (const auto& s : j.at("stats")) {
        GenerationStats g;
        g.generation = s.at("generation").get<std::size_t>();
        g.pop_train_mean = opt_from(s.at("pop_train_mean"));
        g.pop_train_median = opt_from(s.at("pop_train_median"));
        g.pop_test_mean = opt_from(s.at("pop_test_mean"));
        g.pop_test_median = opt_from(s.at("pop_test_median"));
        g.elite_train = opt_from(s.at("elite_train"));
        g.elite_test = opt_from(s.at("elite_test"));
        g.mean_size = s.at("mean_size").get<double>();
        g.mean_phenotype_size = opt_from(s.at("mean_phenotype_size"));
        g.mean_redundancy = opt_from(s.at("mean_redundancy"));
        g.mean_sharpness = opt_from(s.at("mean_sharpness"));
        g.invalid_train = s.at("invalid_train").get<std::size_t>();
        g.invalid_test = s.at("invalid_test").get<std::size_t>();
        r.stats.push_back(g);
    }
    return r;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err)
{
    if (!validate_source(opts.data, err)) {
        return kUsage;
    }
    return guarded(err, [&] {
        const auto seed = opts.run.seed;
        const auto split = prepare_split(opts.data, derive_seed(seed, {stream::synthetic}), derive_seed(seed, {stream::split}));
        const auto result = run(opts.run, split);

        const auto dir = resolve_out_dir(opts.out_dir);
        fs::create_directories(dir);
        json echo{{"command", "run"}, {"data", data_json(opts.data)}, {"config", config_json(opts.run)}};
        write_text(dir / "config.json", echo.dump(1) + "\n");
        save_stats_csv(result, dir / "stats.csv");
        save_run_result(result, dir / "run.json", opts.data.name());
        write_text(dir / "elite.txt", result.final_elite + "\n");

        out << "problem: " << opts.data.name() << " (" << split.train.rows() << " train / " << split.test.rows()
            << " test rows)\n";
        out << "algorithm: " << algorithm_label(opts.run.sam) << '\n';
        out << "elite: " << result.final_elite << '\n';
        out << "elite train R2: " << fmt_opt(result.final_elite_train) << '\n';
        out << "elite test R2: " << fmt_opt(result.final_elite_test) << '\n';
        out << "outputs: " << dir.string() << '\n';
        return kOk;
    });
}

int cmd_grid(const GridOptions& opts, std::ostream& out, std::ostream& err)
{
    if (opts.problems.empty() || opts.algorithms.empty() || opts.runs_per_cell == 0) {
        err << "error: the grid needs at least one problem, one algorithm and one run per cell\n";
        return kUsage;
    }
    for (const auto& p : opts.problems) {
        if (!validate_source(p, err)) {
            return kUsage;
        }
    }
    return guarded(err, [&] {
        const auto dir = resolve_out_dir(opts.out_dir);
        fs::create_directories(dir);

        // CSV problems are loaded once; synthetic data is resampled per run index.
        std::map<std::string, Dataset> loaded;
        for (const auto& p : opts.problems) {
            if (p.csv) {
                loaded.emplace(p.name(), load_dataset(p, 0));
            }
        }

        struct Cell {
            const DataSource* problem;
            const Algorithm* algorithm;
            std::size_t run;
        };
        std::vector<Cell> cells;
        for (const auto& p : opts.problems) {
            for (const auto& a : opts.algorithms) {
                for (std::size_t k = 0; k < opts.runs_per_cell; ++k) {
                    cells.push_back({&p, &a, k});
                }
            }
        }

        json echo{{"command", "grid"},
                  {"runs_per_cell", opts.runs_per_cell},
                  {"base_seed", opts.base_seed},
                  {"config", config_json(opts.run)}};
        for (const auto& p : opts.problems) {
            echo["problems"].push_back(data_json(p));
        }
        for (const auto& a : opts.algorithms) {
            echo["algorithms"].push_back(a.label);
        }
        write_text(dir / "config.json", echo.dump(1) + "\n");

        std::mutex io;
        std::size_t skipped = 0;
        std::size_t failed = 0;
        parallel_for(cells.size(), opts.jobs, [&](std::size_t c) {
            const auto& cell = cells[c];
            const auto problem = cell.problem->name();
            const auto& label = cell.algorithm->label;
            const auto record = run_record_path(dir, problem, label, cell.run);
            if (fs::exists(record)) {
                std::lock_guard lock(io);
                ++skipped;
                return;
            }
            const auto error_file = fs::path(record).replace_extension(".error");
            try {
                fs::create_directories(record.parent_path());
                const auto data_seed = cell_data_seed(opts.base_seed, problem, cell.run);
                const auto split = cell.problem->csv ? split_dataset(loaded.at(problem), *cell.problem, data_seed)
                                                     : prepare_split(*cell.problem, data_seed, derive_seed(data_seed, {stream::split}));
                RunConfig cfg = opts.run;
                cfg.sam = cell.algorithm->sam;
                cfg.seed = cell_seed(opts.base_seed, label, problem, cell.run);
                cfg.threads = 1;
                const auto result = run(cfg, split);
                save_stats_csv(result, record.parent_path() / ("stats_" + std::to_string(cell.run) + ".csv"));
                save_run_result(result, record, problem);
                fs::remove(error_file);
                std::lock_guard lock(io);
                out << problem << ' ' << label << " run " << cell.run << ": elite test R2 "
                    << fmt_opt(result.final_elite_test) << '\n';
            } catch (const std::exception& e) {
                std::lock_guard lock(io);
                ++failed;
                err << problem << ' ' << label << " run " << cell.run << " failed: " << e.what() << '\n';
                std::ofstream(error_file) << e.what() << '\n';
            }
        });

        // Curves and the summary are rebuilt from the stored records, so a resumed grid
        // produces the same files as an uninterrupted one.
        std::vector<CurveSet> curves;
        std::ostringstream finals;
        finals << "problem,algorithm,run,elite_train,elite_test,final_mean_size,final_mean_redundancy\n";
        for (const auto& p : opts.problems) {
            for (const auto& a : opts.algorithms) {
                CurveSet set{p.name(), a.label, {}};
                for (std::size_t k = 0; k < opts.runs_per_cell; ++k) {
                    const auto record = run_record_path(dir, p.name(), a.label, k);
                    if (!fs::exists(record)) {
                        continue;
                    }
                    auto r = load_run_result(record);
                    const auto& last = r.stats.back();
                    finals << p.name() << ',' << a.label << ',' << k << ','
                           << (r.final_elite_train ? format_real(*r.final_elite_train) : "") << ','
                           << (r.final_elite_test ? format_real(*r.final_elite_test) : "") << ','
                           << format_real(last.mean_size) << ','
                           << (last.mean_redundancy ? format_real(*last.mean_redundancy) : "") << '\n';
                    set.runs.push_back(std::move(r.stats));
                }
                if (!set.runs.empty()) {
                    curves.push_back(std::move(set));
                }
            }
        }
        write_text(dir / "finals.csv", finals.str());
        if (!curves.empty()) {
            (void)export_curves(curves, dir / "curves");
        }
        out << "grid: " << cells.size() << " cells, " << skipped << " already complete, " << failed << " failed\n";
        return failed == 0 ? kOk : kFailure;
    });
}

int cmd_rank(const RankOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (!fs::is_directory(opts.grid_dir)) {
            err << "error: grid directory '" << opts.grid_dir.string() << "' does not exist\n";
            return kUsage;
        }
        // problem -> algorithm -> final elite test R² of every run
        std::map<std::string, std::map<std::string, std::vector<std::optional<double>>>> finals;
        for (const auto& pdir : fs::directory_iterator(opts.grid_dir)) {
            if (!pdir.is_directory() || pdir.path().filename() == "curves") {
                continue;
            }
            for (const auto& adir : fs::directory_iterator(pdir.path())) {
                if (!adir.is_directory()) {
                    continue;
                }
                for (const auto& f : fs::directory_iterator(adir.path())) {
                    const auto name = f.path().filename().string();
                    if (name.starts_with("run_") && f.path().extension() == ".json") {
                        finals[pdir.path().filename().string()][adir.path().filename().string()].push_back(
                            load_run_result(f.path()).final_elite_test);
                    }
                }
            }
        }
        if (finals.empty()) {
            err << "error: no run records under '" << opts.grid_dir.string() << "'\n";
            return kUsage;
        }

        std::vector<std::string> problems;
        std::vector<Algorithm> algorithms;
        CellValues values;
        for (const auto& [problem, by_alg] : finals) {
            problems.push_back(problem);
            for (const auto& [label, runs] : by_alg) {
                if (std::none_of(algorithms.begin(), algorithms.end(), [&](const Algorithm& a) { return a.label == label; })) {
                    algorithms.push_back(parse_algorithm(label));
                }
                double sum = 0.0;
                std::size_t n = 0;
                for (const auto& v : runs) {
                    if (v) {
                        sum += *v;
                        ++n;
                    }
                }
                values[{problem, label}] = n == 0 ? -HUGE_VAL : sum / static_cast<double>(n);
            }
        }
        std::stable_sort(algorithms.begin(), algorithms.end(), [](const Algorithm& a, const Algorithm& b) {
            return std::tuple(static_cast<int>(a.sam.mode), a.sam.n, a.sam.epsilon) <
                   std::tuple(static_cast<int>(b.sam.mode), b.sam.n, b.sam.epsilon);
        });
        std::vector<std::string> labels;
        for (const auto& a : algorithms) {
            labels.push_back(a.label);
        }

        const auto table = rank_report(labels, problems, values);
        const auto text = format_rank_table(table);
        const auto dir = opts.out_dir.empty() ? opts.grid_dir : opts.out_dir;
        fs::create_directories(dir);
        write_text(dir / "rank_table.txt", text);
        write_text(dir / "rank_table.csv", rank_table_csv(table));
        out << text;
        for (auto mode : {SamMode::In, SamMode::Out}) {
            if (const auto best = best_in_family(table, mode)) {
                out << "best " << (mode == SamMode::In ? "SAM-IN" : "SAM-OUT") << ": " << best->first << " ("
                    << format_real(best->second) << ")\n";
            }
        }
        return kOk;
    });
}

int cmd_phenotype(const PhenotypeOptions& opts, std::ostream& out, std::ostream& err)
{
    if (!validate_source(opts.data, err)) {
        return kUsage;
    }
    if (opts.tree.empty()) {
        err << "error: a tree is required (--tree EXPR or --tree-file PATH)\n";
        return kUsage;
    }
    return guarded(err, [&] {
        const auto tree = ExprTree::parse(opts.tree);
        const auto split = prepare_split(opts.data, derive_seed(opts.seed, {stream::synthetic}),
                                         derive_seed(opts.seed, {stream::split}));
        const auto report = extract_phenotype(tree, split.train.features, opts.tolerance);
        out << "genotype: " << tree.to_string() << '\n';
        out << "phenotype: " << report.phenotype.to_string() << '\n';
        out << "genotype_size: " << report.genotype_size << '\n';
        out << "phenotype_size: " << report.phenotype_size << '\n';
        out << "redundancy: " << report.redundancy << '\n';
        return kOk;
    });
}

namespace {

void add_data_options(CLI::App& app, DataSource& d, std::string& csv, std::string& synthetic, double& fraction)
{
    app.add_option("--data", csv, "CSV file with features and a target column");
    app.add_option("--synthetic", synthetic, "Synthetic benchmark: levy, ackley, rastrigin, rosenbrock");
    app.add_option("--target", d.target, "Target column: header name or index (negative counts from the end)")
        ->capture_default_str();
    app.add_flag("!--no-header", d.has_header, "The CSV has no header row");
    app.add_option("--n-points", d.n_points, "Points sampled for a synthetic problem")->capture_default_str();
    app.add_option("--train-fraction", fraction, "Training fraction (default 0.5 synthetic, 0.7 CSV)");
}

void finish_data(CLI::App& app, DataSource& d, const std::string& csv, const std::string& synthetic, double fraction)
{
    if (app.count("--data") > 0) {
        d.csv = csv;
    }
    if (app.count("--synthetic") > 0) {
        d.synthetic = synthetic;
    }
    if (app.count("--train-fraction") > 0) {
        d.train_fraction = fraction;
    }
}

void add_run_config_options(CLI::App& app, RunConfig& c, std::string& mode)
{
    app.add_option("--pop-size", c.pop_size, "Population size")->capture_default_str();
    app.add_option("--generations", c.generations, "Number of generations")->capture_default_str();
    app.add_option("--p-crossover", c.variation.p_crossover, "Crossover probability")->capture_default_str();
    app.add_option("--p-mutation", c.variation.p_mutation, "Mutation probability")->capture_default_str();
    app.add_option("--init-depth", c.variation.init_max_depth, "Maximum depth of ramped half-and-half")
        ->capture_default_str();
    app.add_option("--elitism", c.elitism_count, "Elites copied into the next generation")->capture_default_str();
    app.add_option("--gpm-every", c.gpm_every, "Measure phenotypes every k-th generation")->capture_default_str();
    app.add_option("--max-size", c.max_size, "Node cap for offspring (0: unlimited)")->capture_default_str();
    app.add_option("--threads", c.threads, "Worker threads")->capture_default_str();
    app.add_option("--sam", mode, "Sharpness criterion: none, in, out")->capture_default_str();
    app.add_option("--epsilon", c.sam.epsilon, "SAM perturbation magnitude")->capture_default_str();
    app.add_option("--n", c.sam.n, "SAM perturbation count")->capture_default_str();
}

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tree-based genetic programming for symbolic regression with sharpness-aware selection", "samgp"};
    app.require_subcommand(1);

    // run
    RunOptions run_opts;
    std::string run_csv;
    std::string run_synth;
    double run_fraction = 0.0;
    std::string run_mode = "none";
    std::string run_out;
    auto* run_cmd = app.add_subcommand("run", "Execute one evolutionary run");
    add_data_options(*run_cmd, run_opts.data, run_csv, run_synth, run_fraction);
    add_run_config_options(*run_cmd, run_opts.run, run_mode);
    run_cmd->add_option("--seed", run_opts.run.seed, "Random seed")->capture_default_str();
    run_cmd->add_option("--out", run_out, std::string("Output directory (default $") + kOutDirEnv + " or samgp-out)");

    // grid
    GridOptions grid_opts;
    std::vector<std::string> grid_problems;
    std::string grid_algorithms = "all";
    std::string grid_mode = "none";
    std::string grid_out;
    std::string grid_target = "-1";
    bool grid_header = true;
    double grid_fraction = 0.0;
    std::size_t grid_points = 100;
    auto* grid_cmd = app.add_subcommand("grid", "Run the algorithms x problems x runs experiment grid (resumable)");
    grid_cmd->add_option("--problem", grid_problems,
                         "Problem: a synthetic name or NAME=PATH for a CSV (repeatable; default: the four synthetic)");
    grid_cmd->add_option("--algorithms", grid_algorithms,
                         "Comma-separated labels (GP, SAM-IN_n10_e0.1, ...), 'all' or 'recommended'")
        ->capture_default_str();
    grid_cmd->add_option("--runs", grid_opts.runs_per_cell, "Runs per cell")->capture_default_str();
    grid_cmd->add_option("--base-seed", grid_opts.base_seed, "Base seed")->capture_default_str();
    grid_cmd->add_option("--jobs", grid_opts.jobs, "Cells executed concurrently")->capture_default_str();
    grid_cmd->add_option("--target", grid_target, "Target column of CSV problems")->capture_default_str();
    grid_cmd->add_flag("!--no-header", grid_header, "CSV problems have no header row");
    grid_cmd->add_option("--train-fraction", grid_fraction, "Training fraction (default 0.5 synthetic, 0.7 CSV)");
    grid_cmd->add_option("--n-points", grid_points, "Points sampled for synthetic problems")->capture_default_str();
    grid_cmd->add_option("--out", grid_out, std::string("Output directory (default $") + kOutDirEnv + " or samgp-out)");
    add_run_config_options(*grid_cmd, grid_opts.run, grid_mode);

    // rank
    RankOptions rank_opts;
    std::string rank_grid;
    std::string rank_out;
    auto* rank_cmd = app.add_subcommand("rank", "Rank final elite test R2 across a completed grid");
    rank_cmd->add_option("--grid", rank_grid, "Grid output directory")->required();
    rank_cmd->add_option("--out", rank_out, "Where to write rank_table.txt/csv (default: the grid directory)");

    // phenotype
    PhenotypeOptions pheno_opts;
    std::string pheno_csv;
    std::string pheno_synth;
    double pheno_fraction = 0.0;
    std::string tree_file;
    auto* pheno_cmd = app.add_subcommand("phenotype", "Map a serialized tree to its phenotype and report redundancy");
    pheno_cmd->add_option("--tree", pheno_opts.tree, "Tree in prefix form, e.g. \"(add x0 0.0)\"");
    pheno_cmd->add_option("--tree-file", tree_file, "File holding a serialized tree");
    pheno_cmd->add_option("--tol", pheno_opts.tolerance, "Relative tolerance")->capture_default_str();
    pheno_cmd->add_option("--seed", pheno_opts.seed, "Seed for sampling/splitting the data")->capture_default_str();
    add_data_options(*pheno_cmd, pheno_opts.data, pheno_csv, pheno_synth, pheno_fraction);

    // synth
    std::string synth_name_opt;
    std::string synth_path;
    std::size_t synth_points = 100;
    std::uint64_t synth_seed = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Export a sampled synthetic benchmark as CSV");
    synth_cmd->add_option("--synthetic", synth_name_opt, "levy, ackley, rastrigin, rosenbrock")->required();
    synth_cmd->add_option("--n-points", synth_points, "Number of points")->capture_default_str();
    synth_cmd->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_path, "Output CSV path")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run_cmd) {
            finish_data(*run_cmd, run_opts.data, run_csv, run_synth, run_fraction);
            run_opts.run.sam.mode = sam_mode_from_string(run_mode);
            run_opts.out_dir = run_out;
            return cmd_run(run_opts, out, err);
        }
        if (*grid_cmd) {
            if (grid_problems.empty()) {
                for (auto fn : kAllSynthetic) {
                    grid_problems.emplace_back(synth_name(fn));
                }
            }
            for (const auto& p : grid_problems) {
                DataSource d;
                if (const auto eq = p.find('='); eq != std::string::npos) {
                    d.label = p.substr(0, eq);
                    d.csv = fs::path(p.substr(eq + 1));
                } else {
                    d.synthetic = p;
                    (void)synth_from_name(p);
                }
                d.target = grid_target;
                d.has_header = grid_header;
                d.n_points = grid_points;
                if (grid_cmd->count("--train-fraction") > 0) {
                    d.train_fraction = grid_fraction;
                }
                grid_opts.problems.push_back(d);
            }
            if (grid_algorithms == "all") {
                grid_opts.algorithms = default_algorithm_grid();
            } else if (grid_algorithms == "recommended") {
                grid_opts.algorithms = {parse_algorithm("GP"), parse_algorithm("SAM-IN_n10_e0.1"),
                                        parse_algorithm("SAM-OUT_n20_e0.1")};
            } else {
                for (const auto& label : split_commas(grid_algorithms)) {
                    grid_opts.algorithms.push_back(parse_algorithm(label));
                }
            }
            grid_opts.out_dir = grid_out;
            return cmd_grid(grid_opts, out, err);
        }
        if (*rank_cmd) {
            rank_opts.grid_dir = rank_grid;
            rank_opts.out_dir = rank_out;
            return cmd_rank(rank_opts, out, err);
        }
        if (*pheno_cmd) {
            finish_data(*pheno_cmd, pheno_opts.data, pheno_csv, pheno_synth, pheno_fraction);
            if (!tree_file.empty()) {
                std::ifstream in(tree_file);
                if (!in) {
                    err << "error: cannot read tree file '" << tree_file << "'\n";
                    return kUsage;
                }
                std::ostringstream ss;
                ss << in.rdbuf();
                pheno_opts.tree = ss.str();
            }
            return cmd_phenotype(pheno_opts, out, err);
        }
        if (*synth_cmd) {
            return guarded(err, [&] {
                auto rng = Rng{synth_seed};
                const auto d = sample_synthetic(synth_from_name(synth_name_opt), synth_points, rng);
                write_csv(d, synth_path);
                out << "wrote " << d.rows() << " rows to " << synth_path << '\n';
                return kOk;
            });
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace samgp::cli
