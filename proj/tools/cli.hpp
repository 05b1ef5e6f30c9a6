#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "samgp/data.hpp"
#include "samgp/evolve.hpp"
#include "samgp/report.hpp"

namespace samgp::cli {

inline constexpr const char* kOutDirEnv = "SAMGP_OUT_DIR";

// Where the data of a run comes from: a CSV file or a synthetic benchmark.
struct DataSource {
    std::string label; // optional problem name; defaults to the synthetic name or CSV stem
    std::optional<std::filesystem::path> csv;
    std::optional<std::string> synthetic;
    std::string target{"-1"}; // header name or integer index (negative counts from the end)
    bool has_header{true};
    std::size_t n_points{100};
    std::optional<double> train_fraction; // default: 0.5 synthetic, 0.7 CSV

    [[nodiscard]] double effective_train_fraction() const { return train_fraction.value_or(synthetic ? 0.5 : 0.7); }
    // Problem name used in grid layouts and reports.
    [[nodiscard]] std::string name() const;
};

// Loads the CSV or samples the synthetic function (using `data_seed`), then splits with
// `split_seed`.
[[nodiscard]] SplitPair prepare_split(const DataSource& src, std::uint64_t data_seed, std::uint64_t split_seed);

struct RunOptions {
    DataSource data;
    RunConfig run;
    std::filesystem::path out_dir;
};

struct GridOptions {
    std::vector<DataSource> problems;
    std::vector<Algorithm> algorithms;
    std::size_t runs_per_cell{60};
    std::uint64_t base_seed{0};
    RunConfig run; // sam and seed are overwritten per cell
    std::size_t jobs{1};
    std::filesystem::path out_dir;
};

struct RankOptions {
    std::filesystem::path grid_dir;
    std::filesystem::path out_dir;
};

struct PhenotypeOptions {
    std::string tree;
    DataSource data;
    double tolerance{kDefaultPhenotypeTolerance};
    std::uint64_t seed{0};
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_grid(const GridOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rank(const RankOptions& opts, std::ostream& out, std::ostream& err);
int cmd_phenotype(const PhenotypeOptions& opts, std::ostream& out, std::ostream& err);

// Seeds of grid cell (algorithm, problem, run). The data seed ignores the algorithm so all
// algorithms of one run index see the same split.
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& algorithm, const std::string& problem,
                                      std::size_t run);
[[nodiscard]] std::uint64_t cell_data_seed(std::uint64_t base_seed, const std::string& problem, std::size_t run);

// Grid layout: <dir>/<problem>/<algorithm>/run_<k>.json and stats_<k>.csv.
[[nodiscard]] std::filesystem::path run_record_path(const std::filesystem::path& dir, const std::string& problem,
                                                    const std::string& algorithm, std::size_t run);

void save_run_result(const RunResult& r, const std::filesystem::path& path, const std::string& problem);
[[nodiscard]] RunResult load_run_result(const std::filesystem::path& path);
void save_stats_csv(const RunResult& r, const std::filesystem::path& path);

// Parses argv (without the program name) and dispatches to a subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace samgp::cli
