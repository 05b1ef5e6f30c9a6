#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "samgp/evolve.hpp"
#include "samgp/sharpness.hpp"

namespace samgp {

// Algorithm labels: "GP" for the baseline, "SAM-IN_n10_e0.1" / "SAM-OUT_n20_e0.5" for the
// sharpness-aware variants.
struct Algorithm {
    std::string label;
    SamConfig sam;
};

[[nodiscard]] std::string algorithm_label(const SamConfig& sam);
// Throws ConfigError for a label that is not in the form above.
[[nodiscard]] Algorithm parse_algorithm(const std::string& label);
// GP plus every mode x n x epsilon combination, in column order.
[[nodiscard]] std::vector<Algorithm> algorithm_grid(std::span<const SamMode> modes, std::span<const std::size_t> ns,
                                                    std::span<const double> epsilons);
// GP plus SAM-IN and SAM-OUT over n in {10, 20, 50} and epsilon in {0.1, 0.2, 0.5, 1.0}.
[[nodiscard]] std::vector<Algorithm> default_algorithm_grid();

// Ranks of values, ascending: the smallest value gets rank 1, ties share the mean rank.
[[nodiscard]] std::vector<double> average_ranks(std::span<const double> values);

struct RankTable {
    std::vector<std::string> algorithms;
    std::vector<std::string> problems;
    std::vector<std::vector<double>> ranks; // [problem][algorithm]
    std::vector<double> average;            // per algorithm over problems
    std::map<std::string, double> family_average; // "GP", "SAM-IN", "SAM-OUT"
};

// (problem, algorithm) -> mean final-generation elite test R²
using CellValues = std::map<std::pair<std::string, std::string>, double>;

// Throws ReportError naming the first missing (problem, algorithm) cell.
[[nodiscard]] RankTable rank_report(const std::vector<std::string>& algorithms, const std::vector<std::string>& problems,
                                    const CellValues& values);

// Label with the largest average rank among the algorithms of one family.
[[nodiscard]] std::optional<std::pair<std::string, double>> best_in_family(const RankTable& table, SamMode mode);

// Text table: one IN row and one OUT row over the (n, epsilon) columns, an AVG row of the
// two, and the GP average in the first column.
[[nodiscard]] std::string format_rank_table(const RankTable& table);
[[nodiscard]] std::string rank_table_csv(const RankTable& table);

struct CurveSet {
    std::string problem;
    std::string algorithm;
    std::vector<std::vector<GenerationStats>> runs;
};

struct Metric {
    const char* name;
    std::optional<double> (*get)(const GenerationStats&);
};
[[nodiscard]] std::span<const Metric> curve_metrics();

// One CSV per (problem, metric) named "<problem>_<metric>.csv" with header
// generation,algorithm,mean,std (population std across runs; runs missing a value are
// skipped). Returns the files written. Throws ReportError on I/O failure.
std::vector<std::filesystem::path> export_curves(const std::vector<CurveSet>& curves, const std::filesystem::path& dir);

} // namespace samgp
