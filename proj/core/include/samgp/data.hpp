#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "samgp/matrix.hpp"
#include "samgp/rng.hpp"

namespace samgp {

struct Dataset {
    Matrix features;
    std::vector<double> target;
    std::vector<double> feature_std; // population std (divide by N) per column
    std::string name;

    [[nodiscard]] std::size_t rows() const noexcept { return features.rows(); }
    [[nodiscard]] std::size_t cols() const noexcept { return features.cols(); }

    // Builds a dataset and computes feature_std. Throws IngestionError on shape mismatch
    // or non-finite cells.
    [[nodiscard]] static Dataset make(Matrix features, std::vector<double> target, std::string name);

    [[nodiscard]] Dataset select_rows(std::span<const std::size_t> indices) const;
};

struct SplitPair {
    Dataset train;
    Dataset test;
    double train_fraction{0.7};
};

// Population standard deviation of each column.
[[nodiscard]] std::vector<double> column_std(const Matrix& m);

// Column selector for the target: a header name or a 0-based index. Negative indices
// count from the end (-1 is the last column).
using TargetColumn = std::variant<std::string, long>;

struct CsvOptions {
    bool has_header{true};
    char delimiter{','};
};

[[nodiscard]] Dataset load_csv(const std::filesystem::path& path, const TargetColumn& target, const CsvOptions& opts = {});
void write_csv(const Dataset& d, const std::filesystem::path& path);

// Uniform random permutation split; train gets round(train_fraction * rows) rows and its
// feature_std is recomputed on the training rows only.
[[nodiscard]] SplitPair monte_carlo_split(const Dataset& d, double train_fraction, Rng& rng);

enum class SyntheticFn { Levy, Ackley, Rastrigin, Rosenbrock };

[[nodiscard]] double synth_levy(std::span<const double> x);
[[nodiscard]] double synth_ackley(std::span<const double> x);
[[nodiscard]] double synth_rastrigin(std::span<const double> x);
[[nodiscard]] double synth_rosenbrock(std::span<const double> x);

[[nodiscard]] double synth_eval(SyntheticFn fn, std::span<const double> x);
// Symmetric sampling box [-bound, bound] of each coordinate.
[[nodiscard]] double synth_bound(SyntheticFn fn) noexcept;
[[nodiscard]] std::string_view synth_name(SyntheticFn fn) noexcept;
// Throws ConfigError for an unknown name.
[[nodiscard]] SyntheticFn synth_from_name(std::string_view name);

inline constexpr SyntheticFn kAllSynthetic[] = {SyntheticFn::Levy, SyntheticFn::Ackley, SyntheticFn::Rastrigin,
                                                SyntheticFn::Rosenbrock};

// n_points i.i.d. uniform points in the function's box, target = fn(x).
[[nodiscard]] Dataset sample_synthetic(SyntheticFn fn, std::size_t n_points, Rng& rng, std::size_t dims = 2);

} // namespace samgp
