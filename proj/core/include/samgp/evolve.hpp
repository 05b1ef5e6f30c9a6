#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "samgp/data.hpp"
#include "samgp/expr.hpp"
#include "samgp/gpm.hpp"
#include "samgp/selection.hpp"
#include "samgp/sharpness.hpp"

namespace samgp {

struct RunConfig {
    std::size_t pop_size{100};
    std::size_t generations{50};
    VariationConfig variation{};
    SamConfig sam{};
    std::uint64_t seed{0};
    std::size_t elitism_count{1};
    TournamentSizes tournament{};
    // Phenotype measurement on every k-th generation (the last generation is always measured).
    std::size_t gpm_every{1};
    double gpm_tolerance{kDefaultPhenotypeTolerance};
    // Offspring with more nodes than this are replaced by a copy of their first parent.
    // 0 disables the cap, which is the default: growth is otherwise unconstrained.
    std::size_t max_size{0};
    // Worker threads for evaluation, scoring and breeding. Results do not depend on it.
    std::size_t threads{1};

    void validate() const;
};

struct GenerationStats {
    std::size_t generation{0};
    std::optional<double> pop_train_mean;
    std::optional<double> pop_train_median;
    std::optional<double> pop_test_mean;
    std::optional<double> pop_test_median;
    std::optional<double> elite_train;
    std::optional<double> elite_test;
    double mean_size{0.0};
    std::optional<double> mean_phenotype_size;
    std::optional<double> mean_redundancy;
    std::optional<double> mean_sharpness;
    std::size_t invalid_train{0};
    std::size_t invalid_test{0};

    friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

struct RunResult {
    std::vector<GenerationStats> stats;        // generations + 1 entries
    std::vector<std::string> elite_per_generation;
    std::string final_elite;
    std::optional<double> final_elite_train;
    std::optional<double> final_elite_test;
    RunConfig config;
    double wall_time_seconds{0.0};
    std::size_t sharpness_evaluations{0};
    std::size_t noise_draws{0};
};

// Everything except wall time.
[[nodiscard]] bool same_outcome(const RunResult& a, const RunResult& b);

// Generational state of one run. Generation 0 is built by the constructor.
class Evolution {
public:
    // The split is referenced, not copied, and must outlive the Evolution.
    Evolution(const RunConfig& cfg, const SplitPair& split);

    // Breeds, evaluates and scores the next generation.
    void step();

    [[nodiscard]] std::size_t generation() const noexcept { return generation_; }
    [[nodiscard]] const std::vector<Individual>& population() const noexcept { return population_; }
    [[nodiscard]] std::size_t elite_index() const;
    [[nodiscard]] GenerationStats stats() const;

    [[nodiscard]] std::size_t sharpness_evaluations() const noexcept { return sharpness_evaluations_.load(); }
    [[nodiscard]] std::size_t noise_draws() const noexcept { return noise_draws_; }
    // Noise shared by the current generation's SAM-IN scoring, if any.
    [[nodiscard]] const std::optional<SamInGenerationNoise>& current_noise() const noexcept { return noise_; }

private:
    Individual make_individual(ExprTree tree) const;
    void score_generation();
    void measure_phenotypes();
    [[nodiscard]] std::vector<std::size_t> elite_indices(std::size_t k) const;

    RunConfig cfg_;
    const SplitPair& split_;
    std::size_t generation_{0};
    std::vector<Individual> population_;
    std::optional<SamInGenerationNoise> noise_;
    std::atomic<std::size_t> sharpness_evaluations_{0};
    std::size_t noise_draws_{0};
};

[[nodiscard]] RunResult run(const RunConfig& cfg, const SplitPair& split);

// CSV with header:
// generation,pop_train_mean,pop_train_median,pop_test_mean,pop_test_median,elite_train,
// elite_test,mean_size,mean_phenotype_size,mean_redundancy,mean_sharpness,invalid_train,invalid_test
// Missing values are empty cells.
void write_stats_csv(const std::vector<GenerationStats>& stats, std::ostream& out);

} // namespace samgp
