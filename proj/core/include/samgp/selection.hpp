#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "samgp/eval.hpp"
#include "samgp/expr.hpp"
#include "samgp/fitness.hpp"
#include "samgp/rng.hpp"
#include "samgp/sharpness.hpp"

namespace samgp {

struct Individual {
    ExprTree tree;
    Semantics semantics_train;
    Fitness fitness_train;
    Fitness fitness_test; // reporting only, never read by selection
    Sharpness sharpness;
    std::optional<std::size_t> phenotype_size;
};

enum class Criterion { Fitness, Sharpness };

struct TournamentSizes {
    std::size_t qualifier{6};
    std::size_t final_round{3};
};

// Best of the given contestants on one criterion; ties broken uniformly at random among
// tied contestant slots.
[[nodiscard]] std::size_t best_of(std::span<const Individual> pop, std::span<const std::size_t> contestants,
                                  Criterion criterion, Rng& rng);

// `size` uniform draws with replacement from the whole population, then best_of.
[[nodiscard]] std::size_t tournament(std::span<const Individual> pop, std::size_t size, Criterion criterion, Rng& rng);

struct Selection {
    std::size_t index;
    Criterion first;
};

// Double tournament: `final_round` qualifier tournaments of size `qualifier` on the first
// criterion; the qualifier winners then compete on the second criterion. The criterion
// order is a fair coin per selection event. With SamMode::None both rounds use fitness
// and no coin is drawn.
[[nodiscard]] Selection double_tournament(std::span<const Individual> pop, TournamentSizes sizes, SamMode mode, Rng& rng);

} // namespace samgp
