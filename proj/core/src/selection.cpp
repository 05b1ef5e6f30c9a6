#include "samgp/selection.hpp"

#include <vector>

#include "samgp/error.hpp"

namespace samgp {

namespace {

// -1: a better than b, 0: tie, 1: b better.
int compare(const Individual& a, const Individual& b, Criterion c) noexcept
{
    if (c == Criterion::Fitness) {
        return better(a.fitness_train, b.fitness_train) ? -1 : better(b.fitness_train, a.fitness_train) ? 1 : 0;
    }
    return flatter(a.sharpness, b.sharpness) ? -1 : flatter(b.sharpness, a.sharpness) ? 1 : 0;
}

} // namespace

std::size_t best_of(std::span<const Individual> pop, std::span<const std::size_t> contestants, Criterion criterion,
                    Rng& rng)
{
    std::size_t best = contestants[0];
    std::size_t ties = 1;
    for (std::size_t k = 1; k < contestants.size(); ++k) {
        const auto c = contestants[k];
        const int cmp = compare(pop[c], pop[best], criterion);
        if (cmp < 0) {
            best = c;
            ties = 1;
        } else if (cmp == 0) {
            // Reservoir sampling over the tied slots.
            ++ties;
            if (std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng) == 0) {
                best = c;
            }
        }
    }
    return best;
}

std::size_t tournament(std::span<const Individual> pop, std::size_t size, Criterion criterion, Rng& rng)
{
    std::vector<std::size_t> contestants(size);
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    for (auto& c : contestants) {
        c = pick(rng);
    }
    return best_of(pop, contestants, criterion, rng);
}

Selection double_tournament(std::span<const Individual> pop, TournamentSizes sizes, SamMode mode, Rng& rng)
{
    if (pop.empty()) {
        throw ConfigError("cannot select from an empty population");
    }
    if (sizes.qualifier == 0 || sizes.final_round == 0) {
        throw ConfigError("tournament sizes must be at least 1");
    }
    Criterion first = Criterion::Fitness;
    Criterion second = Criterion::Fitness;
    if (mode != SamMode::None) {
        const bool fitness_first = std::bernoulli_distribution(0.5)(rng);
        first = fitness_first ? Criterion::Fitness : Criterion::Sharpness;
        second = fitness_first ? Criterion::Sharpness : Criterion::Fitness;
    }
    std::vector<std::size_t> finalists(sizes.final_round);
    for (auto& f : finalists) {
        f = tournament(pop, sizes.qualifier, first, rng);
    }
    return {best_of(pop, finalists, second, rng), first};
}

} // namespace samgp
