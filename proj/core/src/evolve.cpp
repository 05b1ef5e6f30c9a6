#include "samgp/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>

#include "samgp/error.hpp"
#include "samgp/eval.hpp"
#include "samgp/fitness.hpp"
#include "samgp/parallel.hpp"

namespace samgp {

void RunConfig::validate() const
{
    if (pop_size == 0) {
        throw ConfigError("population size must be at least 1");
    }
    if (elitism_count > pop_size) {
        throw ConfigError("elitism count cannot exceed the population size");
    }
    if (gpm_every == 0) {
        throw ConfigError("phenotype measurement interval must be at least 1");
    }
    if (!(gpm_tolerance > 0.0)) {
        throw ConfigError("phenotype tolerance must be positive");
    }
    if (tournament.qualifier == 0 || tournament.final_round == 0) {
        throw ConfigError("tournament sizes must be at least 1");
    }
    variation.validate();
    sam.validate();
}

bool same_outcome(const RunResult& a, const RunResult& b)
{
    return a.stats == b.stats && a.elite_per_generation == b.elite_per_generation && a.final_elite == b.final_elite &&
           a.final_elite_train == b.final_elite_train && a.final_elite_test == b.final_elite_test &&
           a.sharpness_evaluations == b.sharpness_evaluations && a.noise_draws == b.noise_draws;
}

namespace {

std::optional<double> opt_fitness(const Fitness& f)
{
    return f.is_valid ? std::optional<double>(f.r2) : std::nullopt;
}

std::optional<double> mean_of(const std::vector<double>& v)
{
    if (v.empty()) {
        return std::nullopt;
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::optional<double> median_of(std::vector<double> v)
{
    if (v.empty()) {
        return std::nullopt;
    }
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

Evolution::Evolution(const RunConfig& cfg, const SplitPair& split)
    : cfg_(cfg), split_(split)
{
    cfg_.validate();
    if (split_.train.rows() == 0) {
        throw ConfigError("training partition is empty");
    }
    auto rng = derive_rng(cfg_.seed, {stream::init});
    auto trees = rhh_init(cfg_.pop_size, split_.train.cols(), cfg_.variation, rng);

    std::vector<std::optional<Individual>> slots(trees.size());
    parallel_for(trees.size(), cfg_.threads, [&](std::size_t i) { slots[i] = make_individual(std::move(trees[i])); });
    population_.reserve(slots.size());
    for (auto& s : slots) {
        population_.push_back(std::move(*s));
    }
    score_generation();
    measure_phenotypes();
}

Individual Evolution::make_individual(ExprTree tree) const
{
    auto train = evaluate(tree, split_.train.features);
    auto f_train = fitness_of(train, split_.train.target);
    Fitness f_test = Fitness::worst();
    if (split_.test.rows() > 0) {
        f_test = fitness_of(evaluate(tree, split_.test.features), split_.test.target);
    }
    return Individual{std::move(tree), std::move(train), f_train, f_test, Sharpness::worst(), std::nullopt};
}

void Evolution::score_generation()
{
    noise_.reset();
    if (cfg_.sam.mode == SamMode::None) {
        return;
    }
    if (cfg_.sam.mode == SamMode::In) {
        auto rng = derive_rng(cfg_.seed, {stream::sam_in_noise, generation_});
        noise_ = draw_sam_in_noise(split_.train, cfg_.sam, rng);
        ++noise_draws_;
    }
    parallel_for(population_.size(), cfg_.threads, [&](std::size_t i) {
        auto rng = derive_rng(cfg_.seed, {stream::sharpness, generation_, i});
        auto& ind = population_[i];
        if (cfg_.sam.mode == SamMode::In) {
            ind.sharpness = sam_in_sharpness(ind.tree, *noise_, cfg_.sam, rng);
        } else {
            ind.sharpness = sam_out_sharpness(ind.semantics_train, split_.train.target, cfg_.sam, rng);
        }
        ++sharpness_evaluations_;
    });
}

void Evolution::measure_phenotypes()
{
    const bool due = generation_ % cfg_.gpm_every == 0 || generation_ == cfg_.generations;
    parallel_for(population_.size(), cfg_.threads, [&](std::size_t i) {
        auto& ind = population_[i];
        if (due) {
            ind.phenotype_size = extract_phenotype(ind.tree, split_.train.features, cfg_.gpm_tolerance).phenotype_size;
        } else {
            ind.phenotype_size.reset();
        }
    });
}

std::vector<std::size_t> Evolution::elite_indices(std::size_t k) const
{
    std::vector<std::size_t> order(population_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Best train fitness first, then smaller tree, then earlier position.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = population_[a];
        const auto& y = population_[b];
        if (better(x.fitness_train, y.fitness_train)) {
            return true;
        }
        if (better(y.fitness_train, x.fitness_train)) {
            return false;
        }
        return x.tree.size() < y.tree.size();
    });
    order.resize(k);
    return order;
}

std::size_t Evolution::elite_index() const
{
    return elite_indices(1).front();
}

void Evolution::step()
{
    const std::size_t next_gen = generation_ + 1;
    const std::size_t n_offspring = cfg_.pop_size - cfg_.elitism_count;
    const std::span<const Individual> parents(population_);
    const auto n_features = split_.train.cols();

    std::vector<std::optional<Individual>> offspring(n_offspring);
    parallel_for(n_offspring, cfg_.threads, [&](std::size_t k) {
        auto rng = derive_rng(cfg_.seed, {stream::offspring, next_gen, k});
        const bool crossover = std::bernoulli_distribution(cfg_.variation.p_crossover)(rng);
        const auto& first = parents[double_tournament(parents, cfg_.tournament, cfg_.sam.mode, rng).index];
        auto child = [&] {
            if (crossover) {
                const auto& second = parents[double_tournament(parents, cfg_.tournament, cfg_.sam.mode, rng).index];
                return swap_crossover(first.tree, second.tree, rng);
            }
            return subtree_mutation(first.tree, n_features, cfg_.variation, rng);
        }();
        if (cfg_.max_size > 0 && child.size() > cfg_.max_size) {
            offspring[k] = first;
        } else {
            offspring[k] = make_individual(std::move(child));
        }
    });

    // Elites keep their relative order, so full elitism reproduces the population.
    auto elites = elite_indices(cfg_.elitism_count);
    std::sort(elites.begin(), elites.end());

    std::vector<Individual> next;
    next.reserve(cfg_.pop_size);
    for (auto e : elites) {
        next.push_back(population_[e]);
    }
    for (auto& o : offspring) {
        next.push_back(std::move(*o));
    }
    population_ = std::move(next);
    generation_ = next_gen;

    score_generation();
    measure_phenotypes();
}

GenerationStats Evolution::stats() const
{
    GenerationStats s;
    s.generation = generation_;
    std::vector<double> train;
    std::vector<double> test;
    std::vector<double> sharp;
    double size_sum = 0.0;
    double pheno_sum = 0.0;
    double redundancy_sum = 0.0;
    bool have_pheno = true;
    for (const auto& ind : population_) {
        if (ind.fitness_train.is_valid) {
            train.push_back(ind.fitness_train.r2);
        } else {
            ++s.invalid_train;
        }
        if (ind.fitness_test.is_valid) {
            test.push_back(ind.fitness_test.r2);
        } else {
            ++s.invalid_test;
        }
        if (cfg_.sam.mode != SamMode::None && ind.sharpness.is_valid) {
            sharp.push_back(ind.sharpness.value);
        }
        const auto size = static_cast<double>(ind.tree.size());
        size_sum += size;
        if (ind.phenotype_size) {
            pheno_sum += static_cast<double>(*ind.phenotype_size);
            redundancy_sum += size - static_cast<double>(*ind.phenotype_size);
        } else {
            have_pheno = false;
        }
    }
    const auto n = static_cast<double>(population_.size());
    s.pop_train_mean = mean_of(train);
    s.pop_train_median = median_of(train);
    s.pop_test_mean = mean_of(test);
    s.pop_test_median = median_of(test);
    s.mean_size = size_sum / n;
    if (have_pheno) {
        s.mean_phenotype_size = pheno_sum / n;
        s.mean_redundancy = redundancy_sum / n;
    }
    s.mean_sharpness = mean_of(sharp);
    const auto& elite = population_[elite_index()];
    s.elite_train = opt_fitness(elite.fitness_train);
    s.elite_test = opt_fitness(elite.fitness_test);
    return s;
}

RunResult run(const RunConfig& cfg, const SplitPair& split)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.config = cfg;

    Evolution evo(cfg, split);
    auto record = [&] {
        result.stats.push_back(evo.stats());
        result.elite_per_generation.push_back(evo.population()[evo.elite_index()].tree.to_string());
    };
    record();
    for (std::size_t g = 0; g < cfg.generations; ++g) {
        evo.step();
        record();
    }
    const auto& elite = evo.population()[evo.elite_index()];
    result.final_elite = elite.tree.to_string();
    result.final_elite_train = opt_fitness(elite.fitness_train);
    result.final_elite_test = opt_fitness(elite.fitness_test);
    result.sharpness_evaluations = evo.sharpness_evaluations();
    result.noise_draws = evo.noise_draws();
    result.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void write_stats_csv(const std::vector<GenerationStats>& stats, std::ostream& out)
{
    auto cell = [&](const std::optional<double>& v) {
        out << ',';
        if (v) {
            out << format_real(*v);
        }
    };
    out << "generation,pop_train_mean,pop_train_median,pop_test_mean,pop_test_median,elite_train,elite_test,"
           "mean_size,mean_phenotype_size,mean_redundancy,mean_sharpness,invalid_train,invalid_test\n";
    for (const auto& s : stats) {
        out << s.generation;
        cell(s.pop_train_mean);
        cell(s.pop_train_median);
        cell(s.pop_test_mean);
        cell(s.pop_test_median);
        cell(s.elite_train);
        cell(s.elite_test);
        cell(s.mean_size);
        cell(s.mean_phenotype_size);
        cell(s.mean_redundancy);
        cell(s.mean_sharpness);
        out << ',' << s.invalid_train << ',' << s.invalid_test << '\n';
    }
}

} // namespace samgp
