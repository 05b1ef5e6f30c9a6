#include "samgp/sharpness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "samgp/error.hpp"
#include "samgp/fitness.hpp"

namespace samgp {

std::string_view to_string(SamMode m) noexcept
{
    switch (m) {
    case SamMode::None: return "none";
    case SamMode::In: return "in";
    case SamMode::Out: return "out";
    }
    return "?";
}

SamMode sam_mode_from_string(std::string_view s)
{
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "none" || lower == "gp") {
        return SamMode::None;
    }
    if (lower == "in" || lower == "sam-in") {
        return SamMode::In;
    }
    if (lower == "out" || lower == "sam-out") {
        return SamMode::Out;
    }
    throw ConfigError("unknown SAM mode '" + std::string(s) + "' (expected none, in or out)");
}

void SamConfig::validate() const
{
    if (n == 0) {
        throw ConfigError("SAM perturbation count must be at least 1");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("SAM perturbation magnitude must be a finite non-negative number");
    }
}

SamInGenerationNoise draw_sam_in_noise(const Dataset& train, const SamConfig& cfg, Rng& rng)
{
    cfg.validate();
    if (cfg.n > train.rows()) {
        throw ConfigError("SAM-IN sample size " + std::to_string(cfg.n) + " exceeds the " + std::to_string(train.rows()) +
                          " training rows");
    }
    // Partial Fisher-Yates: the first n entries are a uniform sample without replacement.
    std::vector<std::size_t> idx(train.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const auto j = std::uniform_int_distribution<std::size_t>(i, idx.size() - 1)(rng);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cfg.n);

    SamInGenerationNoise noise;
    noise.sampled_features = train.features.select_rows(idx);
    noise.perturbed_features = noise.sampled_features;
    noise.sampled_target.reserve(cfg.n);
    for (auto i : idx) {
        noise.sampled_target.push_back(train.target[i]);
    }
    noise.sample_rows = std::move(idx);

    // Row by row, one noise vector per sampled observation.
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t j = 0; j < train.cols(); ++j) {
            const double half = cfg.epsilon * train.feature_std[j];
            if (half > 0.0) {
                noise.perturbed_features.at(i, j) += symmetric_uniform(rng, half);
            }
        }
    }
    return noise;
}

Sharpness sam_in_sharpness(const ExprTree& tree, const SamInGenerationNoise& noise, const SamConfig& cfg, Rng& rng)
{
    const auto perturbed = perturb_constants(tree, cfg.epsilon, rng);
    const auto base = fitness_of(evaluate(tree, noise.sampled_features), noise.sampled_target);
    const auto moved = fitness_of(evaluate(perturbed, noise.perturbed_features), noise.sampled_target);
    if (!base.is_valid || !moved.is_valid) {
        return Sharpness::worst();
    }
    return Sharpness::of(std::abs(base.r2 - moved.r2));
}

Sharpness sam_out_sharpness(const Semantics& s, std::span<const double> target, const SamConfig& cfg, Rng& rng)
{
    if (!s.valid || s.values.empty()) {
        return Sharpness::worst();
    }
    const auto rows = s.values.size();
    const double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(rows);
    double ss = 0.0;
    for (double v : s.values) {
        ss += (v - mean) * (v - mean);
    }
    const double half = cfg.epsilon * std::sqrt(ss / static_cast<double>(rows));
    if (!std::isfinite(half)) {
        return Sharpness::worst();
    }

    // Welford keeps the variance of identical fitnesses at exactly zero.
    double fmean = 0.0;
    double m2 = 0.0;
    std::vector<double> neighbour(rows);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
            neighbour[j] = s.values[j] + symmetric_uniform(rng, half);
        }
        const auto f = fitness_of(std::span<const double>(neighbour), target);
        if (!f.is_valid) {
            return Sharpness::worst();
        }
        const double delta = f.r2 - fmean;
        fmean += delta / static_cast<double>(i + 1);
        m2 += delta * (f.r2 - fmean);
    }
    return Sharpness::of(m2 / static_cast<double>(cfg.n));
}

} // namespace samgp
