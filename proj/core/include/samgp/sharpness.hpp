#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "samgp/data.hpp"
#include "samgp/eval.hpp"
#include "samgp/expr.hpp"
#include "samgp/rng.hpp"

namespace samgp {

enum class SamMode { None, In, Out };

[[nodiscard]] std::string_view to_string(SamMode m) noexcept;
// Accepts "none", "in", "out" (case-insensitive). Throws ConfigError.
[[nodiscard]] SamMode sam_mode_from_string(std::string_view s);

struct SamConfig {
    SamMode mode{SamMode::None};
    std::size_t n{10};
    double epsilon{0.1};

    void validate() const;
    friend bool operator==(const SamConfig&, const SamConfig&) = default;
};

// Lower is better; WORST (invalid) loses to every finite value.
struct Sharpness {
    double value{std::numeric_limits<double>::infinity()};
    bool is_valid{false};

    [[nodiscard]] static constexpr Sharpness worst() noexcept { return {}; }
    [[nodiscard]] static constexpr Sharpness of(double v) noexcept { return {v, true}; }

    friend constexpr bool operator==(const Sharpness&, const Sharpness&) = default;
};

// True when a is strictly flatter than b.
[[nodiscard]] constexpr bool flatter(const Sharpness& a, const Sharpness& b) noexcept
{
    if (!a.is_valid) {
        return false;
    }
    return !b.is_valid || a.value < b.value;
}

// One draw per generation, shared by every individual scored in that generation.
struct SamInGenerationNoise {
    std::vector<std::size_t> sample_rows;
    Matrix sampled_features;   // D_s
    Matrix perturbed_features; // D_s plus per-cell noise in [-eps*sigma_j, eps*sigma_j]
    std::vector<double> sampled_target;

    friend bool operator==(const SamInGenerationNoise&, const SamInGenerationNoise&) = default;
};

// Samples cfg.n training rows without replacement and perturbs each cell. Throws
// ConfigError when cfg.n exceeds the number of training rows.
[[nodiscard]] SamInGenerationNoise draw_sam_in_noise(const Dataset& train, const SamConfig& cfg, Rng& rng);

// |f(t on D_s) - f(perturbed-constants t on D_s+eps)|, both R² against the sampled
// targets. WORST if either evaluation is invalid.
[[nodiscard]] Sharpness sam_in_sharpness(const ExprTree& tree, const SamInGenerationNoise& noise, const SamConfig& cfg,
                                         Rng& rng);

// Population variance of the R² of cfg.n semantic neighbours, each the semantics plus
// fresh per-element noise in [-eps*sd(s), eps*sd(s)]. Invalid semantics score WORST
// without sampling.
[[nodiscard]] Sharpness sam_out_sharpness(const Semantics& s, std::span<const double> target, const SamConfig& cfg,
                                          Rng& rng);

} // namespace samgp
