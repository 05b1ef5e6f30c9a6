#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <span>

#include "samgp/eval.hpp"

namespace samgp {

// Training/test fitness, maximized. An invalid fitness (WORST) ranks below every finite R².
struct Fitness {
    double r2{-std::numeric_limits<double>::infinity()};
    bool is_valid{false};

    [[nodiscard]] static constexpr Fitness worst() noexcept { return {}; }
    [[nodiscard]] static constexpr Fitness of(double r2) noexcept { return {r2, true}; }

    friend constexpr bool operator==(const Fitness&, const Fitness&) = default;
};

// True when a is strictly better than b.
[[nodiscard]] constexpr bool better(const Fitness& a, const Fitness& b) noexcept
{
    if (!a.is_valid) {
        return false;
    }
    return !b.is_valid || a.r2 > b.r2;
}

// Coefficient of determination 1 - SS_res / SS_tot. Returns nullopt when the target is
// constant (SS_tot == 0) or the result is not finite.
[[nodiscard]] std::optional<double> r_squared(std::span<const double> pred, std::span<const double> target);

[[nodiscard]] double rmse(std::span<const double> pred, std::span<const double> target);

[[nodiscard]] Fitness fitness_of(const Semantics& s, std::span<const double> target);
[[nodiscard]] Fitness fitness_of(std::span<const double> pred, std::span<const double> target);

} // namespace samgp
