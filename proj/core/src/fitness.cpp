#include "samgp/fitness.hpp"

#include <cassert>
#include <cmath>
#include <numeric>

namespace samgp {

std::optional<double> r_squared(std::span<const double> pred, std::span<const double> target)
{
    assert(pred.size() == target.size());
    const auto n = target.size();
    if (n == 0) {
        return std::nullopt;
    }
    const double mean = std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(n);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = target[i] - pred[i];
        const double t = target[i] - mean;
        ss_res += r * r;
        ss_tot += t * t;
    }
    if (!(ss_tot > 0.0)) {
        return std::nullopt;
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    if (!std::isfinite(r2)) {
        return std::nullopt;
    }
    return r2;
}

double rmse(std::span<const double> pred, std::span<const double> target)
{
    assert(pred.size() == target.size() && !pred.empty());
    double ss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - target[i];
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(pred.size()));
}

Fitness fitness_of(std::span<const double> pred, std::span<const double> target)
{
    if (const auto r2 = r_squared(pred, target)) {
        return Fitness::of(*r2);
    }
    return Fitness::worst();
}

Fitness fitness_of(const Semantics& s, std::span<const double> target)
{
    assert(s.size() == target.size());
    if (!s.valid) {
        return Fitness::worst();
    }
    return fitness_of(std::span<const double>(s.values), target);
}

} // namespace samgp
