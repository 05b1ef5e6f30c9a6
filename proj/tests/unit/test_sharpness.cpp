#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "samgp/error.hpp"
#include "samgp/eval.hpp"
#include "samgp/fitness.hpp"
#include "samgp/sharpness.hpp"
#include "test_support.hpp"

using namespace samgp;

namespace {

double oracle_r2(const std::vector<double>& p, std::span<const double> y)
{
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double res = 0.0;
    double tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        res += (y[i] - p[i]) * (y[i] - p[i]);
        tot += (y[i] - mean) * (y[i] - mean);
    }
    return 1.0 - res / tot;
}

// Brute-force SAM-OUT: neighbour-major draws, two-pass variance.
double oracle_sam_out(const std::vector<double>& s, std::span<const double> y, std::size_t n, double eps,
                      std::uint64_t seed)
{
    const double m = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) {
        var += (v - m) * (v - m);
    }
    const double half = eps * std::sqrt(var / static_cast<double>(s.size()));
    std::mt19937_64 rng{seed};
    std::vector<double> r2(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> nb(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) {
            nb[j] = s[j] + std::uniform_real_distribution<double>(-half, half)(rng);
        }
        r2[i] = oracle_r2(nb, y);
    }
    const double fm = std::accumulate(r2.begin(), r2.end(), 0.0) / static_cast<double>(n);
    double acc = 0.0;
    for (double v : r2) {
        acc += (v - fm) * (v - fm);
    }
    return acc / static_cast<double>(n);
}

} // namespace

TEST_CASE("mode parsing and validation")
{
    CHECK(sam_mode_from_string("none") == SamMode::None);
    CHECK(sam_mode_from_string("IN") == SamMode::In);
    CHECK(sam_mode_from_string("Out") == SamMode::Out);
    CHECK(to_string(SamMode::Out) == "out");
    CHECK_THROWS_AS((void)sam_mode_from_string("sideways"), ConfigError);

    SamConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.n = 5;
    cfg.epsilon = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.epsilon = NAN;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("WORST sharpness ordering")
{
    CHECK(flatter(Sharpness::of(1e12), Sharpness::worst()));
    CHECK_FALSE(flatter(Sharpness::worst(), Sharpness::of(1e12)));
    CHECK_FALSE(flatter(Sharpness::worst(), Sharpness::worst()));
    CHECK(flatter(Sharpness::of(0.0), Sharpness::of(0.1)));
}

TEST_CASE("SAM-IN noise")
{
    auto data = testing::random_dataset(60, 3, 4);
    SamConfig cfg{SamMode::In, 10, 0.1};

    SUBCASE("rows are sampled without replacement and perturbed within bounds")
    {
        Rng rng{1};
        const auto noise = draw_sam_in_noise(data, cfg, rng);
        REQUIRE(noise.sample_rows.size() == 10);
        CHECK(std::set<std::size_t>(noise.sample_rows.begin(), noise.sample_rows.end()).size() == 10);
        for (std::size_t i = 0; i < 10; ++i) {
            const auto r = noise.sample_rows[i];
            CHECK(noise.sampled_target[i] == data.target[r]);
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(noise.sampled_features.at(i, j) == data.features.at(r, j));
                const double d = std::abs(noise.perturbed_features.at(i, j) - data.features.at(r, j));
                CHECK(d <= 0.1 * data.feature_std[j] * (1 + 1e-12));
            }
        }
    }
    SUBCASE("the ten noise rows are distinct")
    {
        Rng rng{2};
        const auto noise = draw_sam_in_noise(data, cfg, rng);
        std::set<std::vector<double>> deltas;
        for (std::size_t i = 0; i < 10; ++i) {
            std::vector<double> d;
            for (std::size_t j = 0; j < 3; ++j) {
                d.push_back(noise.perturbed_features.at(i, j) - noise.sampled_features.at(i, j));
            }
            deltas.insert(d);
        }
        CHECK(deltas.size() == 10);
    }
    SUBCASE("a constant column is never perturbed")
    {
        Matrix x = data.features;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            x.at(i, 1) = 4.0;
        }
        const auto flat = Dataset::make(std::move(x), data.target, "flat");
        CHECK(flat.feature_std[1] == 0.0);
        Rng rng{3};
        const auto noise = draw_sam_in_noise(flat, cfg, rng);
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(noise.perturbed_features.at(i, 1) == 4.0);
        }
    }
    SUBCASE("sample larger than the training set")
    {
        Rng rng{0};
        cfg.n = 61;
        CHECK_THROWS_AS((void)draw_sam_in_noise(data, cfg, rng), ConfigError);
    }
    SUBCASE("same seed gives the same draw")
    {
        Rng a{7};
        Rng b{7};
        CHECK(draw_sam_in_noise(data, cfg, a) == draw_sam_in_noise(data, cfg, b));
    }
}

TEST_CASE("zero perturbation gives zero sharpness")
{
    const auto data = testing::random_dataset(50, 2, 12);
    Rng gen{13};
    int checked = 0;
    while (checked < 100) {
        const auto t = testing::random_tree(gen, 2);
        const auto s = evaluate(t, data.features);
        if (!fitness_of(s, data.target).is_valid) {
            continue;
        }
        ++checked;
        SamConfig in{SamMode::In, 10, 0.0};
        Rng r1{static_cast<std::uint64_t>(checked)};
        const auto noise = draw_sam_in_noise(data, in, r1);
        const auto si = sam_in_sharpness(t, noise, in, r1);
        if (si.is_valid) {
            CHECK(si.value == 0.0);
        }
        SamConfig out{SamMode::Out, 20, 0.0};
        Rng r2{static_cast<std::uint64_t>(checked)};
        const auto so = sam_out_sharpness(s, data.target, out, r2);
        CHECK(so.is_valid);
        CHECK(so.value == 0.0);
    }
}

TEST_CASE("SAM-OUT matches a brute-force oracle")
{
    const auto data = testing::random_dataset(40, 2, 15);
    Rng gen{16};
    int checked = 0;
    while (checked < 200) {
        const auto t = testing::random_tree(gen, 2);
        const auto s = evaluate(t, data.features);
        if (!s.valid) {
            continue;
        }
        ++checked;
        const std::size_t n = 1 + static_cast<std::size_t>(checked % 25);
        const double eps = 0.05 * static_cast<double>(1 + checked % 4);
        const auto seed = static_cast<std::uint64_t>(1000 + checked);
        Rng rng{seed};
        const auto got = sam_out_sharpness(s, data.target, SamConfig{SamMode::Out, n, eps}, rng);
        REQUIRE(got.is_valid);
        const double want = oracle_sam_out(s.values, data.target, n, eps, seed);
        CHECK(std::abs(got.value - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("SAM-OUT edge cases")
{
    const std::vector<double> y{1, 2, 3, 4};
    Rng rng{0};
    SUBCASE("a single neighbour has zero variance")
    {
        const auto s = Semantics::from_values({1.5, 1.0, 3.5, 4.0});
        CHECK(sam_out_sharpness(s, y, SamConfig{SamMode::Out, 1, 0.5}, rng) == Sharpness::of(0.0));
    }
    SUBCASE("constant output has zero width")
    {
        const auto s = Semantics::from_values({2.0, 2.0, 2.0, 2.0});
        CHECK(sam_out_sharpness(s, y, SamConfig{SamMode::Out, 20, 0.1}, rng) == Sharpness::of(0.0));
    }
    SUBCASE("invalid semantics are WORST")
    {
        const auto s = Semantics::from_values({1.0, NAN, 3.0, 4.0});
        CHECK(sam_out_sharpness(s, y, SamConfig{SamMode::Out, 20, 0.1}, rng) == Sharpness::worst());
    }
    SUBCASE("a constant target makes every neighbour invalid")
    {
        const auto s = Semantics::from_values({1.0, 2.0, 3.0, 4.0});
        const std::vector<double> flat(4, 1.0);
        CHECK(sam_out_sharpness(s, flat, SamConfig{SamMode::Out, 5, 0.1}, rng) == Sharpness::worst());
    }
}

TEST_CASE("steep models are sharper than smooth ones")
{
    // Same target, one model tracks it and one amplifies every input wiggle.
    const auto data = testing::random_dataset(80, 1, 21);
    const auto smooth = ExprTree::parse("(add (mul x0 x0) (sin x0))");
    const auto steep = ExprTree::parse("(mul 25.0 (sin (mul 40.0 x0)))");
    const SamConfig in{SamMode::In, 10, 0.1};
    const SamConfig out{SamMode::Out, 20, 0.1};
    const auto s_smooth = evaluate(smooth, data.features);
    const auto s_steep = evaluate(steep, data.features);
    int in_wins = 0;
    int out_wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng r{seed};
        const auto noise = draw_sam_in_noise(data, in, r);
        Rng a = r;
        Rng b = r;
        in_wins += flatter(sam_in_sharpness(smooth, noise, in, a), sam_in_sharpness(steep, noise, in, b)) ? 1 : 0;
        Rng c{seed};
        Rng d{seed};
        out_wins += flatter(sam_out_sharpness(s_smooth, data.target, out, c),
                            sam_out_sharpness(s_steep, data.target, out, d))
                        ? 1
                        : 0;
    }
    CHECK(in_wins >= 90);
    CHECK(out_wins >= 90);
}
