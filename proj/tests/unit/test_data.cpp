#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "samgp/data.hpp"
#include "samgp/error.hpp"
#include "test_support.hpp"

using namespace samgp;
using std::numbers::pi;

namespace {

// Writes a rows x (features + 1) CSV whose cells are simple functions of the position.
std::filesystem::path shaped_csv(const std::filesystem::path& dir, const std::string& name, std::size_t rows,
                                 std::size_t features)
{
    std::ostringstream os;
    for (std::size_t j = 0; j < features; ++j) {
        os << 'f' << j << ',';
    }
    os << "target\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < features; ++j) {
            os << static_cast<double>(i) * 0.5 + static_cast<double>(j) << ',';
        }
        os << static_cast<double>(i % 7) << '\n';
    }
    const auto path = dir / (name + ".csv");
    testing::write_file(path, os.str());
    return path;
}

IngestionError::Kind ingestion_kind(const std::filesystem::path& p, const TargetColumn& t, CsvOptions o = {})
{
    try {
        (void)load_csv(p, t, o);
    } catch (const IngestionError& e) {
        return e.kind();
    }
    FAIL("expected an ingestion error");
    return IngestionError::Kind::Io;
}

} // namespace

TEST_CASE("synthetic functions at known points")
{
    const double at11[] = {1.0, 1.0};
    const double at00[] = {0.0, 0.0};
    const double at10[] = {1.0, 0.0};
    CHECK(std::abs(synth_levy(at11)) < 1e-9);
    CHECK(std::abs(synth_ackley(at00)) < 1e-12);
    CHECK(std::abs(synth_rastrigin(at00)) < 1e-9);
    CHECK(std::abs(synth_rosenbrock(at11)) < 1e-9);
    CHECK(std::abs(synth_rastrigin(at10) - 1.0) < 1e-9);
    CHECK(std::abs(synth_rosenbrock(at00) - 1.0) < 1e-9);

    SUBCASE("Levy at the origin, term by term")
    {
        // w = 1 + (0 - 1) / 4 = 0.75 in both coordinates.
        const double w = 0.75;
        const double first = std::pow(std::sin(pi * w), 2);
        const double middle = (w - 1) * (w - 1) * (1 + 10 * std::pow(std::sin(pi * w + 1), 2));
        const double last = (w - 1) * (w - 1) * (1 + std::pow(std::sin(2 * pi * w), 2));
        CHECK(synth_levy(at00) == doctest::Approx(first + middle + last).epsilon(1e-14));
        // sin^2(3pi/4) = 1/2 and sin^2(3pi/2) = 1.
        CHECK(first == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(last == doctest::Approx(0.125).epsilon(1e-14));
    }
    SUBCASE("Ackley at (1, 1)")
    {
        // sqrt(mean(x^2)) = 1 and mean(cos(2 pi x)) = 1, so f = 20 - 20 exp(-0.2).
        CHECK(synth_ackley(at11) == doctest::Approx(20.0 - 20.0 * std::exp(-0.2)).epsilon(1e-14));
    }
    SUBCASE("Rastrigin and Rosenbrock on a generic point")
    {
        const double x[] = {0.3, -1.7};
        const double r = 20 + (0.09 - 10 * std::cos(2 * pi * 0.3)) + (2.89 - 10 * std::cos(2 * pi * -1.7));
        CHECK(synth_rastrigin(x) == doctest::Approx(r).epsilon(1e-14));
        const double b = 100 * std::pow(-1.7 - 0.09, 2) + std::pow(0.3 - 1, 2);
        CHECK(synth_rosenbrock(x) == doctest::Approx(b).epsilon(1e-14));
    }
}

TEST_CASE("synthetic functions are non-negative on their boxes")
{
    Rng rng{1};
    for (auto fn : kAllSynthetic) {
        const double b = synth_bound(fn);
        std::uniform_real_distribution<double> u(-b, b);
        for (int i = 0; i < 2000; ++i) {
            const double x[] = {u(rng), u(rng)};
            CHECK(synth_eval(fn, x) >= -1e-12);
        }
    }
}

TEST_CASE("synthetic names and boxes")
{
    CHECK(synth_bound(SyntheticFn::Levy) == 10.0);
    CHECK(synth_bound(SyntheticFn::Ackley) == 32.768);
    CHECK(synth_bound(SyntheticFn::Rastrigin) == 5.12);
    CHECK(synth_bound(SyntheticFn::Rosenbrock) == 2.048);
    for (auto fn : kAllSynthetic) {
        CHECK(synth_from_name(synth_name(fn)) == fn);
    }
    CHECK_THROWS_AS((void)synth_from_name("sphere"), ConfigError);
}

TEST_CASE("sampling a synthetic problem")
{
    for (auto fn : kAllSynthetic) {
        Rng rng{7};
        const auto d = sample_synthetic(fn, 100, rng);
        REQUIRE(d.rows() == 100);
        REQUIRE(d.cols() == 2);
        CHECK(d.name == synth_name(fn));
        const double b = synth_bound(fn);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const double x[] = {d.features.at(i, 0), d.features.at(i, 1)};
            CHECK(std::abs(x[0]) <= b);
            CHECK(std::abs(x[1]) <= b);
            CHECK(d.target[i] == synth_eval(fn, x));
        }
        Rng again{7};
        const auto e = sample_synthetic(fn, 100, again);
        CHECK(e.features == d.features);
        CHECK(e.target == d.target);
    }
}

TEST_CASE("feature standard deviation")
{
    SUBCASE("single row gives zeros")
    {
        const auto d = Dataset::make(Matrix::from_rows({{1.0, -4.0, 9.0}}), {2.0}, "one");
        CHECK(d.feature_std == std::vector<double>{0.0, 0.0, 0.0});
    }
    SUBCASE("population std against a two-pass reference")
    {
        const auto d = testing::random_dataset(57, 4, 3, -50.0, 80.0);
        for (std::size_t j = 0; j < d.cols(); ++j) {
            const auto c = d.features.col(j);
            double mean = 0.0;
            for (double v : c) {
                mean += v;
            }
            mean /= static_cast<double>(c.size());
            double ss = 0.0;
            for (double v : c) {
                ss += (v - mean) * (v - mean);
            }
            const double ref = std::sqrt(ss / static_cast<double>(c.size()));
            CHECK(d.feature_std[j] == doctest::Approx(ref).epsilon(1e-12));
        }
    }
    SUBCASE("hand value")
    {
        // Values 1, 2, 3, 4: mean 2.5, population variance 1.25.
        const auto d = Dataset::make(Matrix::from_rows({{1}, {2}, {3}, {4}}), {0, 1, 0, 1}, "h");
        CHECK(d.feature_std[0] == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
    }
}

TEST_CASE("dataset construction rejects bad shapes and values")
{
    CHECK_THROWS_AS((void)Dataset::make(Matrix(3, 1), {1.0, 2.0}, "x"), IngestionError);
    CHECK_THROWS_AS((void)Dataset::make(Matrix(1, 1, NAN), {1.0}, "x"), IngestionError);
    CHECK_THROWS_AS((void)Dataset::make(Matrix(1, 1), {INFINITY}, "x"), IngestionError);
}

TEST_CASE("loading CSV files")
{
    const auto dir = testing::scratch_dir("data_csv");

    SUBCASE("real-world shapes")
    {
        const auto boston = load_csv(shaped_csv(dir, "boston", 506, 13), std::string("target"));
        CHECK(boston.rows() == 506);
        CHECK(boston.cols() == 13);
        CHECK(boston.name == "boston");
        const auto concrete = load_csv(shaped_csv(dir, "concrete", 1005, 8), -1L);
        CHECK(concrete.rows() == 1005);
        CHECK(concrete.cols() == 8);
    }
    SUBCASE("target by name, by index and from the end")
    {
        testing::write_file(dir / "t.csv", "a,b,c\n1,2,3\n4,5,6\n");
        const auto by_name = load_csv(dir / "t.csv", std::string("b"));
        CHECK(by_name.target == std::vector<double>{2, 5});
        CHECK(by_name.features == Matrix::from_rows({{1, 3}, {4, 6}}));
        CHECK(load_csv(dir / "t.csv", 0L).target == std::vector<double>{1, 4});
        CHECK(load_csv(dir / "t.csv", -1L).target == std::vector<double>{3, 6});
        CHECK(load_csv(dir / "t.csv", -3L).target == std::vector<double>{1, 4});
    }
    SUBCASE("headerless files, other delimiters, blank lines and CRLF")
    {
        testing::write_file(dir / "n.csv", "1;2\r\n\r\n3;4\r\n");
        const auto d = load_csv(dir / "n.csv", -1L, CsvOptions{false, ';'});
        CHECK(d.target == std::vector<double>{2, 4});
        CHECK(d.rows() == 2);
    }
    SUBCASE("single row")
    {
        testing::write_file(dir / "s.csv", "a,b,y\n3,4,5\n");
        CHECK(load_csv(dir / "s.csv", -1L).feature_std == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("distinct error kinds")
    {
        using K = IngestionError::Kind;
        testing::write_file(dir / "parse.csv", "a,y\n1,2\nx,3\n");
        testing::write_file(dir / "nan.csv", "a,y\n1,2\nnan,3\n");
        testing::write_file(dir / "ragged.csv", "a,y\n1,2\n3\n");
        testing::write_file(dir / "empty.csv", "a,y\n");
        testing::write_file(dir / "ok.csv", "a,y\n1,2\n3,4\n");
        CHECK(ingestion_kind(dir / "missing.csv", -1L) == K::Io);
        CHECK(ingestion_kind(dir / "parse.csv", -1L) == K::Parse);
        CHECK(ingestion_kind(dir / "nan.csv", -1L) == K::NonFinite);
        CHECK(ingestion_kind(dir / "ok.csv", std::string("z")) == K::MissingTarget);
        CHECK(ingestion_kind(dir / "ok.csv", 5L) == K::MissingTarget);
        CHECK(ingestion_kind(dir / "ragged.csv", -1L) == K::Shape);
        CHECK(ingestion_kind(dir / "empty.csv", -1L) == K::Shape);
    }
    SUBCASE("write then read back")
    {
        Rng rng{3};
        const auto d = sample_synthetic(SyntheticFn::Ackley, 20, rng);
        write_csv(d, dir / "ackley.csv");
        const auto back = load_csv(dir / "ackley.csv", -1L);
        CHECK(back.features == d.features);
        CHECK(back.target == d.target);
    }
}

TEST_CASE("Monte-Carlo split")
{
    SUBCASE("rounding of the training share")
    {
        const auto d = testing::random_dataset(506, 2, 1);
        Rng rng{1};
        const auto s = monte_carlo_split(d, 0.7, rng);
        CHECK(s.train.rows() == 354);
        CHECK(s.test.rows() == 152);
        CHECK(s.train_fraction == 0.7);
    }
    SUBCASE("half and half on 100 synthetic rows")
    {
        Rng rng{2};
        const auto d = sample_synthetic(SyntheticFn::Levy, 100, rng);
        const auto s = monte_carlo_split(d, 0.5, rng);
        CHECK(s.train.rows() == 50);
        CHECK(s.test.rows() == 50);
    }
    SUBCASE("partitions are disjoint and exhaustive")
    {
        // Row i carries the tag i in its target, so the partition can be recovered.
        Matrix x(37, 1);
        std::vector<double> y(37);
        for (std::size_t i = 0; i < 37; ++i) {
            x.at(i, 0) = static_cast<double>(i) * 1.5;
            y[i] = static_cast<double>(i);
        }
        const auto d = Dataset::make(x, y, "tagged");
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            Rng rng{seed};
            const auto s = monte_carlo_split(d, 0.6, rng);
            std::vector<double> all = s.train.target;
            all.insert(all.end(), s.test.target.begin(), s.test.target.end());
            std::sort(all.begin(), all.end());
            REQUIRE(all == y);
            for (std::size_t i = 0; i < s.train.rows(); ++i) {
                REQUIRE(s.train.features.at(i, 0) == s.train.target[i] * 1.5);
            }
        }
    }
    SUBCASE("train std is recomputed on the training rows")
    {
        const auto d = testing::random_dataset(80, 3, 5);
        Rng rng{4};
        const auto s = monte_carlo_split(d, 0.7, rng);
        CHECK(s.train.feature_std == column_std(s.train.features));
        CHECK(s.train.feature_std != d.feature_std);
    }
    SUBCASE("same seed, same split")
    {
        const auto d = testing::random_dataset(40, 2, 6);
        Rng a{9};
        Rng b{9};
        CHECK(monte_carlo_split(d, 0.7, a).train.target == monte_carlo_split(d, 0.7, b).train.target);
    }
    SUBCASE("degenerate fractions")
    {
        const auto d = testing::random_dataset(10, 1, 7);
        Rng rng{0};
        CHECK_THROWS_AS((void)monte_carlo_split(d, 0.0, rng), ConfigError);
        CHECK_THROWS_AS((void)monte_carlo_split(d, 1.0, rng), ConfigError);
        CHECK_THROWS_AS((void)monte_carlo_split(d, 0.01, rng), ConfigError);
    }
}
