#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "test_support.hpp"

using namespace samgp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> run_args(const fs::path& dir, const std::string& sam)
{
    return {"run",   "--synthetic", "levy",  "--n-points", "80",  "--pop-size", "20", "--generations",
            "4",     "--sam",       sam,     "--seed",     "42",  "--out",      dir.string()};
}

std::size_t count_files(const fs::path& dir, const std::string& prefix)
{
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().filename().string().rfind(prefix, 0) == 0) {
            ++n;
        }
    }
    return n;
}

} // namespace

TEST_CASE("run writes reproducible outputs")
{
    const auto a = testing::scratch_dir("cli_run_a");
    const auto b = testing::scratch_dir("cli_run_b");
    const auto r1 = invoke(run_args(a, "out"));
    REQUIRE_MESSAGE(r1.code == 0, r1.err);
    const auto r2 = invoke(run_args(b, "out"));
    REQUIRE(r2.code == 0);
    for (const char* f : {"config.json", "stats.csv", "run.json", "elite.txt"}) {
        CHECK(fs::exists(a / f));
    }
    CHECK(testing::read_file(a / "stats.csv") == testing::read_file(b / "stats.csv"));
    CHECK(testing::read_file(a / "elite.txt") == testing::read_file(b / "elite.txt"));

    const auto c = testing::scratch_dir("cli_run_c");
    auto threaded = run_args(c, "out");
    threaded.insert(threaded.end(), {"--threads", "3"});
    REQUIRE(invoke(threaded).code == 0);
    CHECK(testing::read_file(a / "stats.csv") == testing::read_file(c / "stats.csv"));
}

TEST_CASE("plain GP leaves the sharpness column empty")
{
    const auto dir = testing::scratch_dir("cli_run_gp");
    REQUIRE(invoke(run_args(dir, "none")).code == 0);
    std::istringstream in(testing::read_file(dir / "stats.csv"));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        // mean_sharpness is the 11th of 13 columns.
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        cells.resize(13);
        CHECK(cells[10].empty());
        CHECK_FALSE(cells[7].empty());
    }
    CHECK(rows == 5);
}

TEST_CASE("usage and data errors")
{
    const auto dir = testing::scratch_dir("cli_errors");
    CHECK(invoke({}).code != 0);
    CHECK(invoke({"bogus"}).code != 0);
    const auto missing = invoke({"run", "--data", (dir / "nope.csv").string(), "--out", dir.string()});
    CHECK(missing.code == 3);
    CHECK_FALSE(missing.err.empty());
    CHECK(invoke({"run", "--out", dir.string()}).code == 2);
    CHECK(invoke({"run", "--synthetic", "levy", "--sam", "sideways", "--out", dir.string()}).code != 0);
    CHECK(invoke({"run", "--synthetic", "levy", "--epsilon", "-1", "--sam", "in", "--out", dir.string()}).code != 0);
}

TEST_CASE("grid layout, resume and ranking")
{
    const auto dir = testing::scratch_dir("cli_grid");
    std::string algs = "GP";
    for (const char* n : {"10", "20", "50"}) {
        for (const char* e : {"0.1", "0.2", "0.5", "1"}) {
            algs += std::string(",SAM-IN_n") + n + "_e" + e;
        }
    }
    const std::vector<std::string> args{"grid",   "--problem", "levy",  "--problem",     "ackley", "--problem",
                                        "rastrigin", "--problem", "rosenbrock", "--algorithms", algs,   "--runs",
                                        "1",      "--pop-size", "10",   "--generations", "2",      "--out",
                                        dir.string()};
    const auto g = invoke(args);
    REQUIRE_MESSAGE(g.code == 0, g.err);
    CHECK(count_files(dir, "run_") == 52);
    CHECK(count_files(dir, "stats_") == 52);
    CHECK(fs::exists(dir / "finals.csv"));
    CHECK(fs::exists(dir / "curves" / "levy_elite_test.csv"));

    const auto finals = testing::read_file(dir / "finals.csv");
    const auto curve = testing::read_file(dir / "curves" / "ackley_mean_size.csv");
    const auto record = cli::run_record_path(dir, "rastrigin", "SAM-IN_n20_e0.5", 0);
    REQUIRE(fs::exists(record));
    const auto stored = cli::load_run_result(record);
    const auto stored_stats = testing::read_file(record.parent_path() / "stats_0.csv");

    // Interrupted grid: drop some records and resume.
    fs::remove(record);
    fs::remove(cli::run_record_path(dir, "levy", "GP", 0));
    const auto resumed = invoke(args);
    REQUIRE(resumed.code == 0);
    // Wall time aside, the recomputed record is the same.
    CHECK(same_outcome(cli::load_run_result(record), stored));
    CHECK(testing::read_file(record.parent_path() / "stats_0.csv") == stored_stats);
    CHECK(testing::read_file(dir / "finals.csv") == finals);
    CHECK(testing::read_file(dir / "curves" / "ackley_mean_size.csv") == curve);

    const auto r = invoke({"rank", "--grid", dir.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fs::exists(dir / "rank_table.txt"));
    CHECK(r.out.find("best SAM-IN") != std::string::npos);
    const auto csv = testing::read_file(dir / "rank_table.csv");
    CHECK(csv.rfind("problem,", 0) == 0);
    CHECK(csv.find("\naverage,") != std::string::npos);
}

TEST_CASE("grid records load back")
{
    const auto dir = testing::scratch_dir("cli_grid_small");
    REQUIRE(invoke({"grid", "--problem", "levy", "--algorithms", "GP,SAM-OUT_n20_e0.1", "--runs", "2", "--pop-size", "10",
                 "--generations", "3", "--out", dir.string()})
                .code == 0);
    const auto r = cli::load_run_result(cli::run_record_path(dir, "levy", "SAM-OUT_n20_e0.1", 1));
    CHECK(r.stats.size() == 4);
    CHECK(r.config.sam.mode == SamMode::Out);
    CHECK(r.config.sam.n == 20);
    // Same run index, different algorithm: same data seed, different evolution seed.
    CHECK(cli::cell_data_seed(0, "levy", 1) == cli::cell_data_seed(0, "levy", 1));
    CHECK(cli::cell_seed(0, "GP", "levy", 1) != cli::cell_seed(0, "SAM-OUT_n20_e0.1", "levy", 1));
}

TEST_CASE("rank fails on an empty grid")
{
    const auto dir = testing::scratch_dir("cli_rank_empty");
    CHECK(invoke({"rank", "--grid", dir.string()}).code != 0);
}

TEST_CASE("phenotype subcommand")
{
    const auto a = invoke({"phenotype", "--tree", "(add x0 0.0)", "--synthetic", "levy"});
    REQUIRE_MESSAGE(a.code == 0, a.err);
    CHECK(a.out.find("phenotype: x0\n") != std::string::npos);
    CHECK(a.out.find("redundancy: 2\n") != std::string::npos);

    const auto b = invoke({"phenotype", "--tree", "(mul x0 x1)", "--synthetic", "ackley"});
    REQUIRE(b.code == 0);
    CHECK(b.out.find("redundancy: 0\n") != std::string::npos);

    CHECK(invoke({"phenotype", "--tree", "(add x0", "--synthetic", "levy"}).code != 0);
    CHECK(invoke({"phenotype", "--synthetic", "levy"}).code == 2);
}

TEST_CASE("output directory from the environment")
{
    const auto dir = testing::scratch_dir("cli_env");
    ::setenv(cli::kOutDirEnv, dir.string().c_str(), 1);
    const auto r = invoke({"run", "--synthetic", "rastrigin", "--pop-size", "8", "--generations", "1"});
    ::unsetenv(cli::kOutDirEnv);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "stats.csv"));
}
