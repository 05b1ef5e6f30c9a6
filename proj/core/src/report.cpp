#include "samgp/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "samgp/error.hpp"
#include "samgp/expr.hpp"

namespace samgp {

std::string algorithm_label(const SamConfig& sam)
{
    switch (sam.mode) {
    case SamMode::None: return "GP";
    case SamMode::In: return "SAM-IN_n" + std::to_string(sam.n) + "_e" + format_real(sam.epsilon);
    case SamMode::Out: return "SAM-OUT_n" + std::to_string(sam.n) + "_e" + format_real(sam.epsilon);
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& label)
{
    if (label == "GP") {
        return {label, SamConfig{}};
    }
    auto fail = [&] {
        throw ConfigError("bad algorithm label '" + label + "' (expected GP, SAM-IN_n<count>_e<eps> or SAM-OUT_n<count>_e<eps>)");
    };
    SamConfig sam;
    std::string_view rest(label);
    if (rest.starts_with("SAM-IN_n")) {
        sam.mode = SamMode::In;
        rest.remove_prefix(8);
    } else if (rest.starts_with("SAM-OUT_n")) {
        sam.mode = SamMode::Out;
        rest.remove_prefix(9);
    } else {
        fail();
    }
    const auto sep = rest.find("_e");
    if (sep == std::string_view::npos) {
        fail();
    }
    const auto n_part = rest.substr(0, sep);
    const auto e_part = rest.substr(sep + 2);
    auto [p1, ec1] = std::from_chars(n_part.data(), n_part.data() + n_part.size(), sam.n);
    auto [p2, ec2] = std::from_chars(e_part.data(), e_part.data() + e_part.size(), sam.epsilon);
    if (ec1 != std::errc{} || p1 != n_part.data() + n_part.size() || ec2 != std::errc{} ||
        p2 != e_part.data() + e_part.size()) {
        fail();
    }
    sam.validate();
    return {label, sam};
}

std::vector<Algorithm> algorithm_grid(std::span<const SamMode> modes, std::span<const std::size_t> ns,
                                      std::span<const double> epsilons)
{
    std::vector<Algorithm> out{{"GP", SamConfig{}}};
    for (auto m : modes) {
        if (m == SamMode::None) {
            continue;
        }
        for (auto n : ns) {
            for (auto e : epsilons) {
                SamConfig sam{m, n, e};
                out.push_back({algorithm_label(sam), sam});
            }
        }
    }
    return out;
}

std::vector<Algorithm> default_algorithm_grid()
{
    constexpr SamMode modes[] = {SamMode::In, SamMode::Out};
    constexpr std::size_t ns[] = {10, 20, 50};
    constexpr double eps[] = {0.1, 0.2, 0.5, 1.0};
    return algorithm_grid(modes, ns, eps);
}

std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // Positions i..j (0-based) cover ranks i+1..j+1.
        const double r = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

namespace {

std::string family_of(const std::string& label)
{
    switch (parse_algorithm(label).sam.mode) {
    case SamMode::None: return "GP";
    case SamMode::In: return "SAM-IN";
    case SamMode::Out: return "SAM-OUT";
    }
    return "?";
}

std::string fixed2(double v)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

} // namespace

RankTable rank_report(const std::vector<std::string>& algorithms, const std::vector<std::string>& problems,
                      const CellValues& values)
{
    if (algorithms.empty() || problems.empty()) {
        throw ReportError("rank report needs at least one algorithm and one problem");
    }
    RankTable table;
    table.algorithms = algorithms;
    table.problems = problems;
    for (const auto& p : problems) {
        std::vector<double> row;
        row.reserve(algorithms.size());
        for (const auto& a : algorithms) {
            const auto it = values.find({p, a});
            if (it == values.end()) {
                throw ReportError("missing result cell (problem '" + p + "', algorithm '" + a + "')");
            }
            row.push_back(it->second);
        }
        table.ranks.push_back(average_ranks(row));
    }
    table.average.assign(algorithms.size(), 0.0);
    for (const auto& row : table.ranks) {
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            table.average[a] += row[a] / static_cast<double>(problems.size());
        }
    }
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        auto& slot = acc[family_of(algorithms[a])];
        slot.first += table.average[a];
        ++slot.second;
    }
    for (const auto& [family, sum] : acc) {
        table.family_average[family] = sum.first / static_cast<double>(sum.second);
    }
    return table;
}

std::optional<std::pair<std::string, double>> best_in_family(const RankTable& table, SamMode mode)
{
    std::optional<std::pair<std::string, double>> best;
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
        if (parse_algorithm(table.algorithms[a]).sam.mode != mode) {
            continue;
        }
        if (!best || table.average[a] > best->second) {
            best = std::make_pair(table.algorithms[a], table.average[a]);
        }
    }
    return best;
}

std::string format_rank_table(const RankTable& table)
{
    // Columns: (n, epsilon) pairs of the SAM variants present.
    std::set<std::pair<std::size_t, double>> cells;
    std::map<std::tuple<SamMode, std::size_t, double>, double> by_cell;
    std::optional<double> gp;
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
        const auto alg = parse_algorithm(table.algorithms[a]);
        if (alg.sam.mode == SamMode::None) {
            gp = table.average[a];
            continue;
        }
        cells.insert({alg.sam.n, alg.sam.epsilon});
        by_cell[{alg.sam.mode, alg.sam.n, alg.sam.epsilon}] = table.average[a];
    }

    constexpr int width = 10;
    std::ostringstream os;
    auto col = [&](const std::string& s) { os << std::setw(width) << s; };
    col("SAM");
    col("GP");
    for (const auto& [n, e] : cells) {
        col("n" + std::to_string(n) + "/e" + format_real(e));
    }
    os << '\n';
    const std::pair<const char*, SamMode> rows[] = {{"IN", SamMode::In}, {"OUT", SamMode::Out}};
    for (const auto& [name, mode] : rows) {
        col(name);
        col(gp ? fixed2(*gp) : "-");
        for (const auto& [n, e] : cells) {
            const auto it = by_cell.find({mode, n, e});
            col(it == by_cell.end() ? "-" : fixed2(it->second));
        }
        os << '\n';
    }
    col("AVG");
    col(gp ? fixed2(*gp) : "-");
    for (const auto& [n, e] : cells) {
        double sum = 0.0;
        int count = 0;
        for (const auto& [name, mode] : rows) {
            if (const auto it = by_cell.find({mode, n, e}); it != by_cell.end()) {
                sum += it->second;
                ++count;
            }
        }
        col(count == 0 ? "-" : fixed2(sum / count));
    }
    os << "\n\nfamily averages:";
    for (const auto& [family, avg] : table.family_average) {
        os << ' ' << family << '=' << fixed2(avg);
    }
    os << '\n';
    return os.str();
}

std::string rank_table_csv(const RankTable& table)
{
    std::ostringstream os;
    os << "problem";
    for (const auto& a : table.algorithms) {
        os << ',' << a;
    }
    os << '\n';
    for (std::size_t p = 0; p < table.problems.size(); ++p) {
        os << table.problems[p];
        for (double r : table.ranks[p]) {
            os << ',' << format_real(r);
        }
        os << '\n';
    }
    os << "average";
    for (double r : table.average) {
        os << ',' << format_real(r);
    }
    os << '\n';
    return os.str();
}

std::span<const Metric> curve_metrics()
{
    static const Metric metrics[] = {
        {"pop_train_mean", [](const GenerationStats& s) { return s.pop_train_mean; }},
        {"pop_train_median", [](const GenerationStats& s) { return s.pop_train_median; }},
        {"pop_test_mean", [](const GenerationStats& s) { return s.pop_test_mean; }},
        {"pop_test_median", [](const GenerationStats& s) { return s.pop_test_median; }},
        {"elite_train", [](const GenerationStats& s) { return s.elite_train; }},
        {"elite_test", [](const GenerationStats& s) { return s.elite_test; }},
        {"mean_size", [](const GenerationStats& s) { return std::optional<double>(s.mean_size); }},
        {"mean_phenotype_size", [](const GenerationStats& s) { return s.mean_phenotype_size; }},
        {"mean_redundancy", [](const GenerationStats& s) { return s.mean_redundancy; }},
        {"mean_sharpness", [](const GenerationStats& s) { return s.mean_sharpness; }},
    };
    return metrics;
}

std::vector<std::filesystem::path> export_curves(const std::vector<CurveSet>& curves, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ReportError("cannot create '" + dir.string() + "': " + ec.message());
    }
    std::vector<std::string> problems;
    for (const auto& c : curves) {
        if (std::find(problems.begin(), problems.end(), c.problem) == problems.end()) {
            problems.push_back(c.problem);
        }
    }
    std::vector<std::filesystem::path> written;
    for (const auto& problem : problems) {
        for (const auto& metric : curve_metrics()) {
            const auto path = dir / (problem + "_" + metric.name + ".csv");
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                throw ReportError("cannot write '" + path.string() + "'");
            }
            out << "generation,algorithm,mean,std\n";
            for (const auto& c : curves) {
                if (c.problem != problem) {
                    continue;
                }
                std::size_t gens = 0;
                for (const auto& r : c.runs) {
                    gens = std::max(gens, r.size());
                }
                for (std::size_t g = 0; g < gens; ++g) {
                    std::vector<double> vals;
                    for (const auto& r : c.runs) {
                        if (g < r.size()) {
                            if (const auto v = metric.get(r[g])) {
                                vals.push_back(*v);
                            }
                        }
                    }
                    out << g << ',' << c.algorithm << ',';
                    if (!vals.empty()) {
                        // Welford: identical values give exactly zero spread.
                        double mean = 0.0;
                        double m2 = 0.0;
                        for (std::size_t k = 0; k < vals.size(); ++k) {
                            const double d = vals[k] - mean;
                            mean += d / static_cast<double>(k + 1);
                            m2 += d * (vals[k] - mean);
                        }
                        out << format_real(mean) << ',' << format_real(std::sqrt(m2 / static_cast<double>(vals.size())));
                    } else {
                        out << ',';
                    }
                    out << '\n';
                }
            }
            if (!out) {
                throw ReportError("write failed for '" + path.string() + "'");
            }
            written.push_back(path);
        }
    }
    return written;
}

} // namespace samgp
