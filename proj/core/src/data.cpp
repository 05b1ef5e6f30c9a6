#include "samgp/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "samgp/error.hpp"
#include "samgp/expr.hpp"

namespace samgp {

std::vector<double> column_std(const Matrix& m)
{
    std::vector<double> out(m.cols(), 0.0);
    if (m.rows() == 0) {
        return out;
    }
    const auto n = static_cast<double>(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto col = m.col(j);
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : col) {
            ss += (v - mean) * (v - mean);
        }
        out[j] = std::sqrt(ss / n);
    }
    return out;
}

Dataset Dataset::make(Matrix features, std::vector<double> target, std::string name)
{
    if (features.rows() != target.size()) {
        throw IngestionError(IngestionError::Kind::Shape, "dataset '" + name + "': " + std::to_string(features.rows()) +
                                                              " feature rows but " + std::to_string(target.size()) +
                                                              " target values");
    }
    for (std::size_t j = 0; j < features.cols(); ++j) {
        for (double v : features.col(j)) {
            if (!std::isfinite(v)) {
                throw IngestionError(IngestionError::Kind::NonFinite,
                                     "dataset '" + name + "': non-finite value in feature column " + std::to_string(j));
            }
        }
    }
    if (!std::all_of(target.begin(), target.end(), [](double v) { return std::isfinite(v); })) {
        throw IngestionError(IngestionError::Kind::NonFinite, "dataset '" + name + "': non-finite target value");
    }
    auto sd = column_std(features);
    return Dataset{std::move(features), std::move(target), std::move(sd), std::move(name)};
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const
{
    std::vector<double> t;
    t.reserve(indices.size());
    for (auto i : indices) {
        t.push_back(target[i]);
    }
    auto m = features.select_rows(indices);
    auto sd = column_std(m);
    return Dataset{std::move(m), std::move(t), std::move(sd), name};
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_line(std::string_view line, char delim)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return cells;
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, const TargetColumn& target, const CsvOptions& opts)
{
    using Kind = IngestionError::Kind;
    std::ifstream in(path);
    if (!in) {
        throw IngestionError(Kind::Io, "cannot open '" + path.string() + "'");
    }

    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_line(line, opts.delimiter);
        if (first && opts.has_header) {
            for (auto c : cells) {
                header.emplace_back(c);
            }
            width = cells.size();
            first = false;
            continue;
        }
        if (first) {
            width = cells.size();
        }
        first = false;
        if (cells.size() != width) {
            throw IngestionError(Kind::Shape, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                  std::to_string(width) + " cells, found " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(width);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            auto cell = cells[j];
            if (!cell.empty() && cell.front() == '+') {
                cell.remove_prefix(1);
            }
            double v = 0.0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || p != cell.data() + cell.size()) {
                throw IngestionError(Kind::Parse, path.string() + ":" + std::to_string(line_no) + ": cannot parse '" +
                                                      std::string(cells[j]) + "' in column " + std::to_string(j));
            }
            if (!std::isfinite(v)) {
                throw IngestionError(Kind::NonFinite, path.string() + ":" + std::to_string(line_no) +
                                                          ": non-finite value in column " + std::to_string(j));
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw IngestionError(Kind::Shape, "'" + path.string() + "' contains no data rows");
    }
    if (width < 2) {
        throw IngestionError(Kind::Shape, "'" + path.string() + "' needs at least one feature column and a target");
    }

    std::size_t target_col = 0;
    if (const auto* name = std::get_if<std::string>(&target)) {
        const auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) {
            throw IngestionError(Kind::MissingTarget, "target column '" + *name + "' not found in '" + path.string() + "'");
        }
        target_col = static_cast<std::size_t>(it - header.begin());
    } else {
        const long idx = std::get<long>(target);
        const long w = static_cast<long>(width);
        if (idx >= w || idx < -w) {
            throw IngestionError(Kind::MissingTarget,
                                 "target column index " + std::to_string(idx) + " out of range for '" + path.string() + "'");
        }
        target_col = static_cast<std::size_t>(idx < 0 ? w + idx : idx);
    }

    Matrix features(rows.size(), width - 1);
    std::vector<double> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t out_col = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (j == target_col) {
                y[i] = rows[i][j];
            } else {
                features.at(i, out_col++) = rows[i][j];
            }
        }
    }
    return Dataset::make(std::move(features), std::move(y), path.stem().string());
}

void write_csv(const Dataset& d, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IngestionError(IngestionError::Kind::Io, "cannot write '" + path.string() + "'");
    }
    for (std::size_t j = 0; j < d.cols(); ++j) {
        out << 'x' << j << ',';
    }
    out << "y\n";
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = 0; j < d.cols(); ++j) {
            out << format_real(d.features.at(i, j)) << ',';
        }
        out << format_real(d.target[i]) << '\n';
    }
    if (!out) {
        throw IngestionError(IngestionError::Kind::Io, "write failed for '" + path.string() + "'");
    }
}

SplitPair monte_carlo_split(const Dataset& d, double train_fraction, Rng& rng)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie strictly between 0 and 1");
    }
    if (d.rows() < 2) {
        throw ConfigError("splitting needs at least two rows");
    }
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(d.rows())));
    if (n_train == 0 || n_train >= d.rows()) {
        throw ConfigError("train fraction " + std::to_string(train_fraction) + " leaves an empty partition for " +
                          std::to_string(d.rows()) + " rows");
    }
    std::vector<std::size_t> perm(d.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Fisher-Yates with an explicit distribution keeps the permutation stable across stdlibs.
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
        std::swap(perm[i], perm[j]);
    }
    const std::span<const std::size_t> all(perm);
    return SplitPair{d.select_rows(all.first(n_train)), d.select_rows(all.subspan(n_train)), train_fraction};
}

double synth_levy(std::span<const double> x)
{
    constexpr double pi = std::numbers::pi;
    const auto d = x.size();
    auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
    const double s0 = std::sin(pi * w(0));
    double f = s0 * s0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const double wi = w(i);
        const double s = std::sin(pi * wi + 1.0);
        f += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
    }
    const double wd = w(d - 1);
    const double sd = std::sin(2.0 * pi * wd);
    f += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
    return f;
}

double synth_ackley(std::span<const double> x)
{
    constexpr double a = 20.0;
    constexpr double b = 0.2;
    constexpr double c = 2.0 * std::numbers::pi;
    const auto d = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(c * v);
    }
    return -a * std::exp(-b * std::sqrt(sq / d)) - std::exp(cs / d) + a + std::numbers::e;
}

double synth_rastrigin(std::span<const double> x)
{
    double f = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        f += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    }
    return f;
}

double synth_rosenbrock(std::span<const double> x)
{
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double t = x[i + 1] - x[i] * x[i];
        f += 100.0 * t * t + (x[i] - 1.0) * (x[i] - 1.0);
    }
    return f;
}

double synth_eval(SyntheticFn fn, std::span<const double> x)
{
    switch (fn) {
    case SyntheticFn::Levy: return synth_levy(x);
    case SyntheticFn::Ackley: return synth_ackley(x);
    case SyntheticFn::Rastrigin: return synth_rastrigin(x);
    case SyntheticFn::Rosenbrock: return synth_rosenbrock(x);
    }
    return 0.0;
}

double synth_bound(SyntheticFn fn) noexcept
{
    switch (fn) {
    case SyntheticFn::Levy: return 10.0;
    case SyntheticFn::Ackley: return 32.768;
    case SyntheticFn::Rastrigin: return 5.12;
    case SyntheticFn::Rosenbrock: return 2.048;
    }
    return 0.0;
}

std::string_view synth_name(SyntheticFn fn) noexcept
{
    switch (fn) {
    case SyntheticFn::Levy: return "levy";
    case SyntheticFn::Ackley: return "ackley";
    case SyntheticFn::Rastrigin: return "rastrigin";
    case SyntheticFn::Rosenbrock: return "rosenbrock";
    }
    return "?";
}

SyntheticFn synth_from_name(std::string_view name)
{
    for (auto fn : kAllSynthetic) {
        if (synth_name(fn) == name) {
            return fn;
        }
    }
    throw ConfigError("unknown synthetic function '" + std::string(name) + "' (expected levy, ackley, rastrigin or rosenbrock)");
}

Dataset sample_synthetic(SyntheticFn fn, std::size_t n_points, Rng& rng, std::size_t dims)
{
    if (n_points == 0 || dims == 0) {
        throw ConfigError("synthetic sampling needs at least one point and one dimension");
    }
    const double bound = synth_bound(fn);
    std::uniform_real_distribution<double> coord(-bound, bound);
    Matrix features(n_points, dims);
    std::vector<double> y(n_points);
    std::vector<double> x(dims);
    for (std::size_t i = 0; i < n_points; ++i) {
        for (std::size_t j = 0; j < dims; ++j) {
            x[j] = coord(rng);
            features.at(i, j) = x[j];
        }
        y[i] = synth_eval(fn, x);
    }
    return Dataset::make(std::move(features), std::move(y), std::string(synth_name(fn)));
}

} // namespace samgp
