#include "samgp/gpm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "samgp/error.hpp"
#include "samgp/eval.hpp"

namespace samgp {

bool semantically_close(std::span<const double> a, std::span<const double> b, double tol) noexcept
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        if (!(std::abs(a[i] - b[i]) <= tol * scale)) {
            return false;
        }
    }
    return true;
}

namespace {

bool is_constant(std::span<const double> v, double tol) noexcept
{
    if (v.empty()) {
        return false;
    }
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
    return *hi - *lo <= tol * scale;
}

class Reducer {
public:
    Reducer(const ExprTree& tree, const SubtreeValues& values, double tol)
        : tree_(tree), values_(values), tol_(tol) {}

    // Explicit work stack: evolved trees are far too deep for recursion.
    void reduce(std::vector<Node>& out) const
    {
        std::vector<std::size_t> todo{0};
        while (!todo.empty()) {
            const auto i = todo.back();
            todo.pop_back();
            const auto& node = tree_.node(i);
            if (node.is_terminal()) {
                out.push_back(node);
                continue;
            }
            const auto here = values_.of(i);
            const auto kids = tree_.children(i);
            const auto match = std::find_if(kids.begin(), kids.end(),
                                            [&](std::size_t c) { return semantically_close(here, values_.of(c), tol_); });
            if (match != kids.end()) {
                todo.push_back(*match);
                continue;
            }
            if (is_constant(here, tol_)) {
                out.push_back(Node::constant(here[0]));
                continue;
            }
            out.push_back(node);
            todo.insert(todo.end(), kids.rbegin(), kids.rend());
        }
    }

private:
    const ExprTree& tree_;
    const SubtreeValues& values_;
    double tol_;
};

bool finite_everywhere(const ExprTree& tree, const SubtreeValues& values)
{
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (!all_finite(values.of(i))) {
            return false;
        }
    }
    return true;
}

ExprTree reduce_to_fixpoint(const ExprTree& tree, const Matrix& features, double tol)
{
    ExprTree current = tree;
    while (true) {
        const auto values = evaluate_subtrees(current, features);
        if (!finite_everywhere(current, values)) {
            return current;
        }
        std::vector<Node> out;
        out.reserve(current.size());
        Reducer(current, values, tol).reduce(out);
        ExprTree next(std::move(out));
        if (next == current) {
            return current;
        }
        current = std::move(next);
    }
}

} // namespace

PhenotypeReport extract_phenotype(const ExprTree& tree, const Matrix& features, double tol)
{
    if (!(tol > 0.0)) {
        throw ConfigError("phenotype tolerance must be positive");
    }
    PhenotypeReport report{tree, tree.size(), tree.size(), 0, false};

    const auto genotype_values = evaluate_subtrees(tree, features);
    if (features.rows() == 0 || !finite_everywhere(tree, genotype_values)) {
        return report;
    }

    auto phenotype = reduce_to_fixpoint(tree, features, tol);
    if (!semantically_close(evaluate(phenotype, features).values, genotype_values.of(0), tol)) {
        // Small per-node deviations compounded through the ancestors; exact matching
        // cannot drift.
        phenotype = reduce_to_fixpoint(tree, features, 0.0);
        report.exact_fallback = true;
    }
    report.phenotype_size = phenotype.size();
    report.redundancy = report.genotype_size - report.phenotype_size;
    report.phenotype = std::move(phenotype);
    return report;
}

} // namespace samgp
