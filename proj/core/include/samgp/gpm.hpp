#pragma once

#include <cstddef>
#include <span>

#include "samgp/expr.hpp"
#include "samgp/matrix.hpp"

namespace samgp {

inline constexpr double kDefaultPhenotypeTolerance = 1e-12;

struct PhenotypeReport {
    ExprTree phenotype;
    std::size_t genotype_size{0};
    std::size_t phenotype_size{0};
    std::size_t redundancy{0};
    // The tolerant reduction drifted past `tol` and exact matching was used instead.
    bool exact_fallback{false};
};

// |a - b| <= tol * max(1, |a|, |b|) elementwise; tol = 0 means bitwise-equal values.
[[nodiscard]] bool semantically_close(std::span<const double> a, std::span<const double> b, double tol) noexcept;

// Genotype-to-phenotype mapping by removal of semantically ineffective code. Uses the
// per-node vectors of one evaluation pass over `features`:
//   - a function node whose vector matches one of its children's is replaced by that
//     child (leftmost match wins);
//   - otherwise a function node whose vector is constant over the rows is replaced by a
//     single constant.
// Passes repeat until the tree stops changing. A tree with any non-finite intermediate
// value is returned unchanged.
[[nodiscard]] PhenotypeReport extract_phenotype(const ExprTree& tree, const Matrix& features,
                                                double tol = kDefaultPhenotypeTolerance);

} // namespace samgp
