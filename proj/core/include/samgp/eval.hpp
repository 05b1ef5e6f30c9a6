#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "samgp/expr.hpp"
#include "samgp/matrix.hpp"

namespace samgp {

// Output vector of a tree over a data partition. `valid` is false as soon as one entry
// is NaN or infinite.
struct Semantics {
    std::vector<double> values;
    bool valid{true};

    [[nodiscard]] static Semantics from_values(std::vector<double> v);
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

    friend bool operator==(const Semantics&, const Semantics&) = default;
};

[[nodiscard]] bool all_finite(std::span<const double> v) noexcept;

// Unprotected IEEE evaluation: 0/0 is NaN, log/sqrt of negatives are NaN, exp may overflow.
// Throws StructuralError when the tree references a feature column that does not exist.
[[nodiscard]] Semantics evaluate(const ExprTree& tree, const Matrix& features);

// Per-node output vectors of one bottom-up pass; of(i) is the vector of the subtree rooted
// at prefix index i.
class SubtreeValues {
public:
    SubtreeValues(std::size_t nodes, std::size_t rows) : rows_(rows), buffer_(nodes * rows) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::span<const double> of(std::size_t i) const { return {buffer_.data() + i * rows_, rows_}; }
    [[nodiscard]] std::span<double> of(std::size_t i) { return {buffer_.data() + i * rows_, rows_}; }

private:
    std::size_t rows_;
    std::vector<double> buffer_;
};

[[nodiscard]] SubtreeValues evaluate_subtrees(const ExprTree& tree, const Matrix& features);

} // namespace samgp
