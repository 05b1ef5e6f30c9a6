#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace samgp {

// Dense real matrix stored column-major, so each feature column is contiguous.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    // rows given as a list of equally sized row vectors.
    [[nodiscard]] static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] double& at(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    [[nodiscard]] std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
    [[nodiscard]] std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

    [[nodiscard]] Matrix select_rows(std::span<const std::size_t> indices) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

inline Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c && j < rows[i].size(); ++j) {
            m.at(i, j) = rows[i][j];
        }
    }
    return m;
}

inline Matrix Matrix::select_rows(std::span<const std::size_t> indices) const
{
    Matrix m(indices.size(), cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t k = 0; k < indices.size(); ++k) {
            m.at(k, j) = at(indices[k], j);
        }
    }
    return m;
}

} // namespace samgp
