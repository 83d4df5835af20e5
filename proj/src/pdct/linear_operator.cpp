#include "pdct/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdct/error.hpp"

namespace pdct {

std::vector<double> LinearOperator::apply(std::span<const double> x) const
{
    std::vector<double> y(range_size());
    apply(x, y);
    return y;
}

std::vector<double> LinearOperator::apply_transpose(std::span<const double> y) const
{
    std::vector<double> x(domain_size());
    apply_transpose(y, x);
    return x;
}

void LinearOperator::check_apply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != domain_size() || y.size() != range_size()) {
        throw ShapeError("apply: operator is " + std::to_string(range_size()) + "x" + std::to_string(domain_size()) +
                         ", got x of " + std::to_string(x.size()) + " and y of " + std::to_string(y.size()));
    }
}

void LinearOperator::check_transpose(std::span<const double> y, std::span<double> x) const
{
    if (x.size() != domain_size() || y.size() != range_size()) {
        throw ShapeError("apply_transpose: operator is " + std::to_string(range_size()) + "x" +
                         std::to_string(domain_size()) + ", got y of " + std::to_string(y.size()) + " and x of " +
                         std::to_string(x.size()));
    }
}

void IdentityOperator::apply(std::span<const double> x, std::span<double> y) const
{
    check_apply(x, y);
    std::copy(x.begin(), x.end(), y.begin());
}

void IdentityOperator::apply_transpose(std::span<const double> y, std::span<double> x) const
{
    check_transpose(y, x);
    std::copy(y.begin(), y.end(), x.begin());
}

DenseOperator::DenseOperator(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), a_(std::move(row_major))
{
    if (a_.size() != rows * cols) {
        throw ShapeError("DenseOperator: expected " + std::to_string(rows * cols) + " entries");
    }
}

DenseOperator DenseOperator::materialize(const LinearOperator& k)
{
    const std::size_t rows = k.range_size();
    const std::size_t cols = k.domain_size();
    std::vector<double> a(rows * cols);
    std::vector<double> e(cols, 0.0);
    std::vector<double> col(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        e[c] = 1.0;
        k.apply(e, col);
        e[c] = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            a[r * cols + c] = col[r];
        }
    }
    return DenseOperator(rows, cols, std::move(a));
}

void DenseOperator::apply(std::span<const double> x, std::span<double> y) const
{
    check_apply(x, y);
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        const double* row = a_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) {
            sum += row[c] * x[c];
        }
        y[r] = sum;
    }
}

void DenseOperator::apply_transpose(std::span<const double> y, std::span<double> x) const
{
    check_transpose(y, x);
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* row = a_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) {
            x[c] += row[c] * y[r];
        }
    }
}

std::vector<double> DenseOperator::abs_row_sums() const
{
    std::vector<double> s(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            s[r] += std::abs(a_[r * cols_ + c]);
        }
    }
    return s;
}

std::vector<double> DenseOperator::abs_col_sums() const
{
    std::vector<double> s(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            s[c] += std::abs(a_[r * cols_ + c]);
        }
    }
    return s;
}

StackedOperator::StackedOperator(const LinearOperator& top, const LinearOperator& bottom) : top_(top), bottom_(bottom)
{
    if (top.domain_size() != bottom.domain_size()) {
        throw ShapeError("StackedOperator: operands have different domains");
    }
}

void StackedOperator::apply(std::span<const double> x, std::span<double> y) const
{
    check_apply(x, y);
    top_.apply(x, y.first(top_.range_size()));
    bottom_.apply(x, y.subspan(top_.range_size()));
}

void StackedOperator::apply_transpose(std::span<const double> y, std::span<double> x) const
{
    check_transpose(y, x);
    top_.apply_transpose(y.first(top_.range_size()), x);
    std::vector<double> lower(x.size());
    bottom_.apply_transpose(y.subspan(top_.range_size()), lower);
    for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] += lower[k];
    }
}

std::vector<double> StackedOperator::abs_row_sums() const
{
    auto s = top_.abs_row_sums();
    auto b = bottom_.abs_row_sums();
    s.insert(s.end(), b.begin(), b.end());
    return s;
}

std::vector<double> StackedOperator::abs_col_sums() const
{
    auto s = top_.abs_col_sums();
    auto b = bottom_.abs_col_sums();
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] += b[k];
    }
    return s;
}

} // namespace pdct
