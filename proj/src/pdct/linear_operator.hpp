#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdct {

// Matrix-free linear map between flat vectors of doubles.
//
// Contract: apply_transpose is the exact matrix transpose of apply, so
// <K x, y> == <x, K^T y> up to rounding. Both calls overwrite their output.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual std::size_t domain_size() const = 0;
    virtual std::size_t range_size() const = 0;

    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
    virtual void apply_transpose(std::span<const double> y, std::span<double> x) const = 0;

    // |K| 1 and |K|^T 1, where |K| takes the magnitude of every matrix element.
    virtual std::vector<double> abs_row_sums() const = 0;
    virtual std::vector<double> abs_col_sums() const = 0;

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> y) const;

protected:
    void check_apply(std::span<const double> x, std::span<double> y) const;
    void check_transpose(std::span<const double> y, std::span<double> x) const;
};

inline std::vector<double> absolute_row_sums(const LinearOperator& k) { return k.abs_row_sums(); }
inline std::vector<double> absolute_col_sums(const LinearOperator& k) { return k.abs_col_sums(); }

class IdentityOperator final : public LinearOperator {
public:
    explicit IdentityOperator(std::size_t n) : n_(n) {}

    std::size_t domain_size() const override { return n_; }
    std::size_t range_size() const override { return n_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_transpose(std::span<const double> y, std::span<double> x) const override;
    std::vector<double> abs_row_sums() const override { return std::vector<double>(n_, 1.0); }
    std::vector<double> abs_col_sums() const override { return std::vector<double>(n_, 1.0); }

    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    std::size_t n_;
};

// Row-major dense matrix. Mostly useful for small systems and for checking
// matrix-free operators against their materialized form.
class DenseOperator final : public LinearOperator {
public:
    DenseOperator(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    // Materializes K column by column from its action on basis vectors.
    static DenseOperator materialize(const LinearOperator& k);

    std::size_t domain_size() const override { return cols_; }
    std::size_t range_size() const override { return rows_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_transpose(std::span<const double> y, std::span<double> x) const override;
    std::vector<double> abs_row_sums() const override;
    std::vector<double> abs_col_sums() const override;

    double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    std::span<const double> data() const noexcept { return a_; }

    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> a_;
};

// K = (top; bottom): x -> (top x, bottom x) and (y, z) -> top^T y + bottom^T z.
// Holds references; both operators must outlive the stack.
class StackedOperator final : public LinearOperator {
public:
    StackedOperator(const LinearOperator& top, const LinearOperator& bottom);

    const LinearOperator& top() const noexcept { return top_; }
    const LinearOperator& bottom() const noexcept { return bottom_; }

    std::size_t domain_size() const override { return top_.domain_size(); }
    std::size_t range_size() const override { return top_.range_size() + bottom_.range_size(); }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_transpose(std::span<const double> y, std::span<double> x) const override;
    std::vector<double> abs_row_sums() const override;
    std::vector<double> abs_col_sums() const override;

    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    const LinearOperator& top_;
    const LinearOperator& bottom_;
};

} // namespace pdct
