#pragma once

// Forward-difference image gradient and its negative transpose.
//
//   (D_s x)(i,j) = x(i+1,j) - x(i,j)   for i < M-1,   -x(M-1,j) at i = M-1
//   (D_t x)(i,j) = x(i,j+1) - x(i,j)   for j < M-1,   -x(i,M-1) at j = M-1
//
// div is defined through -div = grad^T, with out-of-border entries read as 0:
//   (div v)(i,j) = v_s(i,j) - v_s(i-1,j) + v_t(i,j) - v_t(i,j-1).
//
// The scaled variant multiplies both by a positive weight, which is how a TV
// weight gets folded into the operator for the preconditioned solver.

#include "pdct/linear_operator.hpp"
#include "pdct/spaces.hpp"

namespace pdct {

class GradientOperator final : public LinearOperator {
public:
    explicit GradientOperator(std::size_t m, double scale = 1.0);

    std::size_t image_size() const noexcept { return m_; }
    double scale() const noexcept { return scale_; }

    std::size_t domain_size() const override { return m_ * m_; }
    std::size_t range_size() const override { return 2 * m_ * m_; }

    // range layout: all s differences, then all t differences
    void apply(std::span<const double> x, std::span<double> v) const override;
    // writes grad^T v = -div v
    void apply_transpose(std::span<const double> v, std::span<double> x) const override;

    std::vector<double> abs_row_sums() const override;
    std::vector<double> abs_col_sums() const override;

    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    std::size_t m_;
    double scale_;
};

VectorField gradient(const Image& u);
Image divergence(const VectorField& v);

VectorField gradient_scaled(const Image& u, double lambda);
Image divergence_scaled(const VectorField& v, double lambda);

// ||(|grad u|)||_1, the isotropic TV semi-norm.
double total_variation(const Image& u);

} // namespace pdct
