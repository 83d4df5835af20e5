#pragma once

// Dense linear-algebra oracles built on Eigen.

#include <Eigen/Dense>
#include <vector>

#include "pdct/linear_operator.hpp"

namespace testing {

inline Eigen::MatrixXd to_eigen(const pdct::LinearOperator& k)
{
    const pdct::DenseOperator d = pdct::DenseOperator::materialize(k);
    Eigen::MatrixXd m(d.range_size(), d.domain_size());
    for (std::size_t r = 0; r < d.range_size(); ++r) {
        for (std::size_t c = 0; c < d.domain_size(); ++c) {
            m(r, c) = d(r, c);
        }
    }
    return m;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> from_eigen(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
{
    return a.colPivHouseholderQr().solve(b);
}

// Lawson-Hanson active-set solution of min ||A x - b|| subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
{
    const Eigen::Index n = a.cols();
    const double tol = 1e-12 * a.norm() * b.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);

    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (passive[static_cast<std::size_t>(j)]) {
                idx.push_back(j);
            }
        }
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
        }
        const Eigen::VectorXd zs = least_squares(sub, b);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            z(idx[k]) = zs(static_cast<Eigen::Index>(k));
        }
        return z;
    };

    for (int outer = 0; outer < 10 * n; ++outer) {
        const Eigen::VectorXd w = a.transpose() * (b - a * x);
        Eigen::Index best = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > tol && (best < 0 || w(j) > w(best))) {
                best = j;
            }
        }
        if (best < 0) {
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;
        for (;;) {
            const Eigen::VectorXd z = solve_passive();
            double alpha = 1.0;
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    feasible = false;
                    alpha = std::min(alpha, x(j) / (x(j) - z(j)));
                }
            }
            if (feasible) {
                x = z;
                break;
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j) = 0.0;
                }
            }
        }
    }
    return x;
}

} // namespace testing
