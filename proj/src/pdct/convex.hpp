#pragma once

// Proximal maps of the dual data terms and the TV conjugate, the
// nonnegativity projection, and evaluators for the finite parts of the
// conjugates.
//
// Indicator functions never appear as floating infinities: inside a prox they
// become projections, and elsewhere the diagnostics module reports them as
// feasibility residuals.
//
// The span kernels work in place and take one step size per component so the
// same code serves scalar and diagonally preconditioned iterations.

#include <span>

#include "pdct/spaces.hpp"

namespace pdct {

enum class DataKind { LeastSquares, KullbackLeibler, L1, BallConstraint };

// Data fidelity F1 together with the measured sinogram.
struct DataTerm {
    DataKind kind = DataKind::LeastSquares;
    Sinogram g;
    double epsilon = 0.0;   // BallConstraint radius

    void validate() const;
};

enum class RegularizerKind { None, TV };

struct Regularizer {
    RegularizerKind kind = RegularizerKind::None;
    double lambda = 0.0;
};

enum class ImageConstraint { Unconstrained, NonNegative };

// ---- in-place kernels ------------------------------------------------------

// (y - sigma g) / (1 + sigma)
void prox_ls_dual_inplace(std::span<double> y, std::span<const double> g, std::span<const double> sigma);
// (1 + y - sqrt((y - 1)^2 + 4 sigma g)) / 2, evaluated so that 1 - y' >= 0 exactly
void prox_kl_dual_inplace(std::span<double> y, std::span<const double> g, std::span<const double> sigma);
// clamp(y - sigma g, -1, 1)
void prox_l1_dual_inplace(std::span<double> y, std::span<const double> g, std::span<const double> sigma);
// (1 - sigma eps / ||w||)_+ w with w = y - sigma g
void prox_ball_dual_inplace(std::span<double> y, std::span<const double> g, double epsilon, double sigma);
// per pixel: z unchanged when |z| <= bound, else bound z / |z|.
// s and t are the two components of the same vector field.
void prox_tv_dual_inplace(std::span<double> s, std::span<double> t, double bound);
void pos_inplace(std::span<double> x);

// ---- field-level wrappers --------------------------------------------------

Sinogram prox_ls_dual(const Sinogram& y, const Sinogram& g, double sigma);
Sinogram prox_kl_dual(const Sinogram& y, const Sinogram& g, double sigma);
Sinogram prox_l1_dual(const Sinogram& y, const Sinogram& g, double sigma);
Sinogram prox_ball_dual(const Sinogram& y, const Sinogram& g, double epsilon, double sigma);
VectorField prox_tv_dual(const VectorField& z, double lambda);

Image pos(Image x);
Sinogram pos(Sinogram x);

// ---- conjugates (finite parts) ---------------------------------------------

// Floor applied to log arguments when reporting KL values.
inline constexpr double kLogFloor = 1e-300;

// 0.5 ||p||^2 + <p, g>
double conjugate_ls(std::span<const double> p, std::span<const double> g);
// sum -g ln max(1 - p, floor); terms with g = 0 contribute 0
double conjugate_kl(std::span<const double> p, std::span<const double> g);
// <p, g>  (the Box(1) indicator is a residual)
double conjugate_l1(std::span<const double> p, std::span<const double> g);
// eps ||p||_2 + <p, g>
double conjugate_ball(std::span<const double> p, std::span<const double> g, double epsilon);

double conjugate_value(const DataTerm& term, const Sinogram& p);

// F2*(q) = indicator(|q| <= lambda): its finite part is 0. Likewise for the
// conjugate of the nonnegativity indicator. Kept for symmetry in callers.
inline double conjugate_tv(const VectorField&, double) { return 0.0; }

// max over the grid of (x * grid[k] - f[k]). Entries of f may be +inf.
double legendre_1d(std::span<const double> grid, std::span<const double> f, double x);

} // namespace pdct
