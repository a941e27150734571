#pragma once

#include <array>
#include <complex>
#include <vector>

#include "chemowave/model.hpp"

namespace chemowave {

using Complex = std::complex<double>;
using Matrix4c = std::array<std::array<Complex, 4>, 4>;

/// One sample of the two essential-spectrum boundary curves in the weighted
/// space: S1 from the species block, S2 from the chemical block.
struct SpectrumPoint {
    double h = 0;
    Complex S1, S2;
};

/// Asymptotic matrix at +infinity of the first-order formulation
/// E_lambda = d/dxi + T of the weight-conjugated eigenvalue problem, in
/// variables (z1, z2, z1', z2').
Matrix4c T_lambda_plus(const ModelParams& params, const DerivedQuantities& dq,
                       double w_plus, Complex lambda);

/// Closed-form dispersion determinant det(T_lambda_plus - i h I) = F1 * F2,
/// factored into the two quadratic symbols.
Complex dispersion_det(const ModelParams& params, const DerivedQuantities& dq,
                       double w_plus, Complex lambda, double h);

/// Same determinant evaluated directly from the 4x4 matrix (Gaussian
/// elimination); the independent cross-check of the factorization.
Complex dispersion_det_direct(const ModelParams& params, const DerivedQuantities& dq,
                              double w_plus, Complex lambda, double h);

/// Curve values at a single Fourier parameter h.
SpectrumPoint curve_point(const ModelParams& params, const DerivedQuantities& dq,
                          double w_plus, double h);

/// Uniform sampling of both curves on [h_min, h_max]; n >= 2 samples.
/// n_threads > 1 splits the range across worker threads.
std::vector<SpectrumPoint> essential_curves(const ModelParams& params,
                                            const DerivedQuantities& dq,
                                            double w_plus, double h_min, double h_max,
                                            size_t n, unsigned n_threads = 1);

/// Rightmost real part reached by the unstable curve: w_plus^2 - w_plus c + gamma
/// (the h = 0 vertex of S2).
double max_unstable_real_part(const ModelParams& params, double w_plus);

/// True iff T_lambda_plus has no purely imaginary eigenvalue, decided from
/// the roots of the two quadratic symbols.
bool is_hyperbolic(const ModelParams& params, const DerivedQuantities& dq,
                   double w_plus, Complex lambda, double tol = 1e-9);

}  // namespace chemowave
