#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "chemowave/wave.hpp"
#include "chemowave/weights.hpp"

namespace chemowave {

/// Pointwise coefficients a1..a8 of the linearized operator along the wave,
/// plus their limits at +infinity for the base point (0,0).
struct LinearizationCoefficients {
    std::vector<double> xi;
    std::vector<double> a1, a2, a3, a4, a5, a6, a7, a8;
    // Left-bounded companions: a4..a7 are unbounded on the left half-line,
    // but divided by eta_minus (i.e. multiplied by e^{a xi} there) they stay
    // bounded. These are the quantities the conjugated operator uses.
    std::vector<double> a4_em, a5_em, a6_em, a7_em;
    std::array<double, 8> a_plus_limits{};
    double drift_c = 0.0;  // first-order coefficient of the v-equation block
};

/// Optional perturbation of the base point; sampled on the profile grid.
struct BasePerturbation {
    std::vector<double> x;
    std::vector<double> y;
};

LinearizationCoefficients coefficients(const WaveProfile& profile,
                                       const ModelParams& params,
                                       const DerivedQuantities& dq,
                                       const std::optional<BasePerturbation>& base,
                                       const WeightSpec& weights);

/// Weight-conjugated finite-difference discretization of the linearized
/// operator, acting on interleaved (z1, z2) = (eta_plus x, eta y). Centered
/// second-order stencils; homogeneous Dirichlet rows at both ends.
class ConjugatedOperator {
  public:
    using Complex = std::complex<double>;

    ConjugatedOperator(const LinearizationCoefficients& coeffs,
                       const WeightSpec& weights, double dx);

    size_t grid_size() const { return n_; }
    double dx() const { return dx_; }
    const std::vector<double>& xi() const { return xi_; }
    /// Stencil half-width per component block.
    int bandwidth() const { return 1; }

    /// Applies the operator to (z1, z2) sampled on the grid.
    void apply(std::span<const Complex> z1, std::span<const Complex> z2,
               std::span<Complex> out1, std::span<Complex> out2) const;

  private:
    size_t n_;
    double dx_;
    std::vector<double> xi_;
    // Per-point stencil coefficients of the four conjugated blocks:
    // block(i,j) = c2 * d_xx + c1 * d_x + c0 (c2 = c1 = 0 for block 21).
    std::vector<double> c2_11_, c1_11_, c0_11_;
    std::vector<double> c2_12_, c1_12_, c0_12_;
    std::vector<double> c0_21_;
    std::vector<double> c2_22_, c1_22_, c0_22_;
};

/// Weyl-sequence residual: || (op - lambda) phi || / || phi || in discrete sup
/// norm for phi = (0, bump * e^{i h xi}) windowed at (center, width).
double weyl_residual(const ConjugatedOperator& op, std::complex<double> lambda,
                     double h, double center, double width);

}  // namespace chemowave
