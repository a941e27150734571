#include "chemowave/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace chemowave {

namespace {

// Asymptotic second-order coefficients of the two decoupled blocks at
// +infinity, after conjugation by the weight with right rate w_plus:
//   alpha z1'' + B1 z1' + C1 z1 = lambda z1
//         z2'' + B2 z2' + C2 z2 = lambda z2
struct AsymptoticBlocks {
    double alpha, B1, C1, B2, C2;
};

AsymptoticBlocks blocks(const ModelParams& params, double w_plus) {
    const double c = params.c, gamma = params.gamma, alpha = params.alpha;
    const double a2p = c + 0.5 * params.chi * (c - std::sqrt(c * c - 4.0 * gamma));
    return {alpha, a2p - 2.0 * w_plus * alpha, w_plus * w_plus * alpha - w_plus * a2p,
            c - 2.0 * w_plus, w_plus * w_plus - w_plus * c + gamma};
}

}  // namespace

Matrix4c T_lambda_plus(const ModelParams& params, const DerivedQuantities& dq,
                       double w_plus, Complex lambda) {
    (void)dq;
    const AsymptoticBlocks b = blocks(params, w_plus);
    // Convention E_lambda = d/dxi + T in variables (z1, z2, z1', z2'), so the
    // first-order reduction rows carry -1 and the second-order rows the
    // negated companion entries.
    Matrix4c T{};
    T[0][2] = -1.0;
    T[1][3] = -1.0;
    T[2][0] = (b.C1 - lambda) / b.alpha;
    T[2][2] = b.B1 / b.alpha;
    T[3][1] = b.C2 - lambda;
    T[3][3] = b.B2;
    return T;
}

Complex dispersion_det(const ModelParams& params, const DerivedQuantities& dq,
                       double w_plus, Complex lambda, double h) {
    (void)dq;
    const AsymptoticBlocks b = blocks(params, w_plus);
    const Complex F1 = -h * h - Complex(0, 1) * h * (b.B1 / b.alpha) +
                       (b.C1 - lambda) / b.alpha;
    const Complex F2 = -h * h - Complex(0, 1) * h * b.B2 + (b.C2 - lambda);
    return F1 * F2;
}

Complex dispersion_det_direct(const ModelParams& params, const DerivedQuantities& dq,
                              double w_plus, Complex lambda, double h) {
    Matrix4c M = T_lambda_plus(params, dq, w_plus, lambda);
    for (int i = 0; i < 4; ++i) M[i][i] -= Complex(0, h);
    // Gaussian elimination with partial pivoting.
    Complex det = 1.0;
    for (int k = 0; k < 4; ++k) {
        int piv = k;
        for (int i = k + 1; i < 4; ++i)
            if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
        if (piv != k) {
            std::swap(M[piv], M[k]);
            det = -det;
        }
        if (M[k][k] == Complex(0.0)) return 0.0;
        det *= M[k][k];
        for (int i = k + 1; i < 4; ++i) {
            const Complex r = M[i][k] / M[k][k];
            for (int j = k; j < 4; ++j) M[i][j] -= r * M[k][j];
        }
    }
    return det;
}

SpectrumPoint curve_point(const ModelParams& params, const DerivedQuantities& dq,
                          double w_plus, double h) {
    (void)dq;
    const AsymptoticBlocks b = blocks(params, w_plus);
    SpectrumPoint pt;
    pt.h = h;
    // F1 = 0 and F2 = 0 solved for lambda.
    pt.S1 = Complex(-b.alpha * h * h + b.C1, -b.B1 * h);
    pt.S2 = Complex(-h * h + b.C2, -b.B2 * h);
    return pt;
}

std::vector<SpectrumPoint> essential_curves(const ModelParams& params,
                                            const DerivedQuantities& dq,
                                            double w_plus, double h_min, double h_max,
                                            size_t n, unsigned n_threads) {
    if (n < 2) throw std::invalid_argument("need at least 2 samples");
    if (!(h_max > h_min)) throw std::invalid_argument("empty h range");
    std::vector<SpectrumPoint> out(n);
    const double dh = (h_max - h_min) / static_cast<double>(n - 1);
    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i)
            out[i] = curve_point(params, dq, w_plus, h_min + dh * static_cast<double>(i));
    };
    if (n_threads <= 1) {
        work(0, n);
    } else {
        const unsigned t = std::min<unsigned>(n_threads, static_cast<unsigned>(n));
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < t; ++k)
            pool.emplace_back(work, n * k / t, n * (k + 1) / t);
        for (auto& th : pool) th.join();
    }
    return out;
}

double max_unstable_real_part(const ModelParams& params, double w_plus) {
    return w_plus * w_plus - w_plus * params.c + params.gamma;
}

bool is_hyperbolic(const ModelParams& params, const DerivedQuantities& dq,
                   double w_plus, Complex lambda, double tol) {
    (void)dq;
    const AsymptoticBlocks b = blocks(params, w_plus);
    // Spatial eigenvalues are the roots of z^2 + (B/A) z + (C - lambda)/A = 0
    // for each block; hyperbolic iff none is purely imaginary.
    const auto roots_clear_axis = [&](double B, double C, double A) {
        const Complex half_b = Complex(B / A, 0.0) * 0.5;
        const Complex disc = half_b * half_b - (Complex(C, 0.0) - lambda) / A;
        const Complex s = std::sqrt(disc);
        return std::abs((-half_b + s).real()) > tol &&
               std::abs((-half_b - s).real()) > tol;
    };
    return roots_clear_axis(b.B1, b.C1, b.alpha) && roots_clear_axis(b.B2, b.C2, 1.0);
}

}  // namespace chemowave
