#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace gravre {

/// Jacobian of a gradient by central differences, one Richardson step.
/// Step h_j = rel * max(1, |x_j|). Returns the raw (unsymmetrized) matrix.
template <int N, class Grad>
Eigen::Matrix<double, N, N> fd_jacobian(const Grad& grad, const Eigen::Matrix<double, N, 1>& x, double rel = 1e-5) {
    Eigen::Matrix<double, N, N> J;
    for (int j = 0; j < N; ++j) {
        const double h = rel * std::max(1.0, std::abs(x[j]));
        auto central = [&](double s) {
            Eigen::Matrix<double, N, 1> xp = x, xm = x;
            xp[j] += s;
            xm[j] -= s;
            return Eigen::Matrix<double, N, 1>((grad(xp) - grad(xm)) / (2.0 * s));
        };
        const Eigen::Matrix<double, N, 1> d1 = central(h);
        const Eigen::Matrix<double, N, 1> d2 = central(0.5 * h);
        J.col(j) = (4.0 * d2 - d1) / 3.0;
    }
    return J;
}

/// Symmetrize in place; returns the relative asymmetry that was removed.
template <int N>
double symmetrize(Eigen::Matrix<double, N, N>& H) {
    const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff() / scale;
    H = 0.5 * (H + H.transpose()).eval();
    return asym;
}

}  // namespace gravre
