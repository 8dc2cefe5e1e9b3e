#pragma once

#include <vector>

#include "gravre/kepler.hpp"
#include "gravre/types.hpp"

namespace gravre {

using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Guard distance used while integrating.
inline constexpr double kDynamicsGuard = 1e-9;

// ---- Db1: (r, θ, ṙ, θ̇) ----

/// r̈ = rBθ̇(Bθ̇ − 2L)/S² − ∂rV,  θ̈ = 2ṙ(L − Bθ̇)/(rS) − S/(Br²)·∂θV,  S = r² + B
Vec4 db1_rhs(const Db1Params& p, double L, const Vec4& x);
/// φ̇ = (L − Bθ̇)/S
double db1_phi_dot(const Db1Params& p, double L, const Vec4& x);
/// ½ṙ² + ½(Br²/S)θ̇² + V
double db1_energy(const Db1Params& p, double L, const Vec4& x);

// ---- Db2: (r, θ1, θ2, ṙ, θ̇1, θ̇2) ----

/// With w = B1θ̇1 + B2θ̇2:  r̈ = rw(w − 2L)/S² − ∂rV,  θ̈ = 2ṙ(L − w)/(rS)·(1,1) − Mθ⁻¹∇θV
Vec6 db2_rhs(const Db2Params& p, double L, const Vec6& x);
/// φ̇ = (L − w)/S
double db2_phi_dot(const Db2Params& p, double L, const Vec6& x);
/// ½ṙ² + ½θ̇ᵀMθθ̇ + V
double db2_energy(const Db2Params& p, double L, const Vec6& x);
/// Angular mass matrix of the reduced system.
Mat2 db2_angular_mass(const Db2Params& p, double r);

// ---- Kepler: (r, ṙ) ----

Eigen::Vector2d kepler_rhs(const KeplerParams& p, const Eigen::Vector2d& x);
double kepler_energy(const KeplerParams& p, const Eigen::Vector2d& x);

// ---- integration ----

struct IntegrateOptions {
    double t_end = 10.0;
    double tol = 1e-10;  // absolute and relative
    int samples = 1001;  // including both ends
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x;  // reduced state (φ excluded)
    std::vector<double> phi;
    std::vector<double> energy;
};

/// Dormand–Prince 5(4) with dense output. Throws CollisionError below the guard and StepUnderflow
/// when the step size collapses.
Trajectory integrate(const Db1Params& p, double L, const Vec4& x0, const IntegrateOptions& o);
Trajectory integrate(const Db2Params& p, double L, const Vec6& x0, const IntegrateOptions& o);
Trajectory integrate(const KeplerParams& p, const Eigen::Vector2d& x0, const IntegrateOptions& o);

// ---- linearization at an RE ----

/// [[0, I], [−M⁻¹H, G]] with G the gyroscopic block. Checks the RE.
Mat4 assemble_linearization(const Db1Params& p, double L, double r, double theta);
Mat6 assemble_linearization(const Db2Params& p, double L, double r, double theta1, double theta2);

/// Same blocks from a supplied Hessian of V (no equilibrium check).
Mat4 linearization_from_hessian(const Db1Params& p, double L, double r, const Mat2& H);
Mat6 linearization_from_hessian(const Db2Params& p, double L, double r, const Mat3& H);

}  // namespace gravre
