#pragma once

#include "gravre/types.hpp"

namespace gravre {

/// d_uv is the distance between mass u of dumbbell 1 and mass v of dumbbell 2.
struct Db2Distances {
    double d11 = 0.0, d12 = 0.0, d21 = 0.0, d22 = 0.0;
};

Db2Distances db2_distances(const Db2Params& p, double r, double theta1, double theta2,
                           double guard = kCollisionGuard);

/// V = L²/(2(r²+B1+B2)) − Σ x_1u x_2v / d_uv
double db2_amended_potential(const Db2Params& p, double L, double r, double theta1, double theta2);

/// Gradient of the mutual potential U only (independent of L).
Vec3 db2_grad_U(const Db2Params& p, double r, double theta1, double theta2);

/// (∂rV, ∂θ1V, ∂θ2V), angular parts unreduced.
Vec3 db2_grad_V(const Db2Params& p, double L, double r, double theta1, double theta2);

/// Angular momentum squared that makes ∂rV vanish. Signed.
double db2_L2_required(const Db2Params& p, double r, double theta1, double theta2);

/// Central differences of db2_grad_V, h = 1e-5·max(1,|x|), Richardson-extrapolated, symmetrized.
DerivativeBundle<3> db2_hessian_V(const Db2Params& p, double L, double r, double theta1, double theta2);

/// 2×2 angular block of the Hessian (independent of L).
Mat2 db2_angular_hessian(const Db2Params& p, double r, double theta1, double theta2);

/// φ̇ = L/(r²+B1+B2)
double rotation_speed_at_re(const Db2Params& p, double L, double r);

/// The four colinear collision radii (x22ℓ2+x11ℓ1, x22ℓ2−x12ℓ1, x11ℓ1−x21ℓ2, −x21ℓ2−x12ℓ1).
std::array<double, 4> db2_colinear_collision_radii(const Db2Params& p);

}  // namespace gravre
