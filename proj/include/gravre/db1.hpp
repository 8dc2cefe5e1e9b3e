#pragma once

#include "gravre/types.hpp"

namespace gravre {

struct Db1Distances {
    double d1 = 0.0;  // point mass to x1
    double d2 = 0.0;  // point mass to x2
};

/// d_i = sqrt(r² + (−1)^i 2 x_k r cosθ + x_k²), k ≠ i. Throws CollisionError below the guard.
Db1Distances db1_distances(const Db1Params& p, double r, double theta, double guard = kCollisionGuard);

/// V = L²/(2(r²+B)) − x1/d1 − x2/d2
double db1_amended_potential(const Db1Params& p, double L, double r, double theta);

/// (∂rV, ∂θV)
Vec2 db1_grad_V(const Db1Params& p, double L, double r, double theta);

/// Angular momentum squared that makes ∂rV vanish at (r, θ). Signed; negative is nonphysical.
double db1_L2_required(const Db1Params& p, double r, double theta);

/// With at_re the simplified equilibrium forms are used (gradient checked to 1e-8);
/// otherwise central differences of the closed-form gradient.
DerivativeBundle<2> db1_hessian_V(const Db1Params& p, double L, double r, double theta, bool at_re);

/// Closed-form Hessian valid at any configuration.
Mat2 db1_hessian_exact(const Db1Params& p, double L, double r, double theta);

/// φ̇ = L/(r²+B)
double rotation_speed_at_re(const Db1Params& p, double L, double r);

}  // namespace gravre
