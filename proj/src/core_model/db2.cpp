#include "gravre/db2.hpp"

#include <cmath>
#include <sstream>

#include "gravre/errors.hpp"
#include "gravre/numdiff.hpp"

namespace gravre {

namespace {

struct Pair {
    double m;          // x_1u x_2v
    Vec2 D;            // r_2v − r_1u
    Vec2 dD1, dD2;     // ∂θ1 D, ∂θ2 D
};

std::array<Pair, 4> pairs(const Db2Params& p, double r, double t1, double t2) {
    const Vec2 e1(std::cos(t1), std::sin(t1)), e2(std::cos(t2), std::sin(t2));
    const Vec2 n1(-e1[1], e1[0]), n2(-e2[1], e2[0]);
    const Vec2 base(r, 0.0);
    // offsets of the masses from their own centers
    const double a1 = -p.x12 * p.ell1, b1 = p.x11 * p.ell1;  // u = 1, 2
    const double a2 = -p.x22 * p.ell2, b2 = p.x21 * p.ell2;  // v = 1, 2
    auto make = [&](double m, double o1, double o2) {
        return Pair{m, base + o2 * e2 - o1 * e1, -o1 * n1, o2 * n2};
    };
    return {make(p.x11 * p.x21, a1, a2), make(p.x11 * p.x22, a1, b2), make(p.x12 * p.x21, b1, a2),
            make(p.x12 * p.x22, b1, b2)};
}

void guard_check(const std::array<Pair, 4>& ps, double guard, double r, double t1, double t2) {
    for (const auto& q : ps) {
        if (q.D.norm() < guard) {
            std::ostringstream os;
            os << "mass collision at r=" << r << ", theta1=" << t1 << ", theta2=" << t2;
            throw CollisionError(os.str());
        }
    }
}

}  // namespace

Db2Distances db2_distances(const Db2Params& p, double r, double theta1, double theta2, double guard) {
    const auto ps = pairs(p, r, theta1, theta2);
    guard_check(ps, guard, r, theta1, theta2);
    return {ps[0].D.norm(), ps[1].D.norm(), ps[2].D.norm(), ps[3].D.norm()};
}

double db2_amended_potential(const Db2Params& p, double L, double r, double theta1, double theta2) {
    const auto ps = pairs(p, r, theta1, theta2);
    guard_check(ps, kCollisionGuard, r, theta1, theta2);
    double U = 0.0;
    for (const auto& q : ps) U -= q.m / q.D.norm();
    return L * L / (2.0 * p.S(r)) + U;
}

Vec3 db2_grad_U(const Db2Params& p, double r, double theta1, double theta2) {
    const auto ps = pairs(p, r, theta1, theta2);
    guard_check(ps, kCollisionGuard, r, theta1, theta2);
    Vec3 g = Vec3::Zero();
    for (const auto& q : ps) {
        const double d = q.D.norm();
        const double w = q.m / (d * d * d);
        g[0] += w * q.D[0];
        g[1] += w * q.D.dot(q.dD1);
        g[2] += w * q.D.dot(q.dD2);
    }
    return g;
}

Vec3 db2_grad_V(const Db2Params& p, double L, double r, double theta1, double theta2) {
    Vec3 g = db2_grad_U(p, r, theta1, theta2);
    const double S = p.S(r);
    g[0] -= L * L * r / (S * S);
    return g;
}

double db2_L2_required(const Db2Params& p, double r, double theta1, double theta2) {
    const double S = p.S(r);
    return S * S / r * db2_grad_U(p, r, theta1, theta2)[0];
}

DerivativeBundle<3> db2_hessian_V(const Db2Params& p, double L, double r, double theta1, double theta2) {
    DerivativeBundle<3> b;
    b.value = db2_amended_potential(p, L, r, theta1, theta2);
    b.gradient = db2_grad_V(p, L, r, theta1, theta2);
    auto grad = [&](const Vec3& x) { return db2_grad_V(p, L, x[0], x[1], x[2]); };
    b.hessian = fd_jacobian<3>(grad, Vec3(r, theta1, theta2));
    b.raw_asymmetry = symmetrize<3>(b.hessian);
    b.method = DerivativeMethod::FiniteDifference;
    return b;
}

Mat2 db2_angular_hessian(const Db2Params& p, double r, double theta1, double theta2) {
    auto grad = [&](const Vec2& x) {
        const Vec3 g = db2_grad_U(p, r, x[0], x[1]);
        return Vec2(g[1], g[2]);
    };
    Mat2 H = fd_jacobian<2>(grad, Vec2(theta1, theta2));
    symmetrize<2>(H);
    return H;
}

double rotation_speed_at_re(const Db2Params& p, double L, double r) { return L / p.S(r); }

std::array<double, 4> db2_colinear_collision_radii(const Db2Params& p) {
    return {p.x22 * p.ell2 + p.x11 * p.ell1, p.x22 * p.ell2 - p.x12 * p.ell1, -p.x21 * p.ell2 + p.x11 * p.ell1,
            -p.x21 * p.ell2 - p.x12 * p.ell1};
}

}  // namespace gravre
