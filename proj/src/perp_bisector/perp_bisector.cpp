#include "gravre/perp_bisector.hpp"

#include <cmath>

#include "gravre/errors.hpp"

namespace gravre {

void DiscretizedBody::validate() const {
    if (points.empty()) throw ValidationError("body '" + label + "' has no points");
    for (const auto& q : points) {
        if (!(q.m > 0.0) || !std::isfinite(q.m)) throw ValidationError("body '" + label + "' has a nonpositive mass");
        if (!q.pos.allFinite()) throw ValidationError("body '" + label + "' has a non-finite position");
    }
}

std::string to_string(ConeVerdict v) { return v == ConeVerdict::Compatible ? "compatible" : "violates-theorem"; }

namespace {

struct Frame {
    Vec2 origin;
    Mat2 R;  // world → aligned
    double ell;

    Vec2 to_aligned(const Vec2& x) const { return R * (x - origin); }
};

Frame aligned_frame(const DumbbellSpec& d) {
    const Vec2 axis = d.r2 - d.r1;
    const double ell = axis.norm();
    if (!(ell > 0.0)) throw ValidationError("dumbbell masses coincide");
    const Vec2 e = axis / ell;
    Mat2 R;
    R << e[0], e[1], -e[1], e[0];
    return {0.5 * (d.r1 + d.r2), R, ell};
}

}  // namespace

double rotational_acceleration(const DumbbellSpec& d, const std::vector<DiscretizedBody>& bodies, Kernel k) {
    if (!(d.M1 > 0.0)) throw ValidationError("M1 must be positive");
    const Frame f = aligned_frame(d);
    const Vec2 a1 = f.to_aligned(d.r1), a2 = f.to_aligned(d.r2);
    double sum = 0.0;
    for (const auto& b : bodies) {
        b.validate();
        for (const auto& q : b.points) {
            const Vec2 pa = f.to_aligned(q.pos);
            const double d1 = (pa - a1).norm(), d2 = (pa - a2).norm();
            if (d1 < kCollisionGuard || d2 < kCollisionGuard) throw CollisionError("point mass on a dumbbell mass");
            const double dy = pa[1] - a1[1];
            if (k == Kernel::Newtonian)
                sum += q.m * dy * (1.0 / (d2 * d2 * d2) - 1.0 / (d1 * d1 * d1));
            else
                sum += q.m * dy * (1.0 / (d2 * d2 * d2 * d2) - 1.0 / (d1 * d1 * d1 * d1));
        }
    }
    return k == Kernel::Newtonian ? sum / f.ell : 2.0 / d.M1 * sum;
}

ConeReport cone_check(const DumbbellSpec& d, const std::vector<DiscretizedBody>& bodies, Kernel k) {
    const Frame f = aligned_frame(d);
    ConeReport rep;
    for (const auto& b : bodies) {
        b.validate();
        for (const auto& q : b.points) {
            const Vec2 pa = f.to_aligned(q.pos);
            const bool on_line = std::abs(pa[1]) <= kAxisTol;
            const bool on_bis = std::abs(pa[0]) <= kAxisTol;
            rep.on_rod_line |= on_line;
            rep.on_bisector |= on_bis;
            if (on_line || on_bis) continue;
            if (pa[0] * pa[1] > 0)
                rep.cone13 = true;
            else
                rep.cone24 = true;
        }
    }
    rep.theta_ddot = rotational_acceleration(d, bodies, k);
    rep.verdict = rep.cone13 != rep.cone24 ? ConeVerdict::ViolatesTheorem : ConeVerdict::Compatible;
    return rep;
}

}  // namespace gravre
