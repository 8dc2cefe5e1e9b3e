#include <algorithm>
#include <cmath>
#include <sstream>

#include "gravre/db2.hpp"
#include "gravre/errors.hpp"
#include "gravre/numdiff.hpp"
#include "gravre/re_finder.hpp"

namespace gravre {

std::string to_string(StopReason s) {
    switch (s) {
        case StopReason::Merge: return "merge";
        case StopReason::Fold: return "fold";
        case StopReason::RBound: return "r-bound";
        case StopReason::Collision: return "collision";
        case StopReason::MaxPoints: return "max-points";
    }
    return "?";
}

namespace {

using Mat23 = Eigen::Matrix<double, 2, 3>;

Vec2 residual(const Db2Params& p, const Vec3& x) {
    const Vec3 g = db2_grad_U(p, x[0], x[1], x[2]);
    return {g[1], g[2]};
}

Mat23 jacobian(const Db2Params& p, const Vec3& x) {
    auto grad = [&](const Vec3& y) { return db2_grad_U(p, y[0], y[1], y[2]); };
    const Mat3 J = fd_jacobian<3>(grad, x);
    return J.bottomRows<2>();
}

Vec3 tangent(const Mat23& J) {
    Vec3 t = Vec3(J.row(0)).cross(Vec3(J.row(1)));
    const double n = t.norm();
    if (n == 0.0) throw NumericalError("degenerate tangent: Jacobian rank below 2");
    return t / n;
}

double min_distance(const Db2Params& p, const Vec3& x) {
    const auto d = db2_distances(p, x[0], x[1], x[2], 0.0);
    return std::min({d.d11, d.d12, d.d21, d.d22});
}

BranchPoint to_point(const Db2Params& p, const Vec3& x, double s) {
    BranchPoint bp{s, x[0], x[1], x[2], 0.0};
    try {
        bp.L2 = db2_L2_required(p, x[0], x[1], x[2]);
    } catch (const CollisionError&) {
        bp.L2 = std::numeric_limits<double>::quiet_NaN();
    }
    return bp;
}

struct Corrected {
    bool ok = false;
    Vec3 x;
    int iters = 0;
};

Corrected correct(const Db2Params& p, const Vec3& x0, const Vec3& t, double h, double tol) {
    Corrected c;
    Vec3 y = x0 + h * t;
    try {
        for (int it = 1; it <= 8; ++it) {
            const Vec2 F = residual(p, y);
            const double arc = t.dot(y - x0) - h;
            Mat3 A;
            A.topRows<2>() = jacobian(p, y);
            A.row(2) = t.transpose();
            const Vec3 rhs(-F[0], -F[1], -arc);
            const Vec3 d = A.fullPivLu().solve(rhs);
            if (!d.allFinite()) return c;
            y += d;
            if (residual(p, y).norm() < tol && d.norm() < 1e-9) {
                c.ok = true;
                c.x = y;
                c.iters = it;
                return c;
            }
        }
    } catch (const CollisionError&) {
    }
    return c;
}

}  // namespace

std::optional<std::pair<double, double>> polish_re_angles(const Db2Params& p, double r, double theta1, double theta2,
                                                          double tol) {
    Vec3 x(r, theta1, theta2);
    try {
        for (int it = 0; it < 60; ++it) {
            const Vec2 F = residual(p, x);
            if (F.norm() < tol) return std::make_pair(x[1], x[2]);
            const Mat2 H = db2_angular_hessian(p, x[0], x[1], x[2]);
            const Vec2 d = H.fullPivLu().solve(-F);
            if (!d.allFinite() || d.norm() > 1.0) return std::nullopt;
            x[1] += d[0];
            x[2] += d[1];
        }
    } catch (const CollisionError&) {
    }
    return std::nullopt;
}

TraceResult trace_re_curve(const Db2Params& p, const Configuration& seed, int direction,
                           const ContinuationOptions& o) {
    if (seed.model != Model::Db2) throw ValidationError("continuation needs a Db2 seed");
    Vec3 x(seed.r, seed.theta1, seed.theta2);
    if (residual(p, x).norm() >= 1e-8) {
        std::ostringstream os;
        os << "seed residual " << residual(p, x).norm() << " exceeds 1e-8";
        throw SeedNotOnCurve(os.str());
    }
    if (const auto pol = polish_re_angles(p, x[0], x[1], x[2], o.tol)) {
        x[1] = pol->first;
        x[2] = pol->second;
    }

    Vec3 t = tangent(jacobian(p, x));
    const int sgn = direction >= 0 ? 1 : -1;
    if (std::abs(t[0]) > 1e-12) {
        if (t[0] * sgn < 0) t = -t;
    } else if (t[1] * sgn < 0) {
        t = -t;
    }

    TraceResult res;
    res.branch.family = Family::Db2Asymmetric;
    res.branch.model = Model::Db2;
    res.branch.parameter = "s";
    double s = 0.0;
    res.branch.points.push_back(to_point(p, x, s));
    res.start.point = res.branch.points.front();

    double h = o.h0;
    int halvings = 0;
    TraceEnd end;
    for (;;) {
        if (static_cast<int>(res.branch.points.size()) >= o.max_points) {
            end.reason = StopReason::MaxPoints;
            break;
        }
        // shrink geometrically towards a symmetric RE so merges are resolved
        const double symd = nearest_symmetric(x[1], x[2]).distance;
        const double step = std::min(h, 0.5 * symd);
        const Corrected c = correct(p, x, t, step, o.tol);
        if (!c.ok) {
            // within one maximal step of an r bound the bound is the end
            if (x[0] - o.r_lo < o.h_max || o.r_hi - x[0] < o.h_max) {
                end.reason = StopReason::RBound;
                break;
            }
            h /= 2;
            if (++halvings > 10 || h < o.h_min) {
                std::ostringstream os;
                os << "continuation step failed at r=" << x[0] << " after " << halvings << " halvings";
                throw StepFailure(os.str());
            }
            continue;
        }
        halvings = 0;
        if (c.iters <= 3) h = std::min(2 * h, o.h_max);

        const Vec3 y = c.x;
        s += (y - x).norm();
        Vec3 tn;
        bool collided = false;
        try {
            collided = min_distance(p, y) < o.collision_tol;
            if (!collided) tn = tangent(jacobian(p, y));
        } catch (const CollisionError&) {
            collided = true;
        }
        if (collided) {
            res.branch.points.push_back(to_point(p, y, s));
            end.reason = StopReason::Collision;
            break;
        }
        if (tn.dot(t) < 0) tn = -tn;
        const bool fold = o.stop_at_fold && t[0] * tn[0] < 0 && std::abs(tn[0]) > 1e-8;
        x = y;
        t = tn;
        res.branch.points.push_back(to_point(p, x, s));

        const auto m = nearest_symmetric(x[1], x[2]);
        if (m.distance < o.merge_tol) {
            end.reason = StopReason::Merge;
            end.merged = m.family;
            break;
        }
        if (x[0] < o.r_lo || x[0] > o.r_hi) {
            end.reason = StopReason::RBound;
            break;
        }
        if (fold) {
            end.reason = StopReason::Fold;
            break;
        }
    }
    end.point = res.branch.points.back();
    res.end = end;
    res.branch.lo = 0.0;
    res.branch.hi = s;
    segment_branch(res.branch);
    return res;
}

AsymTag classify_ends(const TraceEnd& lower, const TraceEnd& upper) {
    // end kinds: C, P1, P2, T, L (r → 0), X (anything else)
    auto kind = [](const TraceEnd& e) -> char {
        std::optional<SymmetricFamily> f = e.merged;
        if (!f && e.reason == StopReason::Collision) {
            const auto m = nearest_symmetric(e.point.theta1, e.point.theta2);
            if (m.distance < 0.05) f = m.family;
        }
        if (f) {
            switch (*f) {
                case SymmetricFamily::C: return 'C';
                case SymmetricFamily::P1: return '1';
                case SymmetricFamily::P2: return '2';
                case SymmetricFamily::T: return 'T';
            }
        }
        if ((e.reason == StopReason::RBound || e.reason == StopReason::Collision) && e.point.r < 0.05) return 'L';
        return 'X';
    };
    const char a = kind(lower), b = kind(upper);
    const bool bp = b == '1' || b == '2';
    if (a == 'T' && bp) return AsymTag::B_TP;
    if (a == 'C' && bp) return AsymTag::B_CP;
    if ((a == '1' || a == '2') && b == 'C') return AsymTag::B_PC;
    if (a == 'C' && b == 'C') return AsymTag::B_CC;
    if (a == 'L' && b == '2') return AsymTag::B_LP;
    if (a == 'L' && b == '1') return AsymTag::B_RP;
    if (a == 'C' || b == 'C') return AsymTag::B_C;
    if (a == 'T' || b == 'T') return AsymTag::B_T;
    return AsymTag::None;
}

TraceResult trace_full_curve(const Db2Params& p, const Configuration& seed, const ContinuationOptions& o) {
    TraceResult down = trace_re_curve(p, seed, -1, o);
    TraceResult up = trace_re_curve(p, seed, +1, o);
    TraceResult out;
    out.branch = up.branch;
    out.branch.points.clear();
    const double s0 = down.branch.hi;
    for (auto it = down.branch.points.rbegin(); it != down.branch.points.rend(); ++it) {
        BranchPoint bp = *it;
        bp.param = s0 - bp.param;
        out.branch.points.push_back(bp);
    }
    for (std::size_t k = 1; k < up.branch.points.size(); ++k) {
        BranchPoint bp = up.branch.points[k];
        bp.param += s0;
        out.branch.points.push_back(bp);
    }
    out.branch.lo = 0.0;
    out.branch.hi = s0 + up.branch.hi;
    out.start = down.end;
    out.end = up.end;
    if (out.start.point.r > out.end.point.r) std::swap(out.start, out.end);
    out.branch.tag = classify_ends(out.start, out.end);
    segment_branch(out.branch);
    return out;
}

}  // namespace gravre
