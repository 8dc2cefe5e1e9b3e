#include "gravre/pitchfork.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "gravre/db2.hpp"
#include "gravre/errors.hpp"

namespace gravre {

double family_det(const Db2Params& p, SymmetricFamily f, double r) {
    const auto [a, b] = family_angles(f);
    try {
        return db2_angular_hessian(p, r, a, b).determinant();
    } catch (const CollisionError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

namespace {

double refine(const Db2Params& p, SymmetricFamily f, double a, double b) {
    auto g = [&](double r) { return family_det(p, f, r); };
    boost::uintmax_t iters = 200;
    const auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)); };
    const auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, g(a), g(b), tol, iters);
    return 0.5 * (lo + hi);
}

// mode of the angle Jacobian closest to zero
std::pair<double, Vec2> null_mode(const Db2Params& p, SymmetricFamily f, double r, double* other = nullptr) {
    const auto [a, b] = family_angles(f);
    Eigen::SelfAdjointEigenSolver<Mat2> es(db2_angular_hessian(p, r, a, b));
    const int i0 = std::abs(es.eigenvalues()[0]) <= std::abs(es.eigenvalues()[1]) ? 0 : 1;
    if (other) *other = es.eigenvalues()[1 - i0];
    return {es.eigenvalues()[i0], es.eigenvectors().col(i0)};
}

}  // namespace

std::vector<double> scan_branch_points(const Db2Params& p, SymmetricFamily f, double lo, double hi, int n) {
    if (!(hi > lo)) throw ValidationError("branch-point interval must be increasing");
    if (n < 2) throw ValidationError("scan needs at least 2 subintervals");
    std::vector<double> rs(n + 1), ds(n + 1);
    for (int i = 0; i <= n; ++i) {
        rs[i] = lo + (hi - lo) * i / n;
        ds[i] = family_det(p, f, rs[i]);
    }
    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(ds[i]) || !std::isfinite(ds[i + 1])) continue;
        if (ds[i] == 0.0) {
            roots.push_back(rs[i]);
            continue;
        }
        if (ds[i] * ds[i + 1] > 0.0) continue;
        const double r = refine(p, f, rs[i], rs[i + 1]);
        const double d = family_det(p, f, r);
        // a sign change through a collision pole leaves |det| large
        if (!(std::abs(d) <= 1e-6 * std::max(std::abs(ds[i]), std::abs(ds[i + 1])))) continue;
        roots.push_back(r);
    }
    return roots;
}

double find_branch_point(const Db2Params& p, SymmetricFamily f, double lo, double hi) {
    const auto roots = scan_branch_points(p, f, lo, hi, 200);
    if (roots.empty()) {
        std::ostringstream os;
        os << "det of the angle Jacobian on family " << to_string(f) << " has no sign change in [" << lo << ", "
           << hi << "]";
        throw NoSignChange(os.str());
    }
    return roots.front();
}

PitchforkNormalForm normal_form(const Db2Params& p, SymmetricFamily f, double r_star) {
    PitchforkNormalForm nf;
    nf.family = f;
    nf.r_star = r_star;
    std::tie(nf.theta1_star, nf.theta2_star) = family_angles(f);

    const auto [lam0, v] = null_mode(p, f, r_star, &nf.mu);
    Vec2 P = v.normalized();
    if (P[0] < 0 || (P[0] == 0 && P[1] < 0)) P = -P;
    nf.P11 = P[0];
    nf.P12 = P[1];
    if (std::abs(nf.P11) < 1e-12) throw DegeneratePitchfork("null direction is pure θ2 (P11 = 0)");

    const double h = 1e-4;
    nf.k = (null_mode(p, f, r_star + h).first - null_mode(p, f, r_star - h).first) / (2.0 * h);

    // f(s) = u1 component of the angular gradient along the null direction
    const double a = nf.theta1_star, b = nf.theta2_star;
    auto fu = [&](double s) {
        const Vec3 g = db2_grad_U(p, r_star, a + s * P[0], b + s * P[1]);
        return P[0] * g[1] + P[1] * g[2];
    };
    auto d3 = [&](double s) { return (fu(2 * s) - 2 * fu(s) + 2 * fu(-s) - fu(-2 * s)) / (2 * s * s * s); };
    auto rich = [&](double s) { return (4.0 * d3(s / 2) - d3(s)) / 3.0; };
    double best = rich(0.02), best_err = std::numeric_limits<double>::infinity();
    for (double s : {0.08, 0.04, 0.02, 0.01, 0.005}) {
        const double e1 = rich(s), e2 = rich(s / 2);
        if (std::abs(e1 - e2) < best_err) {
            best_err = std::abs(e1 - e2);
            best = e2;
        }
    }
    nf.l = best / 3.0;
    if (std::abs(nf.l) < 1e-10) throw DegeneratePitchfork("cubic coefficient vanishes");
    if (nf.k == 0.0) throw DegeneratePitchfork("transversality coefficient vanishes");

    nf.slope = nf.P12 / nf.P11;
    const double c = nf.P11 + nf.P12 * nf.P12 / nf.P11;
    nf.quad = -(nf.l / (2.0 * nf.k)) * c * c;
    return nf;
}

CurvePoint quadratic_curve(const PitchforkNormalForm& nf, double theta1) {
    const double d = theta1 - nf.theta1_star;
    return {theta1, nf.theta2_star + nf.slope * d, nf.r_star + nf.quad * d * d};
}

Configuration seed_near_branch_point(const Db2Params& p, const PitchforkNormalForm& nf, double dr) {
    const double rs = nf.r_star + (nf.quad >= 0 ? dr : -dr);
    const double d = std::sqrt(dr / std::abs(nf.quad));
    for (double delta : {d, -d}) {
        const CurvePoint g = quadratic_curve(nf, nf.theta1_star + delta);
        const auto pol = polish_re_angles(p, rs, g.theta1, g.theta2);
        if (pol && nearest_symmetric(pol->first, pol->second).distance > 1e-3)
            return Configuration::db2(rs, pol->first, pol->second);
    }
    throw NumericalError("could not locate the bifurcating branch near r* = " + std::to_string(nf.r_star));
}

std::vector<LadderEntry> equal_mass_ladder(const Db2Params& p, double lo, double hi, int n) {
    std::vector<LadderEntry> out;
    std::vector<double> collisions;
    for (double r : db2_colinear_collision_radii(p)) {
        if (r >= lo && r <= hi) {
            out.push_back({r, "collision", "C"});
            collisions.push_back(r);
        }
    }
    // zeros inside the contact boundary layer belong to the collision
    auto at_collision = [&](double r) {
        return std::any_of(collisions.begin(), collisions.end(),
                           [&](double c) { return std::abs(r - c) < kLadderCollisionBand; });
    };
    for (auto f : {SymmetricFamily::C, SymmetricFamily::P1, SymmetricFamily::P2, SymmetricFamily::T}) {
        for (double r : scan_branch_points(p, f, lo, hi, n))
            if (!at_collision(r)) out.push_back({r, "branch", to_string(f)});
    }
    std::sort(out.begin(), out.end(), [](const LadderEntry& x, const LadderEntry& y) { return x.r < y.r; });
    return out;
}

}  // namespace gravre
