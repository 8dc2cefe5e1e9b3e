#include <algorithm>
#include <cmath>

#include "gravre/errors.hpp"
#include "gravre/re_finder.hpp"

namespace gravre {

int ReSolutionSet::count() const {
    int n = 0;
    for (const auto& s : solutions) n += s.multiplicity;
    return n;
}

namespace {

// L² along the branch: exact when available, else linear in the samples
struct Profile {
    const ReBranch& b;

    BranchPoint at(double t) const {
        if (b.eval) return b.eval(t);
        const auto& pts = b.points;
        auto it = std::lower_bound(pts.begin(), pts.end(), t,
                                   [](const BranchPoint& q, double v) { return q.param < v; });
        if (it == pts.begin()) return pts.front();
        if (it == pts.end()) return pts.back();
        const BranchPoint& hi = *it;
        const BranchPoint& lo = *(it - 1);
        const double w = (t - lo.param) / (hi.param - lo.param);
        auto mix = [w](double a, double c) { return a + w * (c - a); };
        return {t, mix(lo.r, hi.r), mix(lo.theta1, hi.theta1), mix(lo.theta2, hi.theta2), mix(lo.L2, hi.L2)};
    }
};

}  // namespace

ReSolutionSet count_re_at_L2(const ReBranch& branch, double L2) {
    ReSolutionSet out;
    out.L2 = L2;
    if (branch.points.empty()) return out;
    const Profile prof{branch};

    // monotone pieces run between the refined extrema
    std::vector<double> knots;
    knots.push_back(branch.points.front().param);
    for (const auto& e : branch.extrema) knots.push_back(e.point.param);
    knots.push_back(branch.points.back().param);

    const double tang_tol = 1e-10 * std::max(1.0, std::abs(L2));
    std::vector<double> tangencies;
    for (const auto& e : branch.extrema) {
        if (std::abs(e.point.L2 - L2) <= tang_tol) {
            ReSolution s{e.point.param, e.point.r, e.point.theta1, e.point.theta2, 2, branch.family};
            out.solutions.push_back(s);
            tangencies.push_back(e.point.param);
        }
    }

    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        double a = knots[k], b = knots[k + 1];
        BranchPoint pa = prof.at(a), pb = prof.at(b);
        double fa = pa.L2 - L2, fb = pb.L2 - L2;
        if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
        if (fa * fb > 0) continue;
        // a root sitting on a tangency knot is already reported
        auto near_tangency = [&](double t) {
            return std::any_of(tangencies.begin(), tangencies.end(),
                               [&](double q) { return std::abs(q - t) <= 1e-9 * std::max(1.0, std::abs(q)); });
        };
        if (std::abs(fa) <= tang_tol && near_tangency(a)) continue;
        if (std::abs(fb) <= tang_tol && near_tangency(b)) continue;
        // shared knot between two pieces: count it once
        if (fa == 0 && k > 0) continue;
        double lo = a, hi = b, flo = fa;
        while (hi - lo > 1e-10 * std::max(1.0, std::abs(lo))) {
            const double mid = 0.5 * (lo + hi);
            const double fm = prof.at(mid).L2 - L2;
            if (fm == 0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const BranchPoint q = prof.at(0.5 * (lo + hi));
        out.solutions.push_back({q.param, q.r, q.theta1, q.theta2, 1, branch.family});
    }
    std::sort(out.solutions.begin(), out.solutions.end(),
              [](const ReSolution& x, const ReSolution& y) { return x.r < y.r; });
    return out;
}

}  // namespace gravre
