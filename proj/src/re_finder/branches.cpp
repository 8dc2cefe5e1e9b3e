#include "gravre/branches.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "gravre/db2.hpp"
#include "gravre/errors.hpp"

namespace gravre {

std::string to_string(Family f) {
    switch (f) {
        case Family::Db1ColinearNonOverlap: return "Db1Colinear-NonOverlap";
        case Family::Db1ColinearOverlap: return "Db1Colinear-Overlap";
        case Family::Db1Isosceles: return "Db1Isosceles";
        case Family::Db2Colinear: return "Db2Colinear";
        case Family::Db2PerpIsosceles: return "Db2PerpIsosceles";
        case Family::Db2Rhombus: return "Db2Rhombus";
        case Family::Db2Trapezoid: return "Db2Trapezoid";
        case Family::Db2Asymmetric: return "Db2Asymmetric";
    }
    return "?";
}

std::string to_string(AsymTag t) {
    switch (t) {
        case AsymTag::None: return "none";
        case AsymTag::B_TP: return "B_TP";
        case AsymTag::B_CP: return "B_CP";
        case AsymTag::B_CC: return "B_CC";
        case AsymTag::B_PC: return "B_PC";
        case AsymTag::B_C: return "B_C";
        case AsymTag::B_T: return "B_T";
        case AsymTag::B_LP: return "B_LP";
        case AsymTag::B_RP: return "B_RP";
    }
    return "?";
}

namespace {

constexpr double kSingularTol = 1e-14;

// signed 1/(D|D|)
double inv_signed_sq(double D) { return 1.0 / (D * std::abs(D)); }

}  // namespace

double l2_colinear_db1(const Db1Params& p, double r) {
    if (!(r > 0.0)) throw ValidationError("r must be positive");
    if (std::abs(r - p.x2) < kSingularTol) throw SingularRadius("colinear branch is singular at r = x2");
    const double S = r * r + p.B;
    return S * S / r * (p.x1 * inv_signed_sq(r - p.x2) + p.x2 / ((r + p.x1) * (r + p.x1)));
}

IsoscelesPoint l2_isosceles_db1(const Db1Params& p, double r) {
    const double rmin = std::abs(p.x2 - p.x1) / 2.0;
    if (r < rmin || !(r > 0.0)) {
        std::ostringstream os;
        os << "isosceles RE need r >= " << rmin << ", got " << r;
        throw BelowMinimumRadius(os.str());
    }
    const double c = std::clamp((p.x2 - p.x1) / (2.0 * r), -1.0, 1.0);
    IsoscelesPoint out;
    out.theta = std::acos(c);
    const double S = r * r + p.B;
    out.L2 = S * S / std::pow(r * r + p.M1 * p.B, 1.5);
    return out;
}

IsoscelesLandmarks isosceles_landmarks(const Db1Params& p) {
    IsoscelesLandmarks m;
    m.r_min = std::abs(p.x2 - p.x1) / 2.0;
    const double dx = p.x2 - p.x1;
    m.L_rmin = (dx * dx + 4.0 * p.B) / std::sqrt(2.0);
    m.L0 = std::pow(p.B / (p.M1 * p.M1 * p.M1), 0.25);
    if (p.M1 < 0.75) {
        m.r_b = std::sqrt(p.B * (3.0 - 4.0 * p.M1));
        m.L_rb = std::pow(256.0 / 27.0 * p.B * p.M2, 0.25);
        m.has_interior_min = m.r_b > m.r_min;
    }
    return m;
}

double isosceles_no_stability_threshold(double x1) {
    const double x2 = 1.0 - x1;
    return 12.0 * x1 * x2 / ((x1 - x2) * (x1 - x2) + 16.0 * x1 * x2);
}

double l2_colinear_db2(const Db2Params& p, double r) {
    if (!(r > 0.0)) throw ValidationError("r must be positive");
    const double o1[2] = {-p.x12 * p.ell1, p.x11 * p.ell1};
    const double o2[2] = {-p.x22 * p.ell2, p.x21 * p.ell2};
    const double m1[2] = {p.x11, p.x12}, m2[2] = {p.x21, p.x22};
    double sum = 0.0;
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            const double D = r + o2[v] - o1[u];
            if (std::abs(D) < kSingularTol) throw SingularRadius("colinear branch is singular at a collision radius");
            sum += m1[u] * m2[v] * inv_signed_sq(D);
        }
    }
    const double S = p.S(r);
    return S * S / r * sum;
}

double l2_perp_isosceles_db2(const Db2Params& p, double R) {
    if (p.x11 != 0.5) throw ValidationError("perpendicular isosceles family requires x11 = 1/2");
    if (!(R > 0.0)) throw ValidationError("R must be positive (non-overlap)");
    const double r = R + p.ell2 * p.x22;
    const double q = p.ell1 * p.ell1 / 4.0;
    const double d11 = std::sqrt(R * R + q);
    const double d12 = std::sqrt((R + p.ell2) * (R + p.ell2) + q);
    const double S = p.S(r);
    return S * S / r * (p.x21 * R / (d11 * d11 * d11) + p.x22 * (R + p.ell2) / (d12 * d12 * d12));
}

RhombusResult rhombus_radius(const Db2Params& p) {
    if (p.x11 != 0.5) throw ValidationError("rhombus requires x11 = 1/2");
    const double r = (p.x22 - p.x21) * p.ell2 / 2.0;
    return {r > 0.0, r};
}

double l2_trapezoid_db2(const Db2Params& p, double r) {
    if (!p.is_equal_mass()) throw ValidationError("trapezoid family requires equal-mass dumbbells");
    if (r < 0.0) throw ValidationError("r must be non-negative");
    const double dl = p.ell1 - p.ell2;
    const double d11 = std::sqrt(r * r + dl * dl / 4.0);
    const double d12 = std::sqrt(r * r + 0.25);
    if (d11 < kCollisionGuard) throw CollisionError("trapezoid collision at r = 0 with equal rods");
    const double S = p.S(r);
    return S * S / 2.0 * (1.0 / (d11 * d11 * d11) + 1.0 / (d12 * d12 * d12));
}

// ---------------------------------------------------------------------------

void segment_branch(ReBranch& b) {
    b.segments.clear();
    b.extrema.clear();
    const auto& pts = b.points;
    if (pts.size() < 2) {
        if (!pts.empty()) b.segments.push_back({0, 0});
        return;
    }
    std::size_t start = 0;
    int dir = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = pts[i].L2 - pts[i - 1].L2;
        const int s = (d > 0) - (d < 0);
        if (s == 0) continue;
        if (dir == 0) {
            dir = s;
        } else if (s != dir) {
            b.segments.push_back({start, i - 1});
            BranchExtremum e;
            e.point = pts[i - 1];
            e.is_max = dir > 0;
            if (b.eval && i >= 2) {
                // refine inside the bracket [i-2, i]
                const double sgn = e.is_max ? -1.0 : 1.0;
                auto f = [&](double t) {
                    try {
                        return sgn * b.eval(t).L2;
                    } catch (const Error&) {
                        return std::numeric_limits<double>::infinity();
                    }
                };
                const auto res = boost::math::tools::brent_find_minima(f, pts[i - 2].param, pts[i].param, 52);
                e.point = b.eval(res.first);
            }
            b.extrema.push_back(e);
            start = i - 1;
            dir = s;
        }
    }
    b.segments.push_back({start, pts.size() - 1});
}

ReBranch build_branch(Family family, Model model, std::string parameter, std::function<BranchPoint(double)> eval,
                      const SampleOptions& o) {
    ReBranch b;
    b.family = family;
    b.model = model;
    b.parameter = std::move(parameter);
    b.eval = eval;
    const int n = std::max(o.n, 3);
    std::vector<double> params;
    params.reserve(n);
    if (o.compactify) {
        for (int i = 1; i <= n; ++i) {
            const double z = 2.0 * i / (n + 1.0);
            params.push_back(z / (2.0 - z));
        }
    } else {
        for (int i = 0; i < n; ++i) params.push_back(o.lo + (o.hi - o.lo) * i / (n - 1.0));
    }
    b.lo = params.front();
    b.hi = params.back();
    for (double t : params) {
        try {
            b.points.push_back(eval(t));
        } catch (const Error&) {
            // singular or out-of-domain samples are simply skipped
        }
    }
    segment_branch(b);
    return b;
}

ReBranch sample_db1_colinear_nonoverlap(const Db1Params& p, const SampleOptions& o) {
    auto eval = [p](double R) {
        const double r = R + p.x2;
        return BranchPoint{R, r, 0.0, 0.0, l2_colinear_db1(p, r)};
    };
    return build_branch(Family::Db1ColinearNonOverlap, Model::Db1, "R=r-x2", eval, o);
}

ReBranch sample_db1_colinear_overlap(const Db1Params& p, const SampleOptions& o) {
    auto eval = [p](double R) {
        const double r = p.x2 * R / (R + 1.0);
        return BranchPoint{R, r, 0.0, 0.0, l2_colinear_db1(p, r)};
    };
    return build_branch(Family::Db1ColinearOverlap, Model::Db1, "R=r/(x2-r)", eval, o);
}

ReBranch sample_db1_isosceles(const Db1Params& p, const SampleOptions& o) {
    const double rmin = std::abs(p.x2 - p.x1) / 2.0;
    auto eval = [p, rmin](double R) {
        const double r = rmin + R;
        const auto iso = l2_isosceles_db1(p, r);
        return BranchPoint{R, r, iso.theta, 0.0, iso.L2};
    };
    return build_branch(Family::Db1Isosceles, Model::Db1, "R=r-rmin", eval, o);
}

ReBranch sample_db2_colinear(const Db2Params& p, const SampleOptions& o) {
    const double r1 = p.x11 * p.ell1 + p.x22 * p.ell2;
    auto eval = [p, r1](double R) {
        const double r = R + r1;
        return BranchPoint{R, r, 0.0, 0.0, l2_colinear_db2(p, r)};
    };
    return build_branch(Family::Db2Colinear, Model::Db2, "R=r-x11*ell1-x22*ell2", eval, o);
}

ReBranch sample_db2_perp_isosceles(const Db2Params& p, const SampleOptions& o) {
    auto eval = [p](double R) {
        return BranchPoint{R, R + p.ell2 * p.x22, kPi / 2.0, 0.0, l2_perp_isosceles_db2(p, R)};
    };
    return build_branch(Family::Db2PerpIsosceles, Model::Db2, "R=r-ell2*x22", eval, o);
}

ReBranch sample_db2_trapezoid(const Db2Params& p, const SampleOptions& o) {
    auto eval = [p](double r) { return BranchPoint{r, r, kPi / 2.0, kPi / 2.0, l2_trapezoid_db2(p, r)}; };
    return build_branch(Family::Db2Trapezoid, Model::Db2, "r", eval, o);
}

}  // namespace gravre
