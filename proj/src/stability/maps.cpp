#include <cmath>
#include <limits>
#include <optional>

#include "gravre/branches.hpp"
#include "gravre/errors.hpp"
#include "gravre/parallel.hpp"
#include "gravre/stability.hpp"

namespace gravre {

std::string to_string(MapFamily f) {
    switch (f) {
        case MapFamily::Db1ColinearNonOverlap: return "db1-colinear-nonoverlap";
        case MapFamily::Db1ColinearOverlap: return "db1-colinear-overlap";
        case MapFamily::Db1Isosceles: return "db1-isosceles";
        case MapFamily::Db2PerpIsosceles: return "db2-perp-isosceles";
        case MapFamily::Db2Trapezoid: return "db2-trapezoid";
    }
    return "?";
}

namespace {

bool is_db1(MapFamily f) {
    return f == MapFamily::Db1ColinearNonOverlap || f == MapFamily::Db1ColinearOverlap ||
           f == MapFamily::Db1Isosceles;
}

Db1Params db1_at(const PlaneSpec& s, double x) {
    if (s.x_axis == "x1") return Db1Params::create(x, s.M1);
    if (s.x_axis == "M1") return Db1Params::create(s.x1, x);
    throw ValidationError("Db1 map axis must be x1 or M1, got " + s.x_axis);
}

Db2Params db2_at(const PlaneSpec& s, double x) {
    const double x11 = 0.5;
    const double x21 = s.family == MapFamily::Db2Trapezoid ? 0.5 : s.x21;
    if (s.x_axis == "M1") return Db2Params::create(x11, x21, s.ell1, x);
    if (s.x_axis == "x21") return Db2Params::create(x11, x, s.ell1, s.M1);
    if (s.x_axis == "ell1") return Db2Params::create(x11, x21, x, s.M1);
    throw ValidationError("Db2 map axis must be M1, x21 or ell1, got " + s.x_axis);
}

struct RePoint {
    double L2;
    double t1, t2;
};

// RE of the family at radius r; nullopt when r lies outside the family's domain
std::optional<RePoint> family_point(const PlaneSpec& s, double x, double r) {
    if (is_db1(s.family)) {
        const Db1Params p = db1_at(s, x);
        switch (s.family) {
            case MapFamily::Db1ColinearNonOverlap:
                if (r <= p.x2) return std::nullopt;
                return RePoint{l2_colinear_db1(p, r), 0.0, 0.0};
            case MapFamily::Db1ColinearOverlap:
                if (r >= p.x2) return std::nullopt;
                return RePoint{l2_colinear_db1(p, r), 0.0, 0.0};
            default: {
                if (r < std::abs(p.x2 - p.x1) / 2.0) return std::nullopt;
                const auto iso = l2_isosceles_db1(p, r);
                return RePoint{iso.L2, iso.theta, 0.0};
            }
        }
    }
    const Db2Params p = db2_at(s, x);
    if (s.family == MapFamily::Db2PerpIsosceles) {
        const double R = r - p.ell2 * p.x22;
        if (R <= 0.0) return std::nullopt;
        return RePoint{l2_perp_isosceles_db2(p, R), kPi / 2, 0.0};
    }
    return RePoint{l2_trapezoid_db2(p, r), kPi / 2, kPi / 2};
}

double family_L2(const PlaneSpec& s, double x, double r) {
    try {
        const auto q = family_point(s, x, r);
        return q ? q->L2 : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

StabilityMap stability_map(const PlaneSpec& spec) {
    if (spec.nx < 1 || spec.nr < 1) throw ValidationError("map resolution must be positive");
    if (!(spec.r_hi > spec.r_lo) || !(spec.x_hi > spec.x_lo)) throw ValidationError("map ranges must be increasing");
    // axis names are checked before the sweep so a bad name is a validation error
    if (is_db1(spec.family))
        db1_at(spec, 0.5 * (spec.x_lo + spec.x_hi));
    else
        db2_at(spec, 0.5 * (spec.x_lo + spec.x_hi));

    StabilityMap m;
    m.spec = spec;
    m.cells.resize(static_cast<std::size_t>(spec.nx) * spec.nr);
    const double dx = (spec.x_hi - spec.x_lo) / spec.nx;
    const double dr = (spec.r_hi - spec.r_lo) / spec.nr;

    parallel_for(m.cells.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k % spec.nx), j = static_cast<int>(k / spec.nx);
        MapCell& c = m.cells[k];
        c.x = spec.x_lo + (i + 0.5) * dx;
        c.r = spec.r_lo + (j + 0.5) * dr;
        try {
            const auto q = family_point(spec, c.x, c.r);
            if (!q) return;
            c.L2 = q->L2;
            if (!(q->L2 >= 0.0) || !std::isfinite(q->L2)) {
                c.status = CellStatus::Nonphysical;
                return;
            }
            const double L = std::sqrt(q->L2);
            StabilityReport rep = is_db1(spec.family)
                                      ? classify_re(db1_at(spec, c.x), L, c.r, q->t1)
                                      : classify_re(db2_at(spec, c.x), L, c.r, q->t1, q->t2);
            c.energetic = rep.energetic.verdict;
            c.linear = rep.linear;
            c.coeffs = rep.coeffs;
            c.status = CellStatus::Ok;
        } catch (const Error&) {
            c.status = CellStatus::Invalid;
        }
    }, spec.jobs);

    // ∂rL² = 0: sign changes of the r-difference on a 4× finer column
    Polyline crit{"dL2dr=0", {}};
    const int fine = 4 * spec.nr;
    const double h = (spec.r_hi - spec.r_lo) / fine;
    for (int i = 0; i < spec.nx; ++i) {
        const double x = spec.x_lo + (i + 0.5) * dx;
        double prev_d = std::numeric_limits<double>::quiet_NaN();
        for (int j = 0; j < fine; ++j) {
            const double r = spec.r_lo + (j + 0.5) * h;
            const double d = family_L2(spec, x, r + 0.5 * h) - family_L2(spec, x, r - 0.5 * h);
            if (std::isfinite(prev_d) && std::isfinite(d) && prev_d * d < 0.0) crit.pts.push_back({x, r - 0.5 * h});
            prev_d = d;
        }
    }
    m.overlays.push_back(crit);

    Polyline bound;
    for (int i = 0; i <= spec.nx; ++i) {
        const double x = spec.x_lo + i * dx;
        try {
            if (is_db1(spec.family)) {
                const Db1Params p = db1_at(spec, x);
                if (spec.family == MapFamily::Db1Isosceles) {
                    bound.label = "r_min";
                    bound.pts.push_back({x, std::abs(p.x2 - p.x1) / 2.0});
                } else {
                    bound.label = "r=x2";
                    bound.pts.push_back({x, p.x2});
                }
            } else if (spec.family == MapFamily::Db2PerpIsosceles) {
                const Db2Params p = db2_at(spec, x);
                bound.label = "r=ell2*x22";
                bound.pts.push_back({x, p.ell2 * p.x22});
            }
        } catch (const Error&) {
        }
    }
    if (!bound.pts.empty()) m.overlays.push_back(bound);
    if (spec.family == MapFamily::Db1ColinearOverlap) {
        Polyline half{"r=(x2-x1)/2", {}};
        for (int i = 0; i <= spec.nx; ++i) {
            const double x = spec.x_lo + i * dx;
            try {
                const Db1Params p = db1_at(spec, x);
                half.pts.push_back({x, (p.x2 - p.x1) / 2.0});
            } catch (const Error&) {
            }
        }
        m.overlays.push_back(half);
    }
    return m;
}

}  // namespace gravre
