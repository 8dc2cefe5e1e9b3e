#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gravre/types.hpp"

namespace gravre {

enum class Family {
    Db1ColinearNonOverlap,
    Db1ColinearOverlap,
    Db1Isosceles,
    Db2Colinear,
    Db2PerpIsosceles,
    Db2Rhombus,
    Db2Trapezoid,
    Db2Asymmetric,
};

enum class AsymTag { None, B_TP, B_CP, B_CC, B_PC, B_C, B_T, B_LP, B_RP };

std::string to_string(Family f);
std::string to_string(AsymTag t);

struct BranchPoint {
    double param = 0.0;  // branch parameter (r, R or arclength)
    double r = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double L2 = 0.0;  // signed
};

/// Local extremum of L² along the branch parameter.
struct BranchExtremum {
    BranchPoint point;
    bool is_max = false;
};

struct ReBranch {
    Family family = Family::Db1ColinearNonOverlap;
    AsymTag tag = AsymTag::None;
    Model model = Model::Db1;
    std::string parameter = "r";
    double lo = 0.0, hi = 0.0;
    std::vector<BranchPoint> points;
    /// [begin, end] index pairs of maximal runs where L² is monotone.
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::vector<BranchExtremum> extrema;
    /// Exact evaluator of a point from its parameter; empty for traced branches.
    std::function<BranchPoint(double)> eval;
};

// ---- Db1 ----

/// Signed L² on the colinear family θ=0; (r−x2)|r−x2| keeps the sign. Throws SingularRadius at r = x2.
double l2_colinear_db1(const Db1Params& p, double r);

struct IsoscelesPoint {
    double L2 = 0.0;
    double theta = 0.0;
};

/// cosθ = (x2−x1)/(2r), L² = (r²+B)²/(r²+M1 B)^{3/2}. Throws BelowMinimumRadius for r < |x2−x1|/2.
IsoscelesPoint l2_isosceles_db1(const Db1Params& p, double r);

struct IsoscelesLandmarks {
    double r_min = 0.0, L_rmin = 0.0;  // endpoint of the branch
    double r_b = 0.0, L_rb = 0.0;      // interior minimum of L (valid when M1 < 3/4)
    double L0 = 0.0;                   // L at r_min when x1 = x2 (r → 0)
    bool has_interior_min = false;
};
IsoscelesLandmarks isosceles_landmarks(const Db1Params& p);

/// M1 at or above which the isosceles family has no linearly stable RE.
double isosceles_no_stability_threshold(double x1);

// ---- Db2 ----

/// Signed L² on the colinear family (0,0). Throws SingularRadius on a collision radius.
double l2_colinear_db2(const Db2Params& p, double r);

/// Perpendicular isosceles (π/2, 0) with x11 = 1/2, parameterized by R = r − ℓ2 x22 > 0.
double l2_perp_isosceles_db2(const Db2Params& p, double R);

/// r = (x22 − x21) ℓ2 / 2 when positive.
struct RhombusResult {
    bool physical = false;
    double r = 0.0;
};
RhombusResult rhombus_radius(const Db2Params& p);

/// Equal-mass trapezoid (π/2, π/2): S²/2 (1/d11³ + 1/d12³).
double l2_trapezoid_db2(const Db2Params& p, double r);

// ---- sampled branches ----

struct SampleOptions {
    int n = 2000;
    bool compactify = false;  // sample R = z/(2−z), z ∈ (0,2)
    double lo = 0.0, hi = 0.0;  // parameter range; ignored when compactify
};

ReBranch sample_db1_colinear_nonoverlap(const Db1Params& p, const SampleOptions& o);
ReBranch sample_db1_colinear_overlap(const Db1Params& p, const SampleOptions& o);
/// Parameterized by R = r − r_min ≥ 0.
ReBranch sample_db1_isosceles(const Db1Params& p, const SampleOptions& o);
/// Non-overlap side, R = r − x11ℓ1 − x22ℓ2.
ReBranch sample_db2_colinear(const Db2Params& p, const SampleOptions& o);
ReBranch sample_db2_perp_isosceles(const Db2Params& p, const SampleOptions& o);
ReBranch sample_db2_trapezoid(const Db2Params& p, const SampleOptions& o);

/// Build a branch from an exact evaluator: sample, segment by monotonicity, refine extrema.
ReBranch build_branch(Family family, Model model, std::string parameter, std::function<BranchPoint(double)> eval,
                      const SampleOptions& o);

/// Recompute segments and extrema from `points` (used for traced branches too).
void segment_branch(ReBranch& b);

}  // namespace gravre
