#pragma once

#include <string>
#include <vector>

#include "gravre/re_finder.hpp"
#include "gravre/types.hpp"

namespace gravre {

struct PitchforkNormalForm {
    SymmetricFamily family = SymmetricFamily::C;
    double r_star = 0.0;
    double theta1_star = 0.0, theta2_star = 0.0;
    double mu = 0.0;  // nonzero eigenvalue of the angle Jacobian
    double k = 0.0;   // d(null eigenvalue)/dr
    double l = 0.0;   // f_{u1u1u1}/3
    double P11 = 0.0, P12 = 0.0;
    double slope = 0.0;  // P12/P11
    double quad = 0.0;   // −(l/2k)(P11 + P12²/P11)²
};

/// det of the 2×2 angle Jacobian of (∂θ1V, ∂θ2V) on the family at r.
double family_det(const Db2Params& p, SymmetricFamily f, double r);

/// First zero of the determinant in [lo, hi] (poles through collisions are skipped).
/// Throws NoSignChange if there is none.
double find_branch_point(const Db2Params& p, SymmetricFamily f, double lo, double hi);

/// All zeros of the determinant in [lo, hi], scanning n subintervals.
std::vector<double> scan_branch_points(const Db2Params& p, SymmetricFamily f, double lo, double hi, int n = 400);

/// Throws DegeneratePitchfork if |l| < 1e-10 or the null vector has P11 = 0.
PitchforkNormalForm normal_form(const Db2Params& p, SymmetricFamily f, double r_star);

struct CurvePoint {
    double theta1 = 0.0, theta2 = 0.0, r = 0.0;
};

/// G(θ1) = (θ1, θ2* + slope(θ1 − θ1*), r* + quad(θ1 − θ1*)²)
CurvePoint quadratic_curve(const PitchforkNormalForm& nf, double theta1);

/// An asymmetric RE on the bifurcating branch at r* + dr·sign(quad), polished from the quadratic prediction.
/// Throws NumericalError if Newton lands back on the symmetric family.
Configuration seed_near_branch_point(const Db2Params& p, const PitchforkNormalForm& nf, double dr = 5e-3);

struct LadderEntry {
    double r = 0.0;
    std::string kind;  // "branch" or "collision"
    std::string family;
};

inline constexpr double kLadderCollisionBand = 1e-4;

/// Branch radii of the four symmetric families plus positive colinear collision radii in [lo, hi], sorted.
/// Determinant zeros within kLadderCollisionBand of a collision radius are reported as the collision.
std::vector<LadderEntry> equal_mass_ladder(const Db2Params& p, double lo, double hi, int n = 400);

}  // namespace gravre
