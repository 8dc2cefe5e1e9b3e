#pragma once

#include <optional>
#include <vector>

#include "gravre/branches.hpp"
#include "gravre/types.hpp"

namespace gravre {

/// Symmetric equal-mass families: colinear, the two perpendicular ones, trapezoid.
enum class SymmetricFamily { C, P1, P2, T };

std::string to_string(SymmetricFamily f);
/// (θ1, θ2) of the family: C=(0,0), P1=(π/2,0), P2=(0,π/2), T=(π/2,π/2).
std::pair<double, double> family_angles(SymmetricFamily f);

/// Nearest symmetric RE modulo θi → θi+π, and its torus distance.
struct SymmetricMatch {
    SymmetricFamily family = SymmetricFamily::C;
    double distance = 0.0;
};
SymmetricMatch nearest_symmetric(double theta1, double theta2);

/// Canonical representative under θi → θi+π and (θ1,θ2) → (−θ1,−θ2), both in [0, π).
std::pair<double, double> reduce_mod_symmetry(double theta1, double theta2);

// ---- torus search ----

struct TorusOptions {
    int n = 512;             // grid cells per side
    int max_refine = 4;      // subdivision depth for flagged cells
    double dedupe = 1e-6;    // torus distance
    double tol = 1e-10;      // residual relative to the grid's max |F|
    bool mod_symmetry = false;
    int jobs = 0;            // 0 = default
};

struct TorusRe {
    double theta1 = 0.0, theta2 = 0.0;
    double residual = 0.0;  // relative
    bool symmetric = false;
    SymmetricFamily nearest = SymmetricFamily::C;
};

/// All zeros of (∂θ1U, ∂θ2U) on [0,2π)² at fixed r. Sorted by (θ1, θ2).
std::vector<TorusRe> find_re_torus(const Db2Params& p, double r, const TorusOptions& o = {});

/// The two angular residuals sampled on an n×n grid (row-major, θ1 fastest), for plotting.
struct ResidualGrid {
    int n = 0;
    std::vector<double> f1, f2;
};
ResidualGrid angular_residual_grid(const Db2Params& p, double r, int n);

/// Newton in the angles at fixed r. Returns the polished angles, or nullopt on divergence.
std::optional<std::pair<double, double>> polish_re_angles(const Db2Params& p, double r, double theta1, double theta2,
                                                          double tol = 1e-10);

// ---- continuation ----

struct ContinuationOptions {
    double h0 = 1e-3;
    double h_max = 5e-3;
    double h_min = 1e-3 / 1024.0;  // 10 halvings
    double r_lo = 1e-3, r_hi = 10.0;
    double merge_tol = 1e-4;
    double collision_tol = 1e-6;
    double tol = 1e-10;
    int max_points = 20000;
    bool stop_at_fold = true;
};

enum class StopReason { Merge, Fold, RBound, Collision, MaxPoints };
std::string to_string(StopReason s);

struct TraceEnd {
    StopReason reason = StopReason::RBound;
    BranchPoint point;
    std::optional<SymmetricFamily> merged;
};

struct TraceResult {
    ReBranch branch;  // family Db2Asymmetric, param = arclength, points ordered along the curve
    TraceEnd start, end;
};

/// One direction of pseudo-arclength continuation in (r, θ1, θ2). direction = ±1 picks the sign of the initial r-tangent.
TraceResult trace_re_curve(const Db2Params& p, const Configuration& seed, int direction,
                           const ContinuationOptions& o = {});

/// Trace both directions from the seed and join; tag from the two end types.
TraceResult trace_full_curve(const Db2Params& p, const Configuration& seed, const ContinuationOptions& o = {});

/// Tag from the lower-r and upper-r ends.
AsymTag classify_ends(const TraceEnd& lower, const TraceEnd& upper);

// ---- counting ----

struct ReSolution {
    double param = 0.0;
    double r = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
    int multiplicity = 1;
    Family family = Family::Db1ColinearNonOverlap;
};

struct ReSolutionSet {
    double L2 = 0.0;
    std::vector<ReSolution> solutions;  // sorted by r
    int count() const;                  // with multiplicity
};

/// Solutions of L²(param) = L2 on a branch, bisection to 1e-10 per monotone piece.
ReSolutionSet count_re_at_L2(const ReBranch& branch, double L2);

}  // namespace gravre
