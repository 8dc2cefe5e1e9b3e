#pragma once

#include <string>
#include <vector>

#include "gravre/branches.hpp"
#include "gravre/types.hpp"

namespace gravre {

enum class EnergeticVerdict { StrictMinimum, Saddle, Maximum, Degenerate };
enum class LinearVerdict { Stable, Unstable, Marginal };

std::string to_string(EnergeticVerdict v);
std::string to_string(LinearVerdict v);

struct EnergeticReport {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns
    std::vector<int> signs;        // −1, 0, +1 per eigenvalue
    int radial_index = 0;          // eigenvalue whose eigenvector is most aligned with r
    EnergeticVerdict verdict = EnergeticVerdict::Degenerate;
};

/// Symmetric eigen-decomposition; |λ| below 1e-9·‖H‖ counts as 0.
EnergeticReport energetic_classify(const Eigen::MatrixXd& H);

struct Db1LinearCoeffs {
    double c1 = 0.0, c0 = 0.0;
    LinearVerdict verdict = LinearVerdict::Unstable;
};

struct Db2LinearCoeffs {
    double c2 = 0.0, c1 = 0.0, c0 = 0.0, delta = 0.0;
    LinearVerdict verdict = LinearVerdict::Unstable;
};

/// z⁴ + c1 z² + c0 at an RE (gradient checked). Stable iff c1² ≥ 4c0, c1 ≥ 0, c0 ≥ 0.
Db1LinearCoeffs db1_linear_coeffs(const Db1Params& p, double L, double r, double theta);

/// Same from a given Hessian of V (no equilibrium check).
Db1LinearCoeffs db1_linear_coeffs_from_hessian(const Db1Params& p, double L, double r, const Mat2& H);

/// z⁶ + c2 z⁴ + c1 z² + c0 at an RE. Stable iff Δ ≥ 0 and c2, c1, c0 > 0.
Db2LinearCoeffs db2_linear_coeffs(const Db2Params& p, double L, double r, double theta1, double theta2);

Db2LinearCoeffs db2_linear_coeffs_from_hessian(const Db2Params& p, double L, double r, const Mat3& H);

/// Discriminant of w³ + c2 w² + c1 w + c0.
double cubic_discriminant(double c2, double c1, double c0);

/// Trace/determinant class of a 2×2 symmetric block (used for the torus hatching).
enum class Planar2D { Minimum, Maximum, Saddle, Degenerate };
std::string to_string(Planar2D k);
struct Classify2D {
    double trace = 0.0, det = 0.0;
    Planar2D kind = Planar2D::Degenerate;
};
Classify2D classify_2d(const Mat2& H);

/// Full energetic + linear report for an RE of either dumbbell model.
struct StabilityReport {
    EnergeticReport energetic;
    LinearVerdict linear = LinearVerdict::Unstable;
    std::vector<double> coeffs;  // Db1: c1, c0; Db2: c2, c1, c0, Δ
};
StabilityReport classify_re(const Db1Params& p, double L, double r, double theta);
StabilityReport classify_re(const Db2Params& p, double L, double r, double theta1, double theta2);

// ---- parameter-plane maps ----

enum class MapFamily { Db1ColinearNonOverlap, Db1ColinearOverlap, Db1Isosceles, Db2PerpIsosceles, Db2Trapezoid };

std::string to_string(MapFamily f);

struct PlaneSpec {
    MapFamily family = MapFamily::Db1Isosceles;
    std::string x_axis = "x1";  // Db1: x1 | M1; Db2: M1 | x21 | ell1
    double x_lo = 0.0, x_hi = 1.0;
    double r_lo = 0.0, r_hi = 1.0;
    int nx = 100, nr = 100;
    // fixed values of the parameters not on the x axis
    double x1 = 0.5, M1 = 0.5, x21 = 0.5, ell1 = 0.5;
    int jobs = 0;
};

enum class CellStatus { Ok, Nonphysical, Invalid };

struct MapCell {
    double x = 0.0, r = 0.0;
    CellStatus status = CellStatus::Invalid;
    double L2 = 0.0;
    EnergeticVerdict energetic = EnergeticVerdict::Degenerate;
    LinearVerdict linear = LinearVerdict::Unstable;
    std::vector<double> coeffs;
};

struct Polyline {
    std::string label;
    std::vector<std::pair<double, double>> pts;  // (x, r)
};

struct StabilityMap {
    PlaneSpec spec;
    std::vector<MapCell> cells;  // row-major, x fastest
    std::vector<Polyline> overlays;
};

StabilityMap stability_map(const PlaneSpec& spec);

}  // namespace gravre
