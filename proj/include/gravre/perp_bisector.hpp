#pragma once

#include <string>
#include <vector>

#include "gravre/types.hpp"

namespace gravre {

struct PointMass {
    Vec2 pos = Vec2::Zero();
    double m = 0.0;
};

/// A rigid body given as point masses.
struct DiscretizedBody {
    std::vector<PointMass> points;
    std::string label;

    /// Throws ValidationError unless there is at least one point, masses are positive and finite.
    void validate() const;
};

/// Masses m1 at r1 and m2 at r2 (fractions of the body mass M1).
struct DumbbellSpec {
    Vec2 r1 = Vec2(-0.5, 0.0), r2 = Vec2(0.5, 0.0);
    double m1 = 0.5, m2 = 0.5;
    double M1 = 1.0;
};

enum class Kernel { Newtonian, Literal };

/// Newtonian: θ̈ = (1/ℓ) Σ m (p_y − r_y)(|p − r2|⁻³ − |p − r1|⁻³).
/// Literal:   θ̈ = (2/M1) Σ m (p_y − r_y)(|p − r2|⁻⁴ − |p − r1|⁻⁴).
/// Coordinates are first moved to the aligned frame (rod along +x from r1 to r2, origin at the rod midpoint).
double rotational_acceleration(const DumbbellSpec& d, const std::vector<DiscretizedBody>& bodies,
                               Kernel k = Kernel::Newtonian);

enum class ConeVerdict { Compatible, ViolatesTheorem };

struct ConeReport {
    bool cone13 = false;  // open quadrants 1 and 3
    bool cone24 = false;  // open quadrants 2 and 4
    bool on_rod_line = false;
    bool on_bisector = false;
    double theta_ddot = 0.0;
    ConeVerdict verdict = ConeVerdict::Compatible;
};

inline constexpr double kAxisTol = 1e-12;

ConeReport cone_check(const DumbbellSpec& d, const std::vector<DiscretizedBody>& bodies,
                      Kernel k = Kernel::Newtonian);

std::string to_string(ConeVerdict v);

}  // namespace gravre
