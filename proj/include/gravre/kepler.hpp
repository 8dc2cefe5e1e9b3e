#pragma once

namespace gravre {

struct KeplerParams {
    double M1 = 1.0, M2 = 1.0, G = 1.0, L = 1.0;

    /// Throws ValidationError unless every field is strictly positive.
    void validate() const;
};

struct KeplerRe {
    double r = 0.0;
    double phi_dot = 0.0;
};

struct KeplerPotential {
    double V = 0.0;
    double dV = 0.0;
    double d2V = 0.0;
};

/// Critical point of V: r = L²/(G M1² M2), φ̇ = L/(M1 r²). Both reduce to L², G/L at M1 = M2 = 1.
KeplerRe kepler_re(const KeplerParams& p);

/// V = L²/(2 M1 r²) − G M1 M2 / r and its first two r-derivatives.
KeplerPotential kepler_amended_potential(const KeplerParams& p, double r);

/// r̈ = L²/(M1² r³) − G M2 / r²
double kepler_radial_acceleration(const KeplerParams& p, double r);

}  // namespace gravre
