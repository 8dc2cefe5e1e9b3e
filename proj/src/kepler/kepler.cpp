#include "gravre/kepler.hpp"

#include "gravre/errors.hpp"

namespace gravre {

void KeplerParams::validate() const {
    if (!(L > 0.0)) throw ValidationError("L must be positive");
    if (!(M1 > 0.0)) throw ValidationError("M1 must be positive");
    if (!(M2 > 0.0)) throw ValidationError("M2 must be positive");
    if (!(G > 0.0)) throw ValidationError("G must be positive");
}

KeplerRe kepler_re(const KeplerParams& p) {
    p.validate();
    const double r = p.L * p.L / (p.G * p.M1 * p.M1 * p.M2);
    return {r, p.L / (p.M1 * r * r)};
}

KeplerPotential kepler_amended_potential(const KeplerParams& p, double r) {
    p.validate();
    if (!(r > 0.0)) throw ValidationError("r must be positive");
    const double L2 = p.L * p.L, k = p.G * p.M1 * p.M2;
    KeplerPotential out;
    out.V = L2 / (2.0 * p.M1 * r * r) - k / r;
    out.dV = -L2 / (p.M1 * r * r * r) + k / (r * r);
    out.d2V = 3.0 * L2 / (p.M1 * r * r * r * r) - 2.0 * k / (r * r * r);
    return out;
}

double kepler_radial_acceleration(const KeplerParams& p, double r) {
    return -kepler_amended_potential(p, r).dV / p.M1;
}

}  // namespace gravre
