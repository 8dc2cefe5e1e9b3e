#include "gravre/types.hpp"

#include <cmath>
#include <sstream>

#include "gravre/errors.hpp"

namespace gravre {

namespace {

constexpr double kSumTol = 1e-12;

void require_open_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << name << " must lie in (0,1), got " << v;
        throw ValidationError(os.str());
    }
}

void require_sum(double a, double b, const char* what) {
    if (std::abs(a + b - 1.0) > kSumTol) {
        std::ostringstream os;
        os << what << " must sum to 1, got " << a + b;
        throw ValidationError(os.str());
    }
}

}  // namespace

Db1Params Db1Params::create(double x1, double M1) { return create(x1, 1.0 - x1, M1, 1.0 - M1); }

Db1Params Db1Params::create(double x1, double x2, double M1, double M2, double ell, double G) {
    require_open_unit(x1, "x1");
    require_open_unit(x2, "x2");
    require_open_unit(M1, "M1");
    require_open_unit(M2, "M2");
    require_sum(x1, x2, "x1 + x2");
    require_sum(M1, M2, "M1 + M2");
    if (ell != 1.0) throw ValidationError("ell must be 1 (normalized rod length)");
    if (G != 1.0) throw ValidationError("G must be 1 (normalized units)");
    Db1Params p;
    p.x1 = x1;
    p.x2 = x2;
    p.M1 = M1;
    p.M2 = M2;
    p.B = x1 * x2 / M1;
    return p;
}

Db2Params Db2Params::create(double x11, double x21, double ell1, double M1) {
    require_open_unit(x11, "x11");
    require_open_unit(x21, "x21");
    require_open_unit(ell1, "ell1");
    require_open_unit(M1, "M1");
    Db2Params p;
    p.x11 = x11;
    p.x12 = 1.0 - x11;
    p.x21 = x21;
    p.x22 = 1.0 - x21;
    p.ell1 = ell1;
    p.ell2 = 1.0 - ell1;
    p.M1 = M1;
    p.M2 = 1.0 - M1;
    p.B1 = p.x11 * p.x12 * p.ell1 * p.ell1 / p.M2;
    p.B2 = p.x21 * p.x22 * p.ell2 * p.ell2 / p.M1;
    return p;
}

Db2Params Db2Params::equal_mass(double ell1, double M1) { return create(0.5, 0.5, ell1, M1); }

bool Db2Params::is_equal_mass() const { return x11 == 0.5 && x21 == 0.5; }

Configuration Configuration::db1(double r, double theta, std::optional<double> L) {
    if (!(r > 0.0)) throw ValidationError("r must be positive");
    if (L && *L < 0.0) throw ValidationError("L must be non-negative");
    Configuration c;
    c.model = Model::Db1;
    c.r = r;
    double t = std::fmod(theta, kPi);
    if (t < 0) t += kPi;
    c.theta1 = t;
    c.L = L;
    return c;
}

Configuration Configuration::db2(double r, double theta1, double theta2, std::optional<double> L) {
    if (!(r > 0.0)) throw ValidationError("r must be positive");
    if (L && *L < 0.0) throw ValidationError("L must be non-negative");
    Configuration c;
    c.model = Model::Db2;
    c.r = r;
    c.theta1 = wrap_2pi(theta1);
    c.theta2 = wrap_2pi(theta2);
    c.L = L;
    return c;
}

double wrap_2pi(double a) {
    double t = std::fmod(a, 2.0 * kPi);
    if (t < 0) t += 2.0 * kPi;
    if (t >= 2.0 * kPi) t = 0.0;
    return t;
}

double wrap_pi(double a) {
    double t = wrap_2pi(a + kPi) - kPi;
    return t;
}

double torus_distance(double a1, double a2, double b1, double b2) {
    double d1 = wrap_pi(a1 - b1), d2 = wrap_pi(a2 - b2);
    return std::hypot(d1, d2);
}

}  // namespace gravre
