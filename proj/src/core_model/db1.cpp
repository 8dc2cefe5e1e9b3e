#include "gravre/db1.hpp"

#include <cmath>
#include <sstream>

#include "gravre/errors.hpp"
#include "gravre/numdiff.hpp"

namespace gravre {

namespace {

struct Terms {
    double c, s, d1, d2, i13, i23, i15, i25;
};

Terms terms(const Db1Params& p, double r, double theta) {
    Terms t{};
    t.c = std::cos(theta);
    t.s = std::sin(theta);
    const auto d = db1_distances(p, r, theta);
    t.d1 = d.d1;
    t.d2 = d.d2;
    t.i13 = 1.0 / (d.d1 * d.d1 * d.d1);
    t.i23 = 1.0 / (d.d2 * d.d2 * d.d2);
    t.i15 = t.i13 / (d.d1 * d.d1);
    t.i25 = t.i23 / (d.d2 * d.d2);
    return t;
}

// x1(r − x2 c)/d1³ + x2(r + x1 c)/d2³
double radial_h(const Db1Params& p, double r, const Terms& t) {
    return p.x1 * (r - p.x2 * t.c) * t.i13 + p.x2 * (r + p.x1 * t.c) * t.i23;
}

double radial_h_r(const Db1Params& p, double r, const Terms& t) {
    const double a = r - p.x2 * t.c, b = r + p.x1 * t.c;
    return p.x1 * t.i13 - 3.0 * p.x1 * a * a * t.i15 + p.x2 * t.i23 - 3.0 * p.x2 * b * b * t.i25;
}

double theta_theta(const Db1Params& p, double r, const Terms& t) {
    const double xx = p.x1 * p.x2;
    return xx * r * t.c * (t.i13 - t.i23) - 3.0 * xx * r * r * t.s * t.s * (p.x2 * t.i15 + p.x1 * t.i25);
}

double mixed_tail(const Db1Params& p, double r, const Terms& t) {
    const double xx = p.x1 * p.x2;
    return 3.0 * xx * r * t.s * ((r + p.x1 * t.c) * t.i25 - (r - p.x2 * t.c) * t.i15);
}

}  // namespace

Db1Distances db1_distances(const Db1Params& p, double r, double theta, double guard) {
    const double c = std::cos(theta);
    const double q1 = r * r - 2.0 * p.x2 * r * c + p.x2 * p.x2;
    const double q2 = r * r + 2.0 * p.x1 * r * c + p.x1 * p.x1;
    Db1Distances d{std::sqrt(std::max(q1, 0.0)), std::sqrt(std::max(q2, 0.0))};
    if (d.d1 < guard || d.d2 < guard) {
        std::ostringstream os;
        os << "mass collision at r=" << r << ", theta=" << theta;
        throw CollisionError(os.str());
    }
    return d;
}

double db1_amended_potential(const Db1Params& p, double L, double r, double theta) {
    const auto d = db1_distances(p, r, theta);
    return L * L / (2.0 * (r * r + p.B)) - p.x1 / d.d1 - p.x2 / d.d2;
}

Vec2 db1_grad_V(const Db1Params& p, double L, double r, double theta) {
    const Terms t = terms(p, r, theta);
    const double S = r * r + p.B;
    Vec2 g;
    g[0] = radial_h(p, r, t) - L * L * r / (S * S);
    g[1] = p.x1 * p.x2 * r * t.s * (t.i13 - t.i23);
    return g;
}

double db1_L2_required(const Db1Params& p, double r, double theta) {
    const Terms t = terms(p, r, theta);
    const double S = r * r + p.B;
    return S * S / r * radial_h(p, r, t);
}

Mat2 db1_hessian_exact(const Db1Params& p, double L, double r, double theta) {
    const Terms t = terms(p, r, theta);
    const double S = r * r + p.B;
    Mat2 H;
    H(0, 0) = radial_h_r(p, r, t) - L * L * (p.B - 3.0 * r * r) / (S * S * S);
    H(1, 1) = theta_theta(p, r, t);
    H(0, 1) = H(1, 0) = p.x1 * p.x2 * t.s * (t.i13 - t.i23) + mixed_tail(p, r, t);
    return H;
}

DerivativeBundle<2> db1_hessian_V(const Db1Params& p, double L, double r, double theta, bool at_re) {
    DerivativeBundle<2> b;
    b.value = db1_amended_potential(p, L, r, theta);
    b.gradient = db1_grad_V(p, L, r, theta);
    if (at_re) {
        if (b.gradient.norm() >= 1e-8) {
            std::ostringstream os;
            os << "gradient norm " << b.gradient.norm() << " at r=" << r << " exceeds 1e-8";
            throw NotAnEquilibrium(os.str());
        }
        const Terms t = terms(p, r, theta);
        const double S = r * r + p.B;
        b.hessian(0, 0) = radial_h_r(p, r, t) + (3.0 * r * r - p.B) / (r * S) * radial_h(p, r, t);
        b.hessian(1, 1) = theta_theta(p, r, t);
        b.hessian(0, 1) = b.hessian(1, 0) = mixed_tail(p, r, t);
        b.method = DerivativeMethod::ClosedForm;
        return b;
    }
    auto grad = [&](const Vec2& x) { return db1_grad_V(p, L, x[0], x[1]); };
    b.hessian = fd_jacobian<2>(grad, Vec2(r, theta));
    b.raw_asymmetry = symmetrize<2>(b.hessian);
    b.method = DerivativeMethod::FiniteDifference;
    return b;
}

double rotation_speed_at_re(const Db1Params& p, double L, double r) { return L / (r * r + p.B); }

}  // namespace gravre
