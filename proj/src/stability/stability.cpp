#include "gravre/stability.hpp"

#include <cmath>
#include <initializer_list>
#include <sstream>

#include "gravre/db1.hpp"
#include "gravre/db2.hpp"
#include "gravre/errors.hpp"

namespace gravre {

std::string to_string(EnergeticVerdict v) {
    switch (v) {
        case EnergeticVerdict::StrictMinimum: return "strict-minimum";
        case EnergeticVerdict::Saddle: return "saddle";
        case EnergeticVerdict::Maximum: return "maximum";
        case EnergeticVerdict::Degenerate: return "degenerate";
    }
    return "?";
}

std::string to_string(LinearVerdict v) {
    switch (v) {
        case LinearVerdict::Stable: return "stable";
        case LinearVerdict::Unstable: return "unstable";
        case LinearVerdict::Marginal: return "marginal";
    }
    return "?";
}

std::string to_string(Planar2D k) {
    switch (k) {
        case Planar2D::Minimum: return "minimum";
        case Planar2D::Maximum: return "maximum";
        case Planar2D::Saddle: return "saddle";
        case Planar2D::Degenerate: return "degenerate";
    }
    return "?";
}

EnergeticReport energetic_classify(const Eigen::MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    EnergeticReport rep;
    rep.eigenvalues = es.eigenvalues();
    rep.eigenvectors = es.eigenvectors();
    const double scale = rep.eigenvalues.cwiseAbs().maxCoeff();
    const double thr = 1e-9 * scale;
    int pos = 0, neg = 0;
    for (int k = 0; k < rep.eigenvalues.size(); ++k) {
        const double l = rep.eigenvalues[k];
        const int s = l > thr ? 1 : (l < -thr ? -1 : 0);
        rep.signs.push_back(s);
        pos += s > 0;
        neg += s < 0;
    }
    const int n = static_cast<int>(rep.eigenvalues.size());
    rep.eigenvectors.row(0).cwiseAbs().maxCoeff(&rep.radial_index);
    if (pos == n)
        rep.verdict = EnergeticVerdict::StrictMinimum;
    else if (neg == n)
        rep.verdict = EnergeticVerdict::Maximum;
    else if (pos + neg < n)
        rep.verdict = EnergeticVerdict::Degenerate;
    else
        rep.verdict = EnergeticVerdict::Saddle;
    return rep;
}

namespace {

struct Criterion {
    double value;
    double scale;
};

LinearVerdict judge(std::initializer_list<Criterion> cs) {
    bool marginal = false;
    for (const auto& c : cs) {
        const double tol = 1e-9 * c.scale;
        if (c.value < -tol) return LinearVerdict::Unstable;
        if (std::abs(c.value) <= tol) marginal = true;
    }
    return marginal ? LinearVerdict::Marginal : LinearVerdict::Stable;
}

}  // namespace

double cubic_discriminant(double c2, double c1, double c0) {
    return c2 * c2 * c1 * c1 - 4.0 * c1 * c1 * c1 - 4.0 * c2 * c2 * c2 * c0 - 27.0 * c0 * c0 + 18.0 * c2 * c1 * c0;
}

Db1LinearCoeffs db1_linear_coeffs_from_hessian(const Db1Params& p, double L, double r, const Mat2& H) {
    const double S = r * r + p.B;
    const double k = S / (p.B * r * r);
    const double gyro = 4.0 * p.B * L * L / (S * S * S);
    Db1LinearCoeffs c;
    c.c1 = H(0, 0) + gyro + k * H(1, 1);
    c.c0 = k * (H(0, 0) * H(1, 1) - H(0, 1) * H(0, 1));
    const double s1 = std::abs(H(0, 0)) + gyro + k * std::abs(H(1, 1));
    const double s0 = k * (std::abs(H(0, 0) * H(1, 1)) + H(0, 1) * H(0, 1));
    c.verdict = judge({{c.c1 * c.c1 - 4.0 * c.c0, s1 * s1 + 4.0 * s0}, {c.c1, s1}, {c.c0, s0}});
    return c;
}

Db1LinearCoeffs db1_linear_coeffs(const Db1Params& p, double L, double r, double theta) {
    const auto b = db1_hessian_V(p, L, r, theta, true);
    return db1_linear_coeffs_from_hessian(p, L, r, b.hessian);
}

Db2LinearCoeffs db2_linear_coeffs_from_hessian(const Db2Params& p, double L, double r, const Mat3& H) {
    const double S = p.S(r), B1 = p.B1, B2 = p.B2;
    const double r2 = r * r;
    Mat3 Minv = Mat3::Zero();
    Minv(0, 0) = 1.0;
    Minv(1, 1) = (r2 + B1) / (B1 * r2);
    Minv(2, 2) = (r2 + B2) / (B2 * r2);
    Minv(1, 2) = Minv(2, 1) = 1.0 / r2;
    const Mat3 K = Minv * H;
    const double S3 = S * S * S;
    const double e2 = K(0, 0) * K(1, 1) - K(0, 1) * K(1, 0) + K(0, 0) * K(2, 2) - K(0, 2) * K(2, 0) +
                      K(1, 1) * K(2, 2) - K(1, 2) * K(2, 1);
    const double g2 = 4.0 * L * L * (B1 + B2) / S3;
    const double g1 =
        4.0 * L * L * (B1 * B1 * H(2, 2) - 2.0 * B1 * B2 * H(1, 2) + B2 * B2 * H(1, 1)) / (B1 * B2 * S3);
    Db2LinearCoeffs c;
    c.c2 = K.trace() + g2;
    c.c1 = e2 + g1;
    c.c0 = K.determinant();
    c.delta = cubic_discriminant(c.c2, c.c1, c.c0);

    const Mat3 Ka = K.cwiseAbs();
    const double s2 = Ka.trace() + g2;
    const double s1 = Ka(0, 0) * Ka(1, 1) + Ka(0, 1) * Ka(1, 0) + Ka(0, 0) * Ka(2, 2) + Ka(0, 2) * Ka(2, 0) +
                      Ka(1, 1) * Ka(2, 2) + Ka(1, 2) * Ka(2, 1) +
                      4.0 * L * L * (B1 * B1 * std::abs(H(2, 2)) + 2.0 * B1 * B2 * std::abs(H(1, 2)) +
                                     B2 * B2 * std::abs(H(1, 1))) /
                          (B1 * B2 * S3);
    const double s0 = Ka.rowwise().sum().prod();  // bounds |det K|
    const double sd = s2 * s2 * s1 * s1 + 4.0 * s1 * s1 * s1 + 4.0 * s2 * s2 * s2 * s0 + 27.0 * s0 * s0 +
                      18.0 * s2 * s1 * s0;
    c.verdict = judge({{c.delta, sd}, {c.c2, s2}, {c.c1, s1}, {c.c0, s0}});
    return c;
}

Db2LinearCoeffs db2_linear_coeffs(const Db2Params& p, double L, double r, double theta1, double theta2) {
    const auto b = db2_hessian_V(p, L, r, theta1, theta2);
    if (b.gradient.norm() >= 1e-8) {
        std::ostringstream os;
        os << "not an RE: |grad V| = " << b.gradient.norm();
        throw NotAnEquilibrium(os.str());
    }
    return db2_linear_coeffs_from_hessian(p, L, r, b.hessian);
}

Classify2D classify_2d(const Mat2& H) {
    Classify2D c;
    c.trace = H.trace();
    c.det = H.determinant();
    const double n = H.cwiseAbs().maxCoeff();
    const double tol = 1e-9 * n * n;
    if (c.det > tol)
        c.kind = c.trace > 0 ? Planar2D::Minimum : Planar2D::Maximum;
    else if (c.det < -tol)
        c.kind = Planar2D::Saddle;
    else
        c.kind = Planar2D::Degenerate;
    return c;
}

StabilityReport classify_re(const Db1Params& p, double L, double r, double theta) {
    const auto b = db1_hessian_V(p, L, r, theta, true);
    StabilityReport rep;
    rep.energetic = energetic_classify(b.hessian);
    const auto c = db1_linear_coeffs_from_hessian(p, L, r, b.hessian);
    rep.linear = c.verdict;
    rep.coeffs = {c.c1, c.c0};
    return rep;
}

StabilityReport classify_re(const Db2Params& p, double L, double r, double theta1, double theta2) {
    const auto b = db2_hessian_V(p, L, r, theta1, theta2);
    if (b.gradient.norm() >= 1e-8) {
        std::ostringstream os;
        os << "not an RE: |grad V| = " << b.gradient.norm();
        throw NotAnEquilibrium(os.str());
    }
    StabilityReport rep;
    rep.energetic = energetic_classify(b.hessian);
    const auto c = db2_linear_coeffs_from_hessian(p, L, r, b.hessian);
    rep.linear = c.verdict;
    rep.coeffs = {c.c2, c.c1, c.c0, c.delta};
    return rep;
}

}  // namespace gravre
