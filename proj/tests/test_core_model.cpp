#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

#include "gravre/db1.hpp"
#include "gravre/db2.hpp"
#include "gravre/errors.hpp"
#include "support.hpp"

using namespace gravre;
using gravre::testing::richardson_gradient;
using Dec50 = boost::multiprecision::cpp_dec_float_50;

namespace {

// Position-based evaluation, generic in the scalar type.
template <class T>
T db1_V_positions(double x1d, double M1d, double Ld, double rd, double thd) {
    const T x1 = x1d, x2 = T(1) - x1, M1 = M1d, L = Ld, r = rd, th = thd;
    const T B = x1 * x2 / M1;
    using std::cos, std::sin, std::sqrt;
    using boost::multiprecision::cos, boost::multiprecision::sin, boost::multiprecision::sqrt;
    const T px = r, py = 0;
    const T ax = x2 * cos(th), ay = x2 * sin(th);    // mass x1
    const T bx = -x1 * cos(th), by = -x1 * sin(th);  // mass x2
    const T d1 = sqrt((px - ax) * (px - ax) + (py - ay) * (py - ay));
    const T d2 = sqrt((px - bx) * (px - bx) + (py - by) * (py - by));
    return L * L / (2 * (r * r + B)) - x1 / d1 - x2 / d2;
}

template <class T>
T db2_V_positions(const Db2Params& p, double Ld, double rd, double t1d, double t2d) {
    using std::cos, std::sin, std::sqrt;
    using boost::multiprecision::cos, boost::multiprecision::sin, boost::multiprecision::sqrt;
    const T x11 = p.x11, x21 = p.x21, ell1 = p.ell1, M1 = p.M1;
    const T x12 = T(1) - x11, x22 = T(1) - x21, ell2 = T(1) - ell1, M2 = T(1) - M1;
    const T L = Ld, r = rd, t1 = t1d, t2 = t2d;
    const T B1 = x11 * x12 * ell1 * ell1 / M2, B2 = x21 * x22 * ell2 * ell2 / M1;
    const T c1 = cos(t1), s1 = sin(t1), c2 = cos(t2), s2 = sin(t2);
    const T ux[2] = {-x12 * ell1 * c1, x11 * ell1 * c1}, uy[2] = {-x12 * ell1 * s1, x11 * ell1 * s1};
    const T vx[2] = {r - x22 * ell2 * c2, r + x21 * ell2 * c2}, vy[2] = {-x22 * ell2 * s2, x21 * ell2 * s2};
    const T mu[2] = {x11, x12}, mv[2] = {x21, x22};
    T U = 0;
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            U -= mu[u] * mv[v] / sqrt((vx[v] - ux[u]) * (vx[v] - ux[u]) + (vy[v] - uy[u]) * (vy[v] - uy[u]));
    return L * L / (2 * (r * r + B1 + B2)) + U;
}

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace

// ---- parameters ----

TEST(Params, Db1NormalizationAndInertia) {
    const auto p = Db1Params::create(0.3, 0.6);
    EXPECT_DOUBLE_EQ(p.x2, 0.7);
    EXPECT_DOUBLE_EQ(p.M2, 0.4);
    EXPECT_DOUBLE_EQ(p.B, 0.3 * 0.7 / 0.6);
    EXPECT_THROW(Db1Params::create(0.0, 0.5), ValidationError);
    EXPECT_THROW(Db1Params::create(0.5, 1.0), ValidationError);
    EXPECT_THROW(Db1Params::create(0.3, 0.6, 0.5, 0.5), ValidationError);
    EXPECT_THROW(Db1Params::create(0.3, 0.7, 0.5, 0.5, 2.0), ValidationError);
    EXPECT_THROW(Db1Params::create(0.3, 0.7, 0.5, 0.5, 1.0, 6.67), ValidationError);
}

TEST(Params, Db2NormalizationAndInertia) {
    const auto p = Db2Params::create(0.4, 0.2, 0.7, 0.35);
    EXPECT_DOUBLE_EQ(p.x12 + p.x11, 1.0);
    EXPECT_DOUBLE_EQ(p.ell1 + p.ell2, 1.0);
    EXPECT_DOUBLE_EQ(p.B1, 0.4 * 0.6 * 0.49 / 0.65);
    EXPECT_NEAR(p.B2, 0.2 * 0.8 * 0.09 / 0.35, 1e-15);
    EXPECT_THROW(Db2Params::create(0.4, 0.2, 1.0, 0.5), ValidationError);
    EXPECT_TRUE(Db2Params::equal_mass(0.75).is_equal_mass());
}

TEST(Params, ConfigurationRejectsBadValues) {
    EXPECT_THROW(Configuration::db1(0.0, 0.1), ValidationError);
    EXPECT_THROW(Configuration::db2(1.0, 0.1, 0.2, -1.0), ValidationError);
}

// ---- Db1 ----

TEST(Db1Distances, ColinearAndRightAngle) {
    const auto p = Db1Params::create(0.5, 0.5);
    auto d = db1_distances(p, 1.0, 0.0);
    EXPECT_NEAR(d.d1, 0.5, 1e-15);
    EXPECT_NEAR(d.d2, 1.5, 1e-15);
    d = db1_distances(p, 1.0, kPi / 2);
    EXPECT_NEAR(d.d1, std::sqrt(5.0) / 2, 1e-15);
    EXPECT_NEAR(d.d2, std::sqrt(5.0) / 2, 1e-15);
}

TEST(Db1Distances, IsoscelesReferencePointIsEquidistant) {
    const auto p = Db1Params::create(0.75, 0.45);
    const auto d = db1_distances(p, 0.3384, 0.7646 * kPi);
    EXPECT_NEAR(d.d1, d.d2, 1e-3);
}

TEST(Db1Distances, CollisionThrows) {
    const auto p = Db1Params::create(0.5, 0.5);
    EXPECT_THROW(db1_distances(p, 0.5, 0.0), CollisionError);
    EXPECT_THROW(db1_amended_potential(p, 1.0, 0.5, 0.0), CollisionError);
}

TEST(Db1Potential, ZeroAngularMomentumIsNegative) {
    const auto p = Db1Params::create(0.3, 0.4);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> R(0.05, 5.0), T(0.0, kPi);
    for (int k = 0; k < 200; ++k) {
        const double r = R(rng), th = T(rng);
        const auto d = db1_distances(p, r, th);
        EXPECT_DOUBLE_EQ(db1_amended_potential(p, 0.0, r, th), -p.x1 / d.d1 - p.x2 / d.d2);
        EXPECT_LT(db1_amended_potential(p, 0.0, r, th), 0.0);
    }
    EXPECT_GT(db1_amended_potential(p, 0.0, 1e8, 0.3), -1.1e-8);
}

TEST(Db1Potential, FiftyDigitOracle) {
    const auto p = Db1Params::create(0.3, 0.5);
    const double v = db1_amended_potential(p, 1.1, 2.0, 0.4);
    const Dec50 ref = db1_V_positions<Dec50>(0.3, 0.5, 1.1, 2.0, 0.4);
    EXPECT_NEAR(v, ref.convert_to<double>(), 1e-15 * std::abs(v));
}

TEST(Db1Potential, MassSwapSymmetry) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.1, 4.0), T(0.0, 2 * kPi), Lg(0.0, 2.0);
    for (int k = 0; k < 300; ++k) {
        const double x1 = X(rng), M1 = X(rng), r = R(rng), th = T(rng), L = Lg(rng);
        const auto a = Db1Params::create(x1, M1), b = Db1Params::create(1.0 - x1, M1);
        try {
            EXPECT_NEAR(db1_amended_potential(a, L, r, th), db1_amended_potential(b, L, r, th + kPi), 1e-12);
        } catch (const CollisionError&) {
        }
    }
}

TEST(Db1Gradient, AngularVanishesOnSymmetricConfigurations) {
    const auto p = Db1Params::create(0.2, 0.6);
    const auto q = Db1Params::create(0.5, 0.6);
    for (double r : {0.3, 1.0, 3.0}) {
        EXPECT_EQ(db1_grad_V(p, 1.3, r, 0.0)[1], 0.0);
        EXPECT_NEAR(db1_grad_V(q, 1.3, r, kPi / 2)[1], 0.0, 1e-15);
    }
}

TEST(Db1Gradient, OverlapReferenceRadiusIsRadialCritical) {
    const auto p = Db1Params::create(0.008, 0.5);
    EXPECT_LT(std::abs(db1_grad_V(p, std::sqrt(0.7), 0.721838, 0.0)[0]), 1e-5);
}

TEST(Db1Gradient, IsoscelesReferenceIsCritical) {
    const auto p = Db1Params::create(0.75, 0.45);
    const double L = std::sqrt(1.7);
    // the reference configuration, Newton-polished on the isosceles relation
    double r = 0.3384;
    for (int k = 0; k < 50; ++k) {
        const double h = 1e-7;
        const double f = db1_L2_required(p, r, std::acos((p.x2 - p.x1) / (2 * r))) - 1.7;
        const double fp =
            (db1_L2_required(p, r + h, std::acos((p.x2 - p.x1) / (2 * (r + h)))) - (f + 1.7)) / h;
        r -= f / fp;
    }
    const double th = std::acos((p.x2 - p.x1) / (2 * r));
    EXPECT_NEAR(r, 0.3384, 1e-3);
    EXPECT_LT(db1_grad_V(p, L, r, th).norm(), 1e-6);
}

TEST(Db1Gradient, MatchesFiniteDifferences) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.05, 4.0), T(0.0, kPi), Lg(0.0, 2.0);
    int n = 0;
    while (n < 1000) {
        const double x1 = X(rng), M1 = X(rng), L = Lg(rng);
        const auto p = Db1Params::create(x1, M1);
        const Vec2 x(R(rng), T(rng));
        try {
            if (std::min(db1_distances(p, x[0], x[1]).d1, db1_distances(p, x[0], x[1]).d2) < 0.02) continue;
            const Vec2 g = db1_grad_V(p, L, x[0], x[1]);
            const Vec2 fd = richardson_gradient<2>(
                [&](const Vec2& y) { return db1_amended_potential(p, L, y[0], y[1]); }, x);
            ASSERT_LT(rel_err(g, fd), 1e-6) << "x1=" << x1 << " r=" << x[0] << " th=" << x[1];
            ++n;
        } catch (const CollisionError&) {
        }
    }
}

TEST(Db1Hessian, ClosedFormMatchesFiniteDifferencesOffEquilibrium) {
    const auto p = Db1Params::create(0.3, 0.5);
    const Mat2 H = db1_hessian_exact(p, 1.0, 1.7, 0.0);
    const auto fd = db1_hessian_V(p, 1.0, 1.7, 0.0, false);
    EXPECT_LT((H - fd.hessian).cwiseAbs().maxCoeff() / H.cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_EQ(fd.method, DerivativeMethod::FiniteDifference);
    EXPECT_LT(fd.raw_asymmetry, 1e-6);
}

TEST(Db1Hessian, ColinearReHasZeroMixedEntry) {
    const auto p = Db1Params::create(0.3, 0.5);
    const double r = 1.7, L2 = db1_L2_required(p, r, 0.0);
    const auto b = db1_hessian_V(p, std::sqrt(L2), r, 0.0, true);
    EXPECT_EQ(b.method, DerivativeMethod::ClosedForm);
    EXPECT_NEAR(b.hessian(0, 1), 0.0, 1e-14);
    EXPECT_NEAR(b.hessian(1, 0), 0.0, 1e-14);
}

TEST(Db1Hessian, IsoscelesReHasNegativeAngularCurvature) {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> X(0.05, 0.95), U(0.01, 3.0);
    for (int k = 0; k < 200; ++k) {
        const auto p = Db1Params::create(X(rng), X(rng));
        const double r = std::abs(p.x2 - p.x1) / 2 + U(rng);
        const double th = std::acos((p.x2 - p.x1) / (2 * r));
        const double L2 = db1_L2_required(p, r, th);
        const auto b = db1_hessian_V(p, std::sqrt(L2), r, th, true);
        EXPECT_LT(b.hessian(1, 1), 0.0);
    }
}

TEST(Db1Hessian, AtReRequiresEquilibrium) {
    const auto p = Db1Params::create(0.3, 0.5);
    EXPECT_THROW(db1_hessian_V(p, 1.0, 1.7, 0.4, true), NotAnEquilibrium);
}

TEST(Db1Hessian, Symmetric) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.1, 4.0), T(0.0, kPi);
    for (int k = 0; k < 1000; ++k) {
        const auto p = Db1Params::create(X(rng), X(rng));
        try {
            const Mat2 H = db1_hessian_exact(p, 1.0, R(rng), T(rng));
            EXPECT_LE(std::abs(H(0, 1) - H(1, 0)), 1e-10 * H.cwiseAbs().maxCoeff());
        } catch (const CollisionError&) {
        }
    }
}

TEST(RotationSpeed, Db1ReferenceValues) {
    const auto p = Db1Params::create(0.75, 0.45);
    const double L = std::sqrt(1.7);
    EXPECT_NEAR(rotation_speed_at_re(p, L, 0.338385), 2.455, 0.005);
    EXPECT_NEAR(rotation_speed_at_re(p, L, 1.262224), 0.6487, 0.002);
    EXPECT_EQ(rotation_speed_at_re(p, 0.0, 1.0), 0.0);
}

// ---- Db2 ----

TEST(Db2Distances, ColinearRadiiAreCollisions) {
    const auto p = Db2Params::create(0.3, 0.6, 0.7, 0.4);
    for (double rc : db2_colinear_collision_radii(p)) {
        if (rc <= 0) continue;
        const auto d = db2_distances(p, rc, 0.0, 0.0, 0.0);
        EXPECT_NEAR(std::min({d.d11, d.d12, d.d21, d.d22}), 0.0, 1e-14);
    }
}

TEST(Db2Distances, EqualRodTrapezoidCollapsesAtOrigin) {
    const auto p = Db2Params::equal_mass(0.5);
    EXPECT_LT(db2_distances(p, 1e-6, kPi / 2, kPi / 2).d11, 1e-5);
    EXPECT_THROW(db2_distances(p, 1e-14, kPi / 2, kPi / 2), CollisionError);
}

TEST(Db2Distances, SymmetricVerticalDumbbell) {
    const auto p = Db2Params::create(0.5, 0.3, 0.6, 0.5);
    for (double r : {0.2, 0.9, 2.5}) {
        const auto d = db2_distances(p, r, kPi / 2, 0.0);
        EXPECT_NEAR(d.d11, d.d21, 1e-14);
        EXPECT_NEAR(d.d12, d.d22, 1e-14);
    }
}

TEST(Db2Potential, ZeroAngularMomentumIsNegative) {
    const auto p = Db2Params::create(0.3, 0.6, 0.7, 0.4);
    EXPECT_LT(db2_amended_potential(p, 0.0, 1.3, 0.2, 2.1), 0.0);
    EXPECT_GT(db2_amended_potential(p, 0.0, 1e8, 0.2, 2.1), -1.1e-8);
}

TEST(Db2Potential, FiftyDigitOracle) {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.3, 3.0), T(0.0, 2 * kPi);
    for (int k = 0; k < 20; ++k) {
        const auto p = Db2Params::create(X(rng), X(rng), X(rng), X(rng));
        const double r = R(rng), a = T(rng), b = T(rng);
        try {
            const double v = db2_amended_potential(p, 0.9, r, a, b);
            const Dec50 ref = db2_V_positions<Dec50>(p, 0.9, r, a, b);
            EXPECT_NEAR(v, ref.convert_to<double>(), 1e-13 * std::abs(v));
        } catch (const CollisionError&) {
        }
    }
}

TEST(Db2Potential, BodySwapSymmetry) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.1, 3.0), T(0.0, 2 * kPi), Lg(0.0, 2.0);
    for (int k = 0; k < 300; ++k) {
        const double x11 = X(rng), x21 = X(rng), l1 = X(rng), M1 = X(rng);
        const auto a = Db2Params::create(x11, x21, l1, M1);
        const auto b = Db2Params::create(x21, x11, 1.0 - l1, 1.0 - M1);
        const double r = R(rng), t1 = T(rng), t2 = T(rng), L = Lg(rng);
        try {
            EXPECT_NEAR(db2_amended_potential(a, L, r, t1, t2), db2_amended_potential(b, L, r, t2 + kPi, t1 + kPi),
                        1e-12 * std::max(1.0, std::abs(db2_amended_potential(a, L, r, t1, t2))));
        } catch (const CollisionError&) {
        }
    }
}

TEST(Db2Gradient, SymmetricFamiliesSatisfyAngularRequirements) {
    const auto p = Db2Params::create(0.3, 0.6, 0.7, 0.4);
    const auto q = Db2Params::create(0.5, 0.2, 0.4, 0.6);
    for (double r : {0.9, 1.7}) {
        const Vec3 g = db2_grad_V(p, 1.0, r, 0.0, 0.0);
        EXPECT_EQ(g[1], 0.0);
        EXPECT_EQ(g[2], 0.0);
        const Vec3 h = db2_grad_V(q, 1.0, r, kPi / 2, 0.0);
        EXPECT_NEAR(h[1], 0.0, 1e-15);
        EXPECT_NEAR(h[2], 0.0, 1e-15);
    }
}

TEST(Db2Gradient, EqualRodResidualsShrinkAtSmallRadius) {
    // θ1 = θ2 = arccot √2: the angular residual scales with r as r → 0
    const auto p = Db2Params::equal_mass(0.5);
    const double t = std::atan(1.0 / std::sqrt(2.0));
    const Vec3 g1 = db2_grad_U(p, 1e-2, t, t), g2 = db2_grad_U(p, 1e-3, t, t);
    EXPECT_LT(g2.tail<2>().norm(), 0.2 * g1.tail<2>().norm());
}

TEST(Db2Gradient, MatchesFiniteDifferences) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.05, 3.0), T(0.0, 2 * kPi), Lg(0.0, 2.0);
    int n = 0;
    while (n < 1000) {
        const auto p = Db2Params::create(X(rng), X(rng), X(rng), X(rng));
        const double L = Lg(rng);
        const Vec3 x(R(rng), T(rng), T(rng));
        try {
            const auto d = db2_distances(p, x[0], x[1], x[2]);
            if (std::min({d.d11, d.d12, d.d21, d.d22}) < 0.02) continue;
            const Vec3 g = db2_grad_V(p, L, x[0], x[1], x[2]);
            const Vec3 fd = richardson_gradient<3>(
                [&](const Vec3& y) { return db2_amended_potential(p, L, y[0], y[1], y[2]); }, x);
            ASSERT_LT(rel_err(g, fd), 1e-6);
            ++n;
        } catch (const CollisionError&) {
        }
    }
}

TEST(Db2Hessian, SymmetricAndColinearBlockDiagonal) {
    const auto p = Db2Params::create(0.3, 0.6, 0.7, 0.4);
    const auto b = db2_hessian_V(p, 1.0, 1.6, 0.0, 0.0);
    EXPECT_EQ(b.method, DerivativeMethod::FiniteDifference);
    EXPECT_NEAR(b.hessian(0, 1), 0.0, 1e-8);
    EXPECT_NEAR(b.hessian(0, 2), 0.0, 1e-8);
    EXPECT_LT(b.raw_asymmetry, 1e-6);
    EXPECT_TRUE(b.hessian.isApprox(b.hessian.transpose(), 1e-14));
}

TEST(Db2Hessian, PerpendicularIsoscelesStructure) {
    const auto p = Db2Params::create(0.5, 0.3, 0.6, 0.5);
    for (double r : {0.5, 1.0, 2.0}) {
        const double L2 = db2_L2_required(p, r, kPi / 2, 0.0);
        const auto b = db2_hessian_V(p, std::sqrt(L2), r, kPi / 2, 0.0);
        EXPECT_NEAR(b.hessian(0, 1), 0.0, 1e-8);
        EXPECT_NEAR(b.hessian(0, 2), 0.0, 1e-8);
        EXPECT_GT(std::abs(b.hessian(1, 2)), 1e-6);
        EXPECT_LT(b.hessian(1, 1), 0.0);
        const double l1 = p.ell1, l2 = p.ell2, a = r - p.x22 * l2, c = r + p.x21 * l2;
        const double closed = -24 * l1 * l1 *
            (p.x21 * a * a / std::pow(4 * a * a + l1 * l1, 2.5) + p.x22 * c * c / std::pow(4 * c * c + l1 * l1, 2.5));
        EXPECT_NEAR(b.hessian(1, 1) / closed, 1.0, 1e-8);
    }
}

TEST(Db2Hessian, SymmetryOverRandomConfigurations) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.1, 3.0), T(0.0, 2 * kPi);
    for (int k = 0; k < 1000; ++k) {
        const auto p = Db2Params::create(X(rng), X(rng), X(rng), X(rng));
        try {
            const auto b = db2_hessian_V(p, 0.8, R(rng), T(rng), T(rng));
            const double s = b.hessian.cwiseAbs().maxCoeff();
            EXPECT_LE((b.hessian - b.hessian.transpose()).cwiseAbs().maxCoeff(), 1e-10 * s);
        } catch (const CollisionError&) {
        }
    }
}

TEST(Db2Hessian, AngularBlockMatchesFullHessian) {
    const auto p = Db2Params::create(0.3, 0.6, 0.7, 0.4);
    const auto b = db2_hessian_V(p, 0.7, 1.3, 0.4, 2.2);
    const Mat2 A = db2_angular_hessian(p, 1.3, 0.4, 2.2);
    EXPECT_LT((A - b.hessian.bottomRightCorner<2, 2>()).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(RotationSpeed, Db2) {
    const auto p = Db2Params::create(0.3, 0.6, 0.7, 0.4);
    EXPECT_DOUBLE_EQ(rotation_speed_at_re(p, 2.0, 1.5), 2.0 / p.S(1.5));
    EXPECT_EQ(rotation_speed_at_re(p, 0.0, 1.5), 0.0);
}
