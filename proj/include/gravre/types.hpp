#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace gravre {

inline constexpr double kPi = 3.14159265358979323846;

/// Collision guard on pairwise distances for potential evaluation.
inline constexpr double kCollisionGuard = 1e-12;

/// Dumbbell (masses x1, x2 on a unit rod, body mass M1) and point mass M2.
/// Built only through `create`, which enforces the normalization.
struct Db1Params {
    double x1 = 0.5, x2 = 0.5;
    double M1 = 0.5, M2 = 0.5;
    double ell = 1.0;
    double G = 1.0;
    double B = 0.5;  // x1*x2/M1

    static Db1Params create(double x1, double M1);
    static Db1Params create(double x1, double x2, double M1, double M2, double ell = 1.0, double G = 1.0);
};

/// Two dumbbells. Dumbbell i has masses x_i1, x_i2, rod length ell_i and body mass M_i.
struct Db2Params {
    double x11 = 0.5, x12 = 0.5, x21 = 0.5, x22 = 0.5;
    double M1 = 0.5, M2 = 0.5;
    double ell1 = 0.5, ell2 = 0.5;
    double B1 = 0.0, B2 = 0.0;

    static Db2Params create(double x11, double x21, double ell1, double M1);
    static Db2Params equal_mass(double ell1, double M1 = 0.5);

    bool is_equal_mass() const;
    double S(double r) const { return r * r + B1 + B2; }
};

enum class Model { Kepler, Db1, Db2 };

/// A point of reduced configuration space.
struct Configuration {
    Model model = Model::Db1;
    double r = 1.0;
    double theta1 = 0.0;  // θ for Db1
    double theta2 = 0.0;  // unused for Db1
    std::optional<double> L;

    static Configuration db1(double r, double theta, std::optional<double> L = {});
    static Configuration db2(double r, double theta1, double theta2, std::optional<double> L = {});
};

/// Reduce to [0, 2π).
double wrap_2pi(double a);
/// Reduce to [-π, π).
double wrap_pi(double a);
/// Distance on the flat torus [0,2π)^2.
double torus_distance(double a1, double a2, double b1, double b2);

enum class DerivativeMethod { ClosedForm, FiniteDifference };

template <int N>
struct DerivativeBundle {
    double value = 0.0;
    Eigen::Matrix<double, N, 1> gradient = Eigen::Matrix<double, N, 1>::Zero();
    Eigen::Matrix<double, N, N> hessian = Eigen::Matrix<double, N, N>::Zero();
    DerivativeMethod method = DerivativeMethod::ClosedForm;
    /// max |H - H^T| before symmetrization, relative to max |H|.
    double raw_asymmetry = 0.0;
};

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

}  // namespace gravre
