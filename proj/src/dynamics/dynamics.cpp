#include "gravre/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "gravre/db1.hpp"
#include "gravre/db2.hpp"
#include "gravre/errors.hpp"

namespace gravre {

namespace odeint = boost::numeric::odeint;

// ---- Db1 ----

Vec4 db1_rhs(const Db1Params& p, double L, const Vec4& x) {
    const double r = x[0], th = x[1], rd = x[2], thd = x[3];
    if (!(r > 0.0)) throw CollisionError("r reached zero");
    db1_distances(p, r, th, kDynamicsGuard);
    const Vec2 g = db1_grad_V(p, L, r, th);
    const double B = p.B, S = r * r + B;
    Vec4 d;
    d[0] = rd;
    d[1] = thd;
    d[2] = r * B * thd * (B * thd - 2.0 * L) / (S * S) - g[0];
    d[3] = 2.0 * rd * (L - B * thd) / (r * S) - S / (B * r * r) * g[1];
    return d;
}

double db1_phi_dot(const Db1Params& p, double L, const Vec4& x) {
    return (L - p.B * x[3]) / (x[0] * x[0] + p.B);
}

double db1_energy(const Db1Params& p, double L, const Vec4& x) {
    const double r = x[0], S = r * r + p.B;
    return 0.5 * x[2] * x[2] + 0.5 * p.B * r * r / S * x[3] * x[3] + db1_amended_potential(p, L, r, x[1]);
}

// ---- Db2 ----

Mat2 db2_angular_mass(const Db2Params& p, double r) {
    const double S = p.S(r), B1 = p.B1, B2 = p.B2;
    Mat2 M;
    M << B1 * (r * r + B2) / S, -B1 * B2 / S, -B1 * B2 / S, B2 * (r * r + B1) / S;
    return M;
}

namespace {

Mat2 db2_angular_mass_inv(const Db2Params& p, double r) {
    const double r2 = r * r;
    Mat2 Mi;
    Mi << (r2 + p.B1) / (p.B1 * r2), 1.0 / r2, 1.0 / r2, (r2 + p.B2) / (p.B2 * r2);
    return Mi;
}

}  // namespace

Vec6 db2_rhs(const Db2Params& p, double L, const Vec6& x) {
    const double r = x[0], rd = x[3];
    if (!(r > 0.0)) throw CollisionError("r reached zero");
    db2_distances(p, r, x[1], x[2], kDynamicsGuard);
    const Vec3 g = db2_grad_V(p, L, r, x[1], x[2]);
    const double S = p.S(r);
    const double w = p.B1 * x[4] + p.B2 * x[5];
    const Vec2 acc = db2_angular_mass_inv(p, r) * Vec2(g[1], g[2]);
    const double gyro = 2.0 * rd * (L - w) / (r * S);
    Vec6 d;
    d[0] = rd;
    d[1] = x[4];
    d[2] = x[5];
    d[3] = r * w * (w - 2.0 * L) / (S * S) - g[0];
    d[4] = gyro - acc[0];
    d[5] = gyro - acc[1];
    return d;
}

double db2_phi_dot(const Db2Params& p, double L, const Vec6& x) {
    return (L - p.B1 * x[4] - p.B2 * x[5]) / p.S(x[0]);
}

double db2_energy(const Db2Params& p, double L, const Vec6& x) {
    const Vec2 td(x[4], x[5]);
    return 0.5 * x[3] * x[3] + 0.5 * td.dot(db2_angular_mass(p, x[0]) * td) +
           db2_amended_potential(p, L, x[0], x[1], x[2]);
}

// ---- Kepler ----

Eigen::Vector2d kepler_rhs(const KeplerParams& p, const Eigen::Vector2d& x) {
    if (!(x[0] > kDynamicsGuard)) throw CollisionError("Kepler radius reached the collision guard");
    return {x[1], kepler_radial_acceleration(p, x[0])};
}

double kepler_energy(const KeplerParams& p, const Eigen::Vector2d& x) {
    return 0.5 * p.M1 * x[1] * x[1] + kepler_amended_potential(p, x[0]).V;
}

// ---- integration ----

namespace {

using State = std::vector<double>;

// rhs(x) -> derivative of the reduced state; phid(x) -> φ̇; energy(x)
template <int N, class Rhs, class PhiDot, class Energy>
Trajectory run(const Eigen::Matrix<double, N, 1>& x0, const IntegrateOptions& o, Rhs rhs, PhiDot phid,
               Energy energy) {
    if (!(o.t_end > 0.0)) throw ValidationError("t_end must be positive");
    if (!(o.tol > 0.0)) throw ValidationError("tol must be positive");
    if (o.samples < 2) throw ValidationError("need at least 2 samples");
    using V = Eigen::Matrix<double, N, 1>;

    auto sys = [&](const State& s, State& ds, double) {
        const V x = Eigen::Map<const V>(s.data());
        const V d = rhs(x);
        for (int i = 0; i < N; ++i) ds[i] = d[i];
        ds[N] = phid(x);
    };

    std::vector<double> times(o.samples);
    for (int i = 0; i < o.samples; ++i) times[i] = o.t_end * i / (o.samples - 1);

    Trajectory tr;
    auto obs = [&](const State& s, double t) {
        const V x = Eigen::Map<const V>(s.data());
        tr.t.push_back(t);
        tr.x.emplace_back(x);
        tr.phi.push_back(s[N]);
        tr.energy.push_back(energy(x));
    };

    State s(N + 1, 0.0);
    for (int i = 0; i < N; ++i) s[i] = x0[i];
    auto stepper = odeint::make_dense_output(o.tol, o.tol, odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_times(stepper, sys, s, times.begin(), times.end(), o.t_end / (o.samples - 1) / 10.0, obs,
                                odeint::max_step_checker(1000000));
    } catch (const odeint::step_adjustment_error& e) {
        std::ostringstream os;
        os << "step size underflow near t=" << (tr.t.empty() ? 0.0 : tr.t.back()) << ": " << e.what();
        throw StepUnderflow(os.str());
    } catch (const odeint::no_progress_error& e) {
        throw StepUnderflow(e.what());
    }
    return tr;
}

}  // namespace

Trajectory integrate(const Db1Params& p, double L, const Vec4& x0, const IntegrateOptions& o) {
    return run<4>(
        x0, o, [&](const Vec4& x) { return db1_rhs(p, L, x); }, [&](const Vec4& x) { return db1_phi_dot(p, L, x); },
        [&](const Vec4& x) { return db1_energy(p, L, x); });
}

Trajectory integrate(const Db2Params& p, double L, const Vec6& x0, const IntegrateOptions& o) {
    return run<6>(
        x0, o, [&](const Vec6& x) { return db2_rhs(p, L, x); }, [&](const Vec6& x) { return db2_phi_dot(p, L, x); },
        [&](const Vec6& x) { return db2_energy(p, L, x); });
}

Trajectory integrate(const KeplerParams& p, const Eigen::Vector2d& x0, const IntegrateOptions& o) {
    p.validate();
    return run<2>(
        x0, o, [&](const Eigen::Vector2d& x) { return kepler_rhs(p, x); },
        [&](const Eigen::Vector2d& x) { return p.L / (p.M1 * x[0] * x[0]); },
        [&](const Eigen::Vector2d& x) { return kepler_energy(p, x); });
}

// ---- linearization ----

Mat4 linearization_from_hessian(const Db1Params& p, double L, double r, const Mat2& H) {
    const double B = p.B, S = r * r + B;
    Mat2 Minv = Mat2::Zero();
    Minv(0, 0) = 1.0;
    Minv(1, 1) = S / (B * r * r);
    Mat4 A = Mat4::Zero();
    A.topRightCorner<2, 2>() = Mat2::Identity();
    A.bottomLeftCorner<2, 2>() = -Minv * H;
    A(2, 3) = -2.0 * B * L * r / (S * S);
    A(3, 2) = 2.0 * L / (r * S);
    return A;
}

Mat6 linearization_from_hessian(const Db2Params& p, double L, double r, const Mat3& H) {
    const double S = p.S(r);
    Mat3 Minv = Mat3::Zero();
    Minv(0, 0) = 1.0;
    Minv.bottomRightCorner<2, 2>() = db2_angular_mass_inv(p, r);
    Mat6 A = Mat6::Zero();
    A.topRightCorner<3, 3>() = Mat3::Identity();
    A.bottomLeftCorner<3, 3>() = -Minv * H;
    A(3, 4) = -2.0 * p.B1 * L * r / (S * S);
    A(3, 5) = -2.0 * p.B2 * L * r / (S * S);
    A(4, 3) = 2.0 * L / (r * S);
    A(5, 3) = 2.0 * L / (r * S);
    return A;
}

Mat4 assemble_linearization(const Db1Params& p, double L, double r, double theta) {
    const auto b = db1_hessian_V(p, L, r, theta, true);
    return linearization_from_hessian(p, L, r, b.hessian);
}

Mat6 assemble_linearization(const Db2Params& p, double L, double r, double theta1, double theta2) {
    const auto b = db2_hessian_V(p, L, r, theta1, theta2);
    if (b.gradient.norm() >= 1e-8) {
        std::ostringstream os;
        os << "not an RE: |grad V| = " << b.gradient.norm();
        throw NotAnEquilibrium(os.str());
    }
    return linearization_from_hessian(p, L, r, b.hessian);
}

}  // namespace gravre
