#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <Eigen/Dense>

#include "gravre/branches.hpp"
#include "gravre/db1.hpp"
#include "gravre/db2.hpp"
#include "gravre/errors.hpp"
#include "gravre/pitchfork.hpp"
#include "gravre/re_finder.hpp"
#include "gravre/stability.hpp"

namespace gravre::testing {

using Big = boost::multiprecision::cpp_dec_float_50;

/// Coefficients a[0..n] of det(zI − A) = Σ a[k] z^(n−k), by Faddeev–LeVerrier in 50 digits.
inline std::vector<double> charpoly(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    using BM = Eigen::Matrix<Big, Eigen::Dynamic, Eigen::Dynamic>;
    const BM a = A.cast<Big>();
    BM M = BM::Zero(n, n);
    std::vector<Big> c(n + 1);
    c[0] = 1;
    for (int k = 1; k <= n; ++k) {
        M = a * M;
        for (int i = 0; i < n; ++i) M(i, i) += c[k - 1];
        const BM AM = a * M;
        Big tr = 0;
        for (int i = 0; i < n; ++i) tr += AM(i, i);
        c[k] = -tr / k;
    }
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = static_cast<double>(c[k]);
    return out;
}

template <int N, class F>
/// Central-difference gradient with one Richardson step, h = 1e-3·max(1, |x_j|).
inline Eigen::Matrix<double, N, 1> richardson_gradient(const F& f, const Eigen::Matrix<double, N, 1>& x) {
    Eigen::Matrix<double, N, 1> g;
    for (int j = 0; j < N; ++j) {
        auto central = [&](double h) {
            auto xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            return (f(xp) - f(xm)) / (2 * h);
        };
        const double h = 1e-3 * std::max(1.0, std::abs(x[j]));
        g[j] = (4 * central(h / 2) - central(h)) / 3;
    }
    return g;
}

struct Db1Re {
    Db1Params p;
    double L, r, theta;
};

struct Db2Re {
    Db2Params p;
    double L, r, theta1, theta2;
};

/// Random Db1 RE drawn from the colinear (both subcases) and isosceles families.
inline std::vector<Db1Re> random_db1_re(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.02, 3.0), U(0.0, 1.0);
    std::vector<Db1Re> out;
    while (static_cast<int>(out.size()) < count) {
        const auto p = Db1Params::create(X(rng), X(rng));
        const int fam = static_cast<int>(3 * U(rng));
        try {
            double r = 0, theta = 0, L2 = -1;
            if (fam == 0) {
                r = p.x2 + R(rng);
                L2 = l2_colinear_db1(p, r);
            } else if (fam == 1) {
                r = p.x2 * U(rng);
                L2 = l2_colinear_db1(p, r);
            } else {
                r = std::abs(p.x2 - p.x1) / 2 + R(rng);
                const auto iso = l2_isosceles_db1(p, r);
                L2 = iso.L2;
                theta = iso.theta;
            }
            if (L2 > 1e-6 && std::isfinite(L2)) out.push_back({p, std::sqrt(L2), r, theta});
        } catch (const Error&) {
        }
    }
    return out;
}

/// Asymmetric RE of the equal-mass ℓ1 = 3/4 system at radii between the branch points; the angles do
/// not depend on the body masses, so one torus scan per radius serves every M1.
inline const std::vector<std::array<double, 3>>& asymmetric_angles() {
    static const std::vector<std::array<double, 3>> cache = [] {
        std::vector<std::array<double, 3>> v;
        const auto p = Db2Params::equal_mass(0.75);
        for (double r : {0.362, 0.366, 0.37, 0.375, 0.38, 0.384, 0.388}) {
            TorusOptions o;
            o.n = 128;
            for (const auto& re : find_re_torus(p, r, o))
                if (!re.symmetric) v.push_back({r, re.theta1, re.theta2});
        }
        return v;
    }();
    return cache;
}

/// Random Db2 RE from the colinear, perpendicular isosceles, trapezoid and asymmetric families.
inline std::vector<Db2Re> random_db2_re(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> X(0.05, 0.95), R(0.02, 3.0), U(0.0, 1.0);
    const auto& asym = asymmetric_angles();
    std::vector<Db2Re> out;
    while (static_cast<int>(out.size()) < count) {
        const int fam = static_cast<int>(4 * U(rng));
        try {
            Db2Params p;
            double r = 0, t1 = 0, t2 = 0;
            if (fam == 0) {
                p = Db2Params::create(X(rng), X(rng), X(rng), X(rng));
                r = p.x11 * p.ell1 + p.x22 * p.ell2 + R(rng);
            } else if (fam == 1) {
                p = Db2Params::create(0.5, X(rng), X(rng), X(rng));
                r = p.ell2 * p.x22 + R(rng);
                t1 = kPi / 2;
            } else if (fam == 2) {
                p = Db2Params::equal_mass(X(rng), X(rng));
                r = R(rng);
                t1 = t2 = kPi / 2;
            } else {
                p = Db2Params::equal_mass(0.75, X(rng));
                const auto& a = asym[static_cast<std::size_t>(U(rng) * asym.size()) % asym.size()];
                r = a[0];
                t1 = a[1];
                t2 = a[2];
            }
            const double L2 = db2_L2_required(p, r, t1, t2);
            if (L2 > 1e-6 && std::isfinite(L2)) out.push_back({p, std::sqrt(L2), r, t1, t2});
        } catch (const Error&) {
        }
    }
    return out;
}

/// −1, 0, +1 with the given absolute zero band.
inline int sgn(double v, double zero = 0.0) { return v > zero ? 1 : (v < -zero ? -1 : 0); }

/// Sign multiset of the 3D Hessian eigenvalues at an RE, sorted ascending.
inline std::array<int, 3> eigensigns(const Db2Params& p, double r, double t1, double t2) {
    const double L = std::sqrt(db2_L2_required(p, r, t1, t2));
    const auto rep = energetic_classify(db2_hessian_V(p, L, r, t1, t2).hessian);
    std::array<int, 3> s{rep.signs[0], rep.signs[1], rep.signs[2]};
    std::sort(s.begin(), s.end());
    return s;
}

/// Sign of the eigenvalue whose eigenvector is most aligned with r.
inline int radial_sign(const Db2Params& p, double r, double t1, double t2) {
    const double L = std::sqrt(db2_L2_required(p, r, t1, t2));
    const auto rep = energetic_classify(db2_hessian_V(p, L, r, t1, t2).hessian);
    return rep.signs[rep.radial_index];
}

struct EigensignCell {
    std::string table, label;
    std::array<int, 3> expected, computed;
    bool ok() const { return expected == computed; }
};

/// The three ℓ1 = 3/4 equal-mass eigensign tables at representative radii, M1 = 1/2.
inline std::vector<EigensignCell> eigensign_tables(double eps = 1e-3) {
    using SF = SymmetricFamily;
    const auto p = Db2Params::equal_mass(0.75, 0.5);
    std::vector<EigensignCell> out;
    auto sorted = [](std::array<int, 3> a) {
        std::sort(a.begin(), a.end());
        return a;
    };
    auto add = [&](const std::string& table, const std::string& label, std::array<int, 3> want, double r, double t1,
                   double t2) { out.push_back({table, label, sorted(want), eigensigns(p, r, t1, t2)}); };

    // trapezoid family; r_t is where its radial eigenvalue (the r-r entry, the Hessian being block diagonal) vanishes
    const double h = kPi / 2;
    const double r2 = find_branch_point(p, SF::T, 0.35, 0.37);
    auto hrr = [&](double r) {
        return db2_hessian_V(p, std::sqrt(l2_trapezoid_db2(p, r)), r, h, h).hessian(0, 0);
    };
    double a = 0.4, b = 1.5;
    for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        (hrr(a) < 0) == (hrr(m) < 0) ? a = m : b = m;
    }
    const double rt = 0.5 * (a + b);
    add("trapezoid", "0+", {-1, -1, 1}, 0.05, h, h);
    add("trapezoid", "r2-", {-1, -1, 1}, r2 - eps, h, h);
    add("trapezoid", "r2+", {-1, -1, -1}, r2 + eps, h, h);
    add("trapezoid", "rt-", {-1, -1, -1}, rt - eps, h, h);
    add("trapezoid", "rt+", {1, -1, -1}, rt + eps, h, h);

    auto branch = [&](SF f, double lo, double hi) {
        const auto nf = normal_form(p, f, find_branch_point(p, f, lo, hi));
        return seed_near_branch_point(p, nf, eps);
    };
    const auto tp2 = branch(SF::T, 0.35, 0.37);
    const auto tp7 = branch(SF::P1, 0.385, 0.395);
    add("trapezoid-perpendicular", "r2+", {-1, -1, 1}, tp2.r, tp2.theta1, tp2.theta2);
    add("trapezoid-perpendicular", "r7-", {-1, -1, 1}, tp7.r, tp7.theta1, tp7.theta2);
    const auto cp4 = branch(SF::C, 0.365, 0.375);
    const auto cp6 = branch(SF::P2, 0.383, 0.388);
    add("colinear-perpendicular", "r4+", {-1, 1, -1}, cp4.r, cp4.theta1, cp4.theta2);
    add("colinear-perpendicular", "r6-", {-1, 1, -1}, cp6.r, cp6.theta1, cp6.theta2);
    return out;
}

/// Radial-aligned eigenvalue sign on B_TP just below r7 at M1 = 0.1, 0.3, 0.9; expected (−, +, −).
inline std::array<int, 3> r7_radial_pattern(double eps = 1e-3) {
    std::array<int, 3> s{};
    int k = 0;
    for (double M1 : {0.1, 0.3, 0.9}) {
        const auto p = Db2Params::equal_mass(0.75, M1);
        const auto nf = normal_form(p, SymmetricFamily::P1, find_branch_point(p, SymmetricFamily::P1, 0.385, 0.395));
        const auto c = seed_near_branch_point(p, nf, eps);
        s[k++] = radial_sign(p, c.r, c.theta1, c.theta2);
    }
    return s;
}

}  // namespace gravre::testing
