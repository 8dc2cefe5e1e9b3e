#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>

#include "gravre/db2.hpp"
#include "gravre/errors.hpp"
#include "gravre/parallel.hpp"
#include "gravre/re_finder.hpp"

namespace gravre {

std::string to_string(SymmetricFamily f) {
    switch (f) {
        case SymmetricFamily::C: return "C";
        case SymmetricFamily::P1: return "P1";
        case SymmetricFamily::P2: return "P2";
        case SymmetricFamily::T: return "T";
    }
    return "?";
}

std::pair<double, double> family_angles(SymmetricFamily f) {
    switch (f) {
        case SymmetricFamily::C: return {0.0, 0.0};
        case SymmetricFamily::P1: return {kPi / 2, 0.0};
        case SymmetricFamily::P2: return {0.0, kPi / 2};
        case SymmetricFamily::T: return {kPi / 2, kPi / 2};
    }
    return {0.0, 0.0};
}

namespace {

double mod_pi(double a) {
    double m = std::fmod(a, kPi);
    if (m < 0) m += kPi;
    if (m >= kPi) m -= kPi;
    return m;
}

// distance between a and b modulo π
double dist_mod_pi(double a, double b) {
    const double d = mod_pi(a - b);
    return std::min(d, kPi - d);
}

}  // namespace

SymmetricMatch nearest_symmetric(double theta1, double theta2) {
    SymmetricMatch best{SymmetricFamily::C, std::numeric_limits<double>::infinity()};
    for (auto f : {SymmetricFamily::C, SymmetricFamily::P1, SymmetricFamily::P2, SymmetricFamily::T}) {
        const auto [a, b] = family_angles(f);
        const double d = std::hypot(dist_mod_pi(theta1, a), dist_mod_pi(theta2, b));
        if (d < best.distance) best = {f, d};
    }
    return best;
}

std::pair<double, double> reduce_mod_symmetry(double theta1, double theta2) {
    const double a = mod_pi(theta1), b = mod_pi(theta2);
    const double ma = mod_pi(-a), mb = mod_pi(-b);
    if (ma < a || (ma == a && mb < b)) return {ma, mb};
    return {a, b};
}

namespace {

Vec2 residual(const Db2Params& p, double r, double t1, double t2) {
    const Vec3 g = db2_grad_U(p, r, t1, t2);
    return {g[1], g[2]};
}

struct Polish {
    bool ok = false;
    Vec2 x;
    double res = 0.0;
};

Polish newton_polish(const Db2Params& p, double r, Vec2 x, double scale, double tol) {
    Polish out;
    try {
        Vec2 F = residual(p, r, x[0], x[1]);
        for (int it = 0; it < 100; ++it) {
            if (F.norm() / scale < tol) {
                out.ok = true;
                // a few more steps bring x to round-off before deduplication
                for (int k = 0; k < 4; ++k) {
                    Eigen::FullPivLU<Mat2> lu(db2_angular_hessian(p, r, x[0], x[1]));
                    if (lu.rank() < 2) break;
                    const Vec2 y = x + lu.solve(-F);
                    const Vec2 G = residual(p, r, y[0], y[1]);
                    if (!(G.norm() < F.norm())) break;
                    x = y;
                    F = G;
                }
                break;
            }
            const Mat2 J = db2_angular_hessian(p, r, x[0], x[1]);
            Eigen::FullPivLU<Mat2> lu(J);
            if (lu.rank() < 2) return out;
            Vec2 dx = lu.solve(-F);
            if (!dx.allFinite() || dx.norm() > 1.0) return out;
            double lambda = 1.0;
            bool improved = false;
            for (int k = 0; k < 12; ++k) {
                const Vec2 y = x + lambda * dx;
                const Vec2 G = residual(p, r, y[0], y[1]);
                if (G.norm() < F.norm() || G.norm() / scale < tol) {
                    x = y;
                    F = G;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!improved) {
                // stalled at round-off level
                out.ok = F.norm() / scale < 10 * tol;
                break;
            }
        }
        out.x = x;
        out.res = F.norm() / scale;
    } catch (const CollisionError&) {
        out.ok = false;
    }
    return out;
}

enum class Fallback { Root, NearMiss, Failed };

// Levenberg-Marquardt on |F|², used when Newton fails in a flagged cell. Near r = 0 the
// zero curves of F1 and F2 nearly coincide, so sign changes appear in cells that hold no
// root; descent then either reaches a genuine root or settles on a positive minimum.
Fallback lm_fallback(const Db2Params& p, double r, Vec2& x, double scale, double tol) {
    try {
        Vec2 F = residual(p, r, x[0], x[1]);
        double mu = 1e-3;
        for (int it = 0; it < 1000; ++it) {
            if (F.norm() / scale < tol) return Fallback::Root;
            const Mat2 J = db2_angular_hessian(p, r, x[0], x[1]);
            const Vec2 g = J.transpose() * F;
            const bool stationary = g.norm() <= 1e-12 * J.norm() * F.norm();
            if (stationary || mu > 1e10) return F.norm() / scale > 1e3 * tol ? Fallback::NearMiss : Fallback::Failed;
            const Vec2 y = x - (J.transpose() * J + mu * Mat2::Identity()).ldlt().solve(g);
            const Vec2 G = residual(p, r, y[0], y[1]);
            if (G.norm() < F.norm()) {
                x = y;
                F = G;
                mu = std::max(mu / 10, 1e-15);
            } else {
                mu *= 10;
            }
        }
    } catch (const CollisionError&) {
    }
    return Fallback::Failed;
}

struct Cell {
    double t1, t2, w;  // lower-left corner and width
};

bool flagged(const double* f1, const double* f2) {
    auto straddles = [](const double* f) {
        double lo = f[0], hi = f[0];
        for (int i = 1; i < 4; ++i) {
            if (!std::isfinite(f[i])) return false;
            lo = std::min(lo, f[i]);
            hi = std::max(hi, f[i]);
        }
        return std::isfinite(f[0]) && lo <= 0.0 && hi >= 0.0;
    };
    return straddles(f1) && straddles(f2);
}

}  // namespace

ResidualGrid angular_residual_grid(const Db2Params& p, double r, int n) {
    ResidualGrid g;
    g.n = n;
    g.f1.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::quiet_NaN());
    g.f2 = g.f1;
    const double h = 2.0 * kPi / n;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        for (int i = 0; i < n; ++i) {
            try {
                const Vec2 F = residual(p, r, i * h, static_cast<double>(j) * h);
                g.f1[j * n + i] = F[0];
                g.f2[j * n + i] = F[1];
            } catch (const CollisionError&) {
            }
        }
    });
    return g;
}

std::vector<TorusRe> find_re_torus(const Db2Params& p, double r, const TorusOptions& o) {
    if (!(r > 0.0)) throw ValidationError("r must be positive");
    if (o.n < 8) throw ValidationError("torus grid needs at least 8 cells per side");
    const int n = o.n;
    const ResidualGrid g = angular_residual_grid(p, r, n);
    std::vector<double> mags;
    for (std::size_t k = 0; k < g.f1.size(); ++k) {
        if (std::isfinite(g.f1[k])) mags.push_back(std::hypot(g.f1[k], g.f2[k]));
    }
    if (mags.empty()) throw NumericalError("residual grid is entirely singular");
    // median magnitude; near-collision cells would inflate a max
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    double scale = mags[mags.size() / 2];
    if (scale == 0.0) scale = 1.0;
    const double h = 2.0 * kPi / n;

    auto at = [&](const std::vector<double>& f, int i, int j) {
        return f[static_cast<std::size_t>((j % n + n) % n) * n + (i % n + n) % n];
    };

    std::vector<Cell> cells;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double f1[4] = {at(g.f1, i, j), at(g.f1, i + 1, j), at(g.f1, i, j + 1), at(g.f1, i + 1, j + 1)};
            const double f2[4] = {at(g.f2, i, j), at(g.f2, i + 1, j), at(g.f2, i, j + 1), at(g.f2, i + 1, j + 1)};
            if (flagged(f1, f2)) cells.push_back({i * h, j * h, h});
        }
    }

    std::mutex mu;
    std::vector<Vec2> found;
    std::vector<double> found_res;
    std::vector<Cell> failures;

    auto add = [&](const Polish& pl) {
        std::lock_guard<std::mutex> lock(mu);
        found.push_back(pl.x);
        found_res.push_back(pl.res);
    };

    // Newton from the cell center; on failure subdivide.
    std::function<void(const Cell&, int)> process = [&](const Cell& c, int depth) {
        const Polish pl = newton_polish(p, r, Vec2(c.t1 + c.w / 2, c.t2 + c.w / 2), scale, o.tol);
        if (pl.ok) {
            add(pl);
            return;
        }
        if (depth >= o.max_refine) {
            // singular cells (sign change through a collision pole) are not roots
            double big = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    try {
                        big = std::max(big, residual(p, r, c.t1 + a * c.w, c.t2 + b * c.w).norm());
                    } catch (const CollisionError&) {
                        big = std::numeric_limits<double>::infinity();
                    }
                }
            }
            if (big > 100.0 * scale) return;
            Vec2 x(c.t1 + c.w / 2, c.t2 + c.w / 2);
            const Fallback fb = lm_fallback(p, r, x, scale, o.tol);
            if (fb == Fallback::NearMiss) return;
            if (fb == Fallback::Root) {
                const Polish q = newton_polish(p, r, x, scale, o.tol);
                if (q.ok) {
                    add(q);
                    return;
                }
            }
            std::lock_guard<std::mutex> lock(mu);
            failures.push_back(c);
            return;
        }
        const double w = c.w / 2;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const Cell s{c.t1 + a * w, c.t2 + b * w, w};
                double f1[4], f2[4];
                bool singular = false;
                for (int k = 0; k < 4; ++k) {
                    try {
                        const Vec2 F = residual(p, r, s.t1 + (k & 1) * w, s.t2 + (k >> 1) * w);
                        f1[k] = F[0];
                        f2[k] = F[1];
                    } catch (const CollisionError&) {
                        singular = true;
                    }
                }
                if (!singular && flagged(f1, f2)) process(s, depth + 1);
            }
        }
    };

    parallel_for(cells.size(), [&](std::size_t k) { process(cells[k], 0); }, o.jobs);

    // a flagged cell whose root was already found through a neighbor is not a failure
    for (const Cell& c : failures) {
        const double cx = c.t1 + c.w / 2, cy = c.t2 + c.w / 2;
        const bool covered = std::any_of(found.begin(), found.end(), [&](const Vec2& x) {
            return torus_distance(x[0], x[1], cx, cy) < 2.0 * h;
        });
        if (!covered) {
            std::ostringstream os;
            os << "Newton polish diverged in flagged cell at (" << c.t1 << ", " << c.t2 << "), width " << c.w;
            throw GridTooCoarse(os.str());
        }
    }

    // dedupe
    std::vector<std::size_t> order(found.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return found_res[a] < found_res[b];
    });
    std::vector<TorusRe> out;
    for (std::size_t k : order) {
        double t1 = wrap_2pi(found[k][0]), t2 = wrap_2pi(found[k][1]);
        if (o.mod_symmetry) std::tie(t1, t2) = reduce_mod_symmetry(t1, t2);
        bool dup = false;
        for (const auto& e : out) {
            const double d = o.mod_symmetry ? std::hypot(dist_mod_pi(t1, e.theta1), dist_mod_pi(t2, e.theta2))
                                            : torus_distance(t1, t2, e.theta1, e.theta2);
            if (d < o.dedupe) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        TorusRe re;
        const auto m = nearest_symmetric(t1, t2);
        // snap exact symmetric points so output is reproducible
        if (m.distance < 1e-8) {
            const auto [a, b] = family_angles(m.family);
            t1 = wrap_2pi(a + kPi * std::round((t1 - a) / kPi));
            t2 = wrap_2pi(b + kPi * std::round((t2 - b) / kPi));
            re.symmetric = true;
        }
        re.theta1 = t1;
        re.theta2 = t2;
        re.residual = found_res[k];
        re.nearest = m.family;
        out.push_back(re);
    }
    std::sort(out.begin(), out.end(), [](const TorusRe& a, const TorusRe& b) {
        return a.theta1 != b.theta1 ? a.theta1 < b.theta1 : a.theta2 < b.theta2;
    });
    return out;
}

}  // namespace gravre
