#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gravre/branches.hpp"
#include "gravre/db2.hpp"
#include "gravre/dynamics.hpp"
#include "gravre/errors.hpp"
#include "gravre/kepler.hpp"
#include "gravre/perp_bisector.hpp"
#include "gravre/pitchfork.hpp"
#include "gravre/re_finder.hpp"
#include "gravre/stability.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using namespace gravre;
using gravre::cli::Csv;
using gravre::cli::json;
using gravre::cli::Svg;

namespace {

struct Common {
    std::string out = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
    int jobs = 0;
    unsigned seed = 0;

    bool want(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }
    fs::path path(const std::string& name) const { return fs::path(out) / name; }
};

json header(const Common& c, const std::string& command) {
    json j;
    j["schema"] = cli::kSchema;
    j["command"] = command;
    j["seed"] = c.seed;
    return j;
}

// finite-value range with a little padding
std::pair<double, double> padded_range(std::vector<double> v, double lo_q = 0.0, double hi_q = 1.0) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
    if (v.empty()) return {0.0, 1.0};
    std::sort(v.begin(), v.end());
    const double lo = v[static_cast<std::size_t>(lo_q * (v.size() - 1))];
    const double hi = v[static_cast<std::size_t>(hi_q * (v.size() - 1))];
    const double pad = 0.05 * std::max(hi - lo, 1e-12);
    return {lo - pad, hi + pad};
}

// ---------------------------------------------------------------- kepler

struct KeplerOpts {
    double L = 1, M1 = 1, M2 = 1, G = 1;
    bool phase = false;
    double r0 = 1.05, t_end = 20.0, tol = 1e-10;
    int samples = 2001;
};

int cmd_kepler(const Common& c, const KeplerOpts& o) {
    KeplerParams p{o.M1, o.M2, o.G, o.L};
    p.validate();
    const auto re = kepler_re(p);
    const auto pot = kepler_amended_potential(p, re.r);
    json j = header(c, "kepler");
    j["r"] = re.r;
    j["phidot"] = re.phi_dot;
    j["V"] = pot.V;
    j["d2V"] = pot.d2V;
    j["stable"] = pot.d2V > 0.0;
    if (o.phase) {
        if (!(o.r0 > 0.0)) throw ValidationError("r0 must be positive");
        IntegrateOptions io{o.t_end, o.tol, o.samples};
        const auto tr = integrate(p, Eigen::Vector2d(o.r0, 0.0), io);
        Csv csv({"t", "r", "rdot", "phi", "energy"});
        std::vector<std::pair<double, double>> orbit;
        double rmin = tr.x[0][0], rmax = rmin;
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
            csv.row({tr.t[k], tr.x[k][0], tr.x[k][1], tr.phi[k], tr.energy[k]});
            orbit.push_back({tr.x[k][0], tr.x[k][1]});
            rmin = std::min(rmin, tr.x[k][0]);
            rmax = std::max(rmax, tr.x[k][0]);
        }
        j["phase"] = {{"r0", o.r0}, {"r_min", rmin}, {"r_max", rmax}, {"csv", "kepler_phase.csv"}};
        if (c.want("csv") || c.want("svg")) cli::write_text(c.path("kepler_phase.csv"), csv.str());
        if (c.want("svg")) {
            std::vector<double> rs, vs;
            for (const auto& [a, b] : orbit) {
                rs.push_back(a);
                vs.push_back(b);
            }
            const auto [x0, x1] = padded_range(rs);
            const auto [y0, y1] = padded_range(vs);
            Svg svg(x0, x1, y0, y1, "r", "dr/dt");
            svg.title("Kepler reduced phase portrait");
            svg.polyline(orbit, "#1f77b4");
            svg.points({{re.r, 0.0}}, "#d62728", 3.0);
            cli::write_text(c.path("kepler_phase.svg"), svg.str());
        }
    }
    if (c.want("json")) cli::write_json(c.path("kepler.json"), j);
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- branch

struct BranchOpts {
    std::string model = "db1", family = "colinear";
    double x1 = 0.5, M1 = 0.5, x11 = 0.5, x21 = 0.5, ell1 = 0.5;
    int n = 2000;
    double lo = NAN, hi = NAN;
    bool compactify = false;
    std::vector<double> L2;
};

json branch_json(const ReBranch& b) {
    json j;
    j["family"] = to_string(b.family);
    j["parameter"] = b.parameter;
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["points"] = b.points.size();
    json ex = json::array();
    for (const auto& e : b.extrema)
        ex.push_back({{"param", e.point.param}, {"r", e.point.r}, {"theta1", e.point.theta1},
                      {"L2", e.point.L2}, {"L", e.point.L2 >= 0 ? std::sqrt(e.point.L2) : NAN},
                      {"kind", e.is_max ? "max" : "min"}});
    j["extrema"] = ex;
    json seg = json::array();
    for (const auto& [a, z] : b.segments) seg.push_back({b.points[a].param, b.points[z].param});
    j["segments"] = seg;
    return j;
}

int cmd_branch(const Common& c, const BranchOpts& o) {
    std::vector<ReBranch> branches;
    std::vector<std::pair<double, std::string>> guides;  // r positions
    json j = header(c, "branch");
    j["model"] = o.model;
    j["family"] = o.family;
    const bool ranged = std::isfinite(o.lo) && std::isfinite(o.hi);
    SampleOptions so;
    so.n = o.n;
    so.compactify = o.compactify || !ranged;
    if (ranged) {
        if (!(o.hi > o.lo)) throw ValidationError("--hi must exceed --lo");
        so.lo = o.lo;
        so.hi = o.hi;
        so.compactify = o.compactify;
    }
    if (o.model == "db1") {
        const Db1Params p = Db1Params::create(o.x1, o.M1);
        j["params"] = {{"x1", p.x1}, {"x2", p.x2}, {"M1", p.M1}, {"M2", p.M2}, {"B", p.B}};
        if (o.family == "colinear" || o.family == "colinear-nonoverlap")
            branches.push_back(sample_db1_colinear_nonoverlap(p, so));
        if (o.family == "colinear" || o.family == "colinear-overlap")
            branches.push_back(sample_db1_colinear_overlap(p, so));
        if (o.family == "isosceles") {
            branches.push_back(sample_db1_isosceles(p, so));
            const auto lm = isosceles_landmarks(p);
            j["landmarks"] = {{"r_min", lm.r_min}, {"L_rmin", lm.L_rmin}, {"has_interior_min", lm.has_interior_min},
                              {"r_b", lm.r_b}, {"L_rb", lm.L_rb}, {"L0", lm.L0}};
            guides.push_back({lm.r_min, "r_min"});
            if (lm.has_interior_min) guides.push_back({lm.r_b, "r_b"});
        }
        if (o.family.rfind("colinear", 0) == 0) {
            guides.push_back({p.x2, "x2"});
            guides.push_back({std::abs(p.x2 - p.x1) / 2.0, "(x2-x1)/2"});
        }
    } else if (o.model == "db2") {
        const Db2Params p = Db2Params::create(o.x11, o.x21, o.ell1, o.M1);
        j["params"] = {{"x11", p.x11}, {"x21", p.x21}, {"ell1", p.ell1}, {"ell2", p.ell2}, {"M1", p.M1},
                       {"M2", p.M2}, {"B1", p.B1}, {"B2", p.B2}};
        if (o.family == "colinear") {
            branches.push_back(sample_db2_colinear(p, so));
            int k = 1;
            for (double r : db2_colinear_collision_radii(p))
                if (r > 0) guides.push_back({r, "r" + std::to_string(k++)});
        } else if (o.family == "perp-isosceles") {
            branches.push_back(sample_db2_perp_isosceles(p, so));
            guides.push_back({p.ell2 * p.x22, "ell2*x22"});
        } else if (o.family == "trapezoid") {
            if (!ranged) {
                so.compactify = false;
                so.lo = 1e-3;
                so.hi = 2.0;
            }
            branches.push_back(sample_db2_trapezoid(p, so));
        } else if (o.family == "rhombus") {
            const auto rh = rhombus_radius(p);
            j["rhombus"] = {{"physical", rh.physical}, {"r", rh.r}};
            std::cout << j.dump(2) << '\n';
            if (c.want("json")) cli::write_json(c.path("branch_db2_rhombus.json"), j);
            return 0;
        }
    } else {
        throw ValidationError("--model must be db1 or db2");
    }
    if (branches.empty()) throw ValidationError("unknown family '" + o.family + "' for model " + o.model);

    json jb = json::array();
    Csv csv({"branch", "param", "r", "theta1", "theta2", "L2", "segment"});
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
        const auto& b = branches[bi];
        json e = branch_json(b);
        if (!o.L2.empty()) {
            json counts = json::array();
            for (double L2 : o.L2) {
                const auto sol = count_re_at_L2(b, L2);
                json sj = json::array();
                for (const auto& s : sol.solutions)
                    sj.push_back({{"r", s.r}, {"theta1", s.theta1}, {"param", s.param},
                                  {"multiplicity", s.multiplicity}});
                counts.push_back({{"L2", L2}, {"count", sol.count()}, {"solutions", sj}});
            }
            e["counts"] = counts;
        }
        jb.push_back(e);
        for (std::size_t s = 0; s < b.segments.size(); ++s) {
            const auto [a, z] = b.segments[s];
            for (std::size_t k = (s == 0 ? a : a + 1); k <= z; ++k) {
                const auto& q = b.points[k];
                csv.row_text({to_string(b.family), cli::fmt_num(q.param), cli::fmt_num(q.r), cli::fmt_num(q.theta1),
                              cli::fmt_num(q.theta2), cli::fmt_num(q.L2), std::to_string(s)});
            }
        }
    }
    j["branches"] = jb;
    json jg = json::array();
    for (const auto& [r, label] : guides) jg.push_back({{"r", r}, {"label", label}});
    j["guides"] = jg;

    const std::string stem = "branch_" + o.model + "_" + o.family;
    if (c.want("csv") || c.want("svg")) cli::write_text(c.path(stem + ".csv"), csv.str());
    if (c.want("json") || c.want("svg")) cli::write_json(c.path(stem + ".json"), j);
    if (c.want("svg")) {
        // horizontal axis: r, or z = 2R/(1+R) when compactified
        auto hx = [&](const ReBranch& b, const BranchPoint& q) {
            return so.compactify ? 2.0 * q.param / (1.0 + q.param) : q.r;
        };
        std::vector<double> xs, ys;
        for (const auto& b : branches)
            for (const auto& q : b.points) {
                xs.push_back(hx(b, q));
                ys.push_back(q.L2);
            }
        const auto [x0, x1] = padded_range(xs);
        auto [y0, y1] = padded_range(ys, 0.0, 0.9);
        y0 = std::min(y0, 0.0);
        Svg svg(x0, x1, y0, y1, so.compactify ? "z (R = z/(2-z))" : "r", "L^2");
        svg.title(o.model + " " + o.family);
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
        for (std::size_t bi = 0; bi < branches.size(); ++bi) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& q : branches[bi].points) pts.push_back({hx(branches[bi], q), q.L2});
            svg.polyline(pts, colors[bi % 3]);
            std::vector<std::pair<double, double>> ex;
            for (const auto& e : branches[bi].extrema) ex.push_back({hx(branches[bi], e.point), e.point.L2});
            svg.points(ex, "#000000", 3.5);
        }
        svg.hline(0.0, "#888888", false);
        if (!so.compactify)
            for (const auto& [r, label] : guides) svg.vline(r, "#444444", true, label);
        cli::write_text(c.path(stem + ".svg"), svg.str());
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- map

struct MapOpts {
    std::string family = "db1-isosceles", x_axis = "x1";
    std::vector<double> x_range{0.01, 0.99}, r_range{0.01, 2.0};
    int nx = 80, nr = 80;
    double x1 = 0.5, M1 = 0.5, x21 = 0.5, ell1 = 0.5;
};

MapFamily parse_map_family(const std::string& s) {
    if (s == "db1-colinear-nonoverlap") return MapFamily::Db1ColinearNonOverlap;
    if (s == "db1-colinear-overlap") return MapFamily::Db1ColinearOverlap;
    if (s == "db1-isosceles") return MapFamily::Db1Isosceles;
    if (s == "db2-perp-isosceles") return MapFamily::Db2PerpIsosceles;
    if (s == "db2-trapezoid") return MapFamily::Db2Trapezoid;
    throw ValidationError("unknown map family '" + s + "'");
}

int cmd_map(const Common& c, const MapOpts& o) {
    if (o.x_range.size() != 2 || o.r_range.size() != 2) throw ValidationError("ranges take two values: lo,hi");
    PlaneSpec ps;
    ps.family = parse_map_family(o.family);
    ps.x_axis = o.x_axis;
    ps.x_lo = o.x_range[0];
    ps.x_hi = o.x_range[1];
    ps.r_lo = o.r_range[0];
    ps.r_hi = o.r_range[1];
    ps.nx = o.nx;
    ps.nr = o.nr;
    ps.x1 = o.x1;
    ps.M1 = o.M1;
    ps.x21 = o.x21;
    ps.ell1 = o.ell1;
    ps.jobs = c.jobs;
    const StabilityMap m = stability_map(ps);

    auto status = [](CellStatus s) {
        return s == CellStatus::Ok ? "ok" : (s == CellStatus::Nonphysical ? "nonphysical" : "invalid");
    };
    Csv csv({o.x_axis, "r", "status", "L2", "energetic", "linear", "c_a", "c_b", "c_c", "c_d"});
    int n_energetic = 0, n_linear = 0;
    for (const auto& cell : m.cells) {
        std::vector<std::string> row{cli::fmt_num(cell.x), cli::fmt_num(cell.r), status(cell.status),
                                     cli::fmt_num(cell.L2)};
        const bool ok = cell.status == CellStatus::Ok;
        row.push_back(ok ? to_string(cell.energetic) : "");
        row.push_back(ok ? to_string(cell.linear) : "");
        for (std::size_t k = 0; k < 4; ++k) row.push_back(k < cell.coeffs.size() ? cli::fmt_num(cell.coeffs[k]) : "");
        csv.row_text(row);
        n_energetic += ok && cell.energetic == EnergeticVerdict::StrictMinimum;
        n_linear += ok && cell.linear == LinearVerdict::Stable;
    }
    json j = header(c, "map");
    j["family"] = o.family;
    j["x_axis"] = o.x_axis;
    j["x_range"] = o.x_range;
    j["r_range"] = o.r_range;
    j["resolution"] = {o.nx, o.nr};
    j["fixed"] = {{"x1", o.x1}, {"M1", o.M1}, {"x21", o.x21}, {"ell1", o.ell1}};
    j["cells_energetic_stable"] = n_energetic;
    j["cells_linear_stable"] = n_linear;
    json ov = json::array();
    for (const auto& pl : m.overlays) {
        json pts = json::array();
        for (const auto& [x, r] : pl.pts) pts.push_back({x, r});
        ov.push_back({{"label", pl.label}, {"points", pts}});
    }
    j["overlays"] = ov;

    const std::string stem = "map_" + o.family + "_" + o.x_axis;
    if (c.want("csv") || c.want("svg")) cli::write_text(c.path(stem + ".csv"), csv.str());
    if (c.want("json") || c.want("svg")) cli::write_json(c.path(stem + ".json"), j);
    if (c.want("svg")) {
        Svg svg(ps.x_lo, ps.x_hi, ps.r_lo, ps.r_hi, o.x_axis, "r");
        svg.title(o.family + " stability (green: energetic, hatched: linear)");
        const double dx = (ps.x_hi - ps.x_lo) / ps.nx, dr = (ps.r_hi - ps.r_lo) / ps.nr;
        for (const auto& cell : m.cells) {
            const double x0 = cell.x - dx / 2, y0 = cell.r - dr / 2;
            if (cell.status == CellStatus::Nonphysical) svg.rect(x0, y0, x0 + dx, y0 + dr, "#bbbbbb", 0.6);
            if (cell.status != CellStatus::Ok) continue;
            if (cell.energetic == EnergeticVerdict::StrictMinimum) svg.rect(x0, y0, x0 + dx, y0 + dr, "#2ca02c", 0.5);
            if (cell.linear == LinearVerdict::Stable) svg.hatch(x0, y0, x0 + dx, y0 + dr, "#1f77b4");
        }
        for (const auto& pl : m.overlays) {
            if (pl.label == "dL2dr=0")
                svg.points(pl.pts, "#000000", 1.2);
            else
                svg.polyline(pl.pts, "#d62728", 1.5, true);
        }
        cli::write_text(c.path(stem + ".svg"), svg.str());
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- torus

struct TorusOpts {
    double ell1 = 0.75, M1 = 0.5, r = 1.0;
    int n = 512, svg_n = 128;
    bool mod_symmetry = false;
};

int cmd_torus(const Common& c, const TorusOpts& o) {
    const Db2Params p = Db2Params::equal_mass(o.ell1, o.M1);
    TorusOptions to;
    to.n = o.n;
    to.mod_symmetry = o.mod_symmetry;
    to.jobs = c.jobs;
    const auto res = find_re_torus(p, o.r, to);
    json j = header(c, "torus");
    j["params"] = {{"ell1", p.ell1}, {"M1", p.M1}, {"r", o.r}, {"grid", o.n}};
    json list = json::array();
    Csv csv({"theta1", "theta2", "symmetric", "family", "trace", "det", "kind", "residual"});
    for (const auto& re : res) {
        const auto cl = classify_2d(db2_angular_hessian(p, o.r, re.theta1, re.theta2));
        const std::string fam = re.symmetric ? to_string(re.nearest) : "asym";
        list.push_back({{"theta1", re.theta1}, {"theta2", re.theta2}, {"symmetric", re.symmetric},
                        {"family", fam}, {"trace", cl.trace}, {"det", cl.det}, {"kind", to_string(cl.kind)},
                        {"residual", re.residual}});
        csv.row_text({cli::fmt_num(re.theta1), cli::fmt_num(re.theta2), re.symmetric ? "1" : "0", fam,
                      cli::fmt_num(cl.trace), cli::fmt_num(cl.det), to_string(cl.kind), cli::fmt_num(re.residual)});
    }
    j["count"] = res.size();
    j["re"] = list;

    std::ostringstream rs;
    rs << o.r;
    const std::string stem = "torus_ell" + std::to_string(o.ell1).substr(0, 5) + "_r" + rs.str();
    if (c.want("csv") || c.want("svg")) cli::write_text(c.path(stem + ".csv"), csv.str());
    if (c.want("json") || c.want("svg")) cli::write_json(c.path(stem + ".json"), j);
    if (c.want("svg")) {
        const double top = o.mod_symmetry ? kPi : 2 * kPi;
        Svg svg(0, top, 0, top, "theta1", "theta2");
        svg.title("angular requirements, r = " + rs.str());
        const int n = o.svg_n;
        const ResidualGrid g = angular_residual_grid(p, o.r, n);
        const double h = 2 * kPi / n;
        std::vector<std::pair<double, double>> z1, z2;
        Csv grid({"theta1", "theta2", "f1", "f2", "trace", "det"});
        for (int jj = 0; jj < n; ++jj) {
            for (int ii = 0; ii < n; ++ii) {
                const double a = g.f1[jj * n + ii], b = g.f2[jj * n + ii];
                const double ar = g.f1[jj * n + (ii + 1) % n], bu = g.f2[((jj + 1) % n) * n + ii];
                const double au = g.f1[((jj + 1) % n) * n + ii], br = g.f2[jj * n + (ii + 1) % n];
                if (a * ar <= 0 || a * au <= 0) z1.push_back({(ii + 0.5) * h, (jj + 0.5) * h});
                if (b * br <= 0 || b * bu <= 0) z2.push_back({(ii + 0.5) * h, (jj + 0.5) * h});
                double tr = NAN, dt = NAN;
                try {
                    const auto cl = classify_2d(db2_angular_hessian(p, o.r, ii * h, jj * h));
                    tr = cl.trace;
                    dt = cl.det;
                    if (cl.kind == Planar2D::Minimum) svg.hatch(ii * h, jj * h, (ii + 1) * h, (jj + 1) * h, "#444444");
                } catch (const Error&) {
                }
                grid.row({ii * h, jj * h, a, b, tr, dt});
            }
        }
        svg.points(z1, "#1f77b4", 1.0);
        svg.points(z2, "#d62728", 1.0);
        std::vector<std::pair<double, double>> pts;
        for (const auto& re : res) pts.push_back({re.theta1, re.theta2});
        svg.points(pts, "#000000", 3.5);
        cli::write_text(c.path(stem + "_grid.csv"), grid.str());
        cli::write_text(c.path(stem + ".svg"), svg.str());
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- pitchfork

struct PitchforkOpts {
    double ell1 = 0.75, M1 = 0.5;
    std::string family = "P1";
    double lo = 0.35, hi = 0.42;
    bool trace = false;
};

SymmetricFamily parse_sym(const std::string& s) {
    if (s == "C") return SymmetricFamily::C;
    if (s == "P1") return SymmetricFamily::P1;
    if (s == "P2") return SymmetricFamily::P2;
    if (s == "T") return SymmetricFamily::T;
    throw ValidationError("family must be one of C, P1, P2, T");
}

int cmd_pitchfork(const Common& c, const PitchforkOpts& o) {
    const Db2Params p = Db2Params::equal_mass(o.ell1, o.M1);
    const SymmetricFamily f = parse_sym(o.family);
    const double rs = find_branch_point(p, f, o.lo, o.hi);
    const auto nf = normal_form(p, f, rs);
    json j = header(c, "pitchfork");
    j["params"] = {{"ell1", p.ell1}, {"M1", p.M1}, {"family", o.family}, {"interval", {o.lo, o.hi}}};
    j["normal_form"] = {{"r_star", nf.r_star}, {"theta1_star", nf.theta1_star}, {"theta2_star", nf.theta2_star},
                        {"mu", nf.mu}, {"k", nf.k}, {"l", nf.l}, {"P11", nf.P11}, {"P12", nf.P12},
                        {"slope", nf.slope}, {"quad", nf.quad}};
    const double span = std::sqrt(0.02 / std::abs(nf.quad));
    Csv gcsv({"theta1", "theta2", "r"});
    std::vector<std::pair<double, double>> gpts;
    for (int k = -100; k <= 100; ++k) {
        const auto q = quadratic_curve(nf, nf.theta1_star + span * k / 100.0);
        gcsv.row({q.theta1, q.theta2, q.r});
        gpts.push_back({q.theta1, q.r});
    }
    std::vector<std::pair<double, double>> tpts;
    Csv tcsv({"s", "r", "theta1", "theta2", "L2"});
    if (o.trace) {
        const Configuration seed = seed_near_branch_point(p, nf);
        const auto tr = trace_full_curve(p, seed);
        j["trace"] = {{"tag", to_string(tr.branch.tag)},
                      {"lower", {{"r", tr.start.point.r}, {"reason", to_string(tr.start.reason)}}},
                      {"upper", {{"r", tr.end.point.r}, {"reason", to_string(tr.end.reason)}}},
                      {"points", tr.branch.points.size()}};
        for (const auto& q : tr.branch.points) {
            tcsv.row({q.param, q.r, q.theta1, q.theta2, q.L2});
            // unwrap θ1 next to θ1* for the overlay
            tpts.push_back({nf.theta1_star + wrap_pi(q.theta1 - nf.theta1_star), q.r});
        }
    }
    const std::string stem = "pitchfork_" + o.family;
    if (c.want("csv") || c.want("svg")) {
        cli::write_text(c.path(stem + "_quadratic.csv"), gcsv.str());
        if (o.trace) cli::write_text(c.path(stem + "_traced.csv"), tcsv.str());
    }
    if (c.want("json") || c.want("svg")) cli::write_json(c.path(stem + ".json"), j);
    if (c.want("svg")) {
        std::vector<double> xs, ys;
        for (const auto& [a, b] : gpts) {
            xs.push_back(a);
            ys.push_back(b);
        }
        const auto [x0, x1] = padded_range(xs);
        const auto [y0, y1] = padded_range(ys);
        Svg svg(x0, x1, y0, y1, "theta1", "r");
        svg.title("branch at r* = " + cli::fmt_num(nf.r_star).substr(0, 8) + " (dark: numerical, light: G)");
        svg.polyline(tpts, "#1f3b73", 2.5);
        svg.polyline(gpts, "#8fb8ff", 1.5);
        cli::write_text(c.path(stem + ".svg"), svg.str());
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- perp-check

struct PerpOpts {
    std::string bodies;
    std::vector<double> r1{-0.5, 0.0}, r2{0.5, 0.0};
    double m1 = 0.5, m2 = 0.5, M1 = 1.0;
    std::string kernel = "newtonian";
};

std::vector<DiscretizedBody> load_bodies(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open bodies file " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw IoError(std::string("bodies file is not valid JSON: ") + e.what());
    }
    auto parse_points = [](const json& arr, const std::string& label) {
        DiscretizedBody b;
        b.label = label;
        for (const auto& q : arr) {
            if (!q.is_object() || !q.contains("x") || !q.contains("y") || !q.contains("m"))
                throw ValidationError("each point needs x, y and m");
            b.points.push_back({Vec2(q["x"].get<double>(), q["y"].get<double>()), q["m"].get<double>()});
        }
        b.validate();
        return b;
    };
    std::vector<DiscretizedBody> out;
    if (!j.is_array() || j.empty()) throw ValidationError("bodies file must be a non-empty JSON array");
    if (j[0].is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_points(j[k], "body" + std::to_string(k)));
    } else {
        out.push_back(parse_points(j, "body0"));
    }
    return out;
}

int cmd_perp(const Common& c, const PerpOpts& o) {
    if (o.r1.size() != 2 || o.r2.size() != 2) throw ValidationError("--r1 and --r2 take two values: x,y");
    const auto bodies = load_bodies(o.bodies);
    DumbbellSpec d;
    d.r1 = Vec2(o.r1[0], o.r1[1]);
    d.r2 = Vec2(o.r2[0], o.r2[1]);
    d.m1 = o.m1;
    d.m2 = o.m2;
    d.M1 = o.M1;
    Kernel k;
    if (o.kernel == "newtonian")
        k = Kernel::Newtonian;
    else if (o.kernel == "literal")
        k = Kernel::Literal;
    else
        throw ValidationError("--kernel must be newtonian or literal");
    const auto rep = cone_check(d, bodies, k);
    json j = header(c, "perp-check");
    j["kernel"] = o.kernel;
    j["cone13"] = rep.cone13;
    j["cone24"] = rep.cone24;
    j["on_rod_line"] = rep.on_rod_line;
    j["on_bisector"] = rep.on_bisector;
    j["theta_ddot"] = rep.theta_ddot;
    j["verdict"] = to_string(rep.verdict);
    if (c.want("json")) cli::write_json(c.path("perp_check.json"), j);
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gravre: relative equilibria of dumbbell and point-mass gravitational systems"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out, "Output directory")->capture_default_str();
    app.add_option("--format", common.formats, "Output formats (csv, json, svg)")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--jobs", common.jobs, "Worker threads (default: GRAVRE_JOBS or all cores)");
    app.add_option("--seed", common.seed, "Seed recorded in outputs")->capture_default_str();

    KeplerOpts ko;
    auto* kep = app.add_subcommand("kepler", "Kepler RE, stability and phase portrait");
    kep->add_option("--L", ko.L)->capture_default_str();
    kep->add_option("--M1", ko.M1)->capture_default_str();
    kep->add_option("--M2", ko.M2)->capture_default_str();
    kep->add_option("--G", ko.G)->capture_default_str();
    kep->add_flag("--phase", ko.phase, "Integrate from r0 and write the phase-portrait CSV");
    kep->add_option("--r0", ko.r0)->capture_default_str();
    kep->add_option("--t-end", ko.t_end)->capture_default_str();
    kep->add_option("--tol", ko.tol)->capture_default_str();

    BranchOpts bo;
    auto* br = app.add_subcommand("branch", "L^2 branch profile of an RE family");
    br->add_option("--model", bo.model)->check(CLI::IsMember({"db1", "db2"}))->capture_default_str();
    br->add_option("--family", bo.family,
                   "db1: colinear, colinear-nonoverlap, colinear-overlap, isosceles; "
                   "db2: colinear, perp-isosceles, trapezoid, rhombus")
        ->capture_default_str();
    br->add_option("--x1", bo.x1)->capture_default_str();
    br->add_option("--M1", bo.M1)->capture_default_str();
    br->add_option("--x11", bo.x11)->capture_default_str();
    br->add_option("--x21", bo.x21)->capture_default_str();
    br->add_option("--ell1", bo.ell1)->capture_default_str();
    br->add_option("--n", bo.n)->capture_default_str();
    br->add_option("--lo", bo.lo, "Parameter range start (default: compactified sweep)");
    br->add_option("--hi", bo.hi);
    br->add_flag("--compactify", bo.compactify, "Sample R = z/(2-z)");
    br->add_option("--L2", bo.L2, "Count RE at these L^2 values")->delimiter(',');

    MapOpts mo;
    auto* mp = app.add_subcommand("map", "Stability map over a parameter plane");
    mp->add_option("--family", mo.family)->capture_default_str();
    mp->add_option("--x-axis", mo.x_axis)->capture_default_str();
    mp->add_option("--x-range", mo.x_range)->delimiter(',')->expected(2);
    mp->add_option("--r-range", mo.r_range)->delimiter(',')->expected(2);
    mp->add_option("--nx", mo.nx)->capture_default_str();
    mp->add_option("--nr", mo.nr)->capture_default_str();
    mp->add_option("--x1", mo.x1)->capture_default_str();
    mp->add_option("--M1", mo.M1)->capture_default_str();
    mp->add_option("--x21", mo.x21)->capture_default_str();
    mp->add_option("--ell1", mo.ell1)->capture_default_str();

    TorusOpts to;
    auto* tor = app.add_subcommand("torus", "Equal-mass RE on the angle torus at fixed r");
    tor->add_option("--ell1", to.ell1)->capture_default_str();
    tor->add_option("--M1", to.M1)->capture_default_str();
    tor->add_option("--r", to.r)->required();
    tor->add_option("--n", to.n)->capture_default_str();
    tor->add_option("--svg-n", to.svg_n)->capture_default_str();
    tor->add_flag("--mod-symmetry", to.mod_symmetry, "Report one representative per symmetry class");

    PitchforkOpts po;
    auto* pf = app.add_subcommand("pitchfork", "Branch point and normal form on a symmetric family");
    pf->add_option("--ell1", po.ell1)->capture_default_str();
    pf->add_option("--M1", po.M1)->capture_default_str();
    pf->add_option("--family", po.family, "C, P1, P2 or T")->capture_default_str();
    pf->add_option("--lo", po.lo)->capture_default_str();
    pf->add_option("--hi", po.hi)->capture_default_str();
    pf->add_flag("--trace", po.trace, "Trace the bifurcating branch for the overlay");

    PerpOpts qo;
    auto* pc = app.add_subcommand("perp-check", "Perpendicular bisector cone test");
    pc->add_option("--bodies", qo.bodies, "JSON list of {x, y, m} (or a list of such lists)")->required();
    pc->add_option("--r1", qo.r1)->delimiter(',')->expected(2);
    pc->add_option("--r2", qo.r2)->delimiter(',')->expected(2);
    pc->add_option("--m1", qo.m1)->capture_default_str();
    pc->add_option("--m2", qo.m2)->capture_default_str();
    pc->add_option("--M1", qo.M1)->capture_default_str();
    pc->add_option("--kernel", qo.kernel)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*kep) return cmd_kepler(common, ko);
        if (*br) return cmd_branch(common, bo);
        if (*mp) return cmd_map(common, mo);
        if (*tor) return cmd_torus(common, to);
        if (*pf) return cmd_pitchfork(common, po);
        if (*pc) return cmd_perp(common, qo);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
