#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heilbronn/geometry.hpp"

namespace heilbronn::model {

enum class ModelKind { Baseline, Final };

/// Names one coordinate variable, e.g. {x, 2} for x_2.
struct CoordRef {
    char axis; // 'x' or 'y'
    int i;     // 1-based point index

    std::string str() const { return std::string(1, axis) + std::to_string(i); }
    friend bool operator==(const CoordRef&, const CoordRef&) = default;
};

/// Triangles whose orientation is known a priori under the canonical boundary
/// labeling: T+ lies entirely on p1..p5 (counterclockwise), T- is (1,5,k).
struct SignSets {
    std::vector<geom::TriangleId> t_plus;
    std::vector<geom::TriangleId> t_minus;
};

inline SignSets sign_sets(int n) {
    SignSets s;
    for (const auto& t : geom::all_triangles(n)) {
        if (t.k <= 5) s.t_plus.push_back(t);
        else if (t.i == 1 && t.j == 5) s.t_minus.push_back(t);
    }
    return s;
}

/// Solver-independent instance of the max-min-area program. Variables:
/// coordinates x_i,y_i in [0,1]; products w_ij = x_i*y_j; signed areas
/// A_t in [-1/2,1/2]; orientation binaries b_t; objective z in [0, z_upper].
/// Every signed area is affine in the w variables:
///   A_t = (w_ij + w_jk + w_ki - w_ik - w_ji - w_kj) / 2.
/// Instances are immutable after construction.
struct ModelInstance {
    int n = 0;
    ModelKind kind = ModelKind::Baseline;
    double z_upper = 0.5;
    std::vector<geom::TriangleId> triangles;      // lexicographic
    std::vector<std::pair<int, int>> w_pairs;     // ordered (i,j), i != j
    std::vector<std::optional<double>> x_fixed;   // [0] unused
    std::vector<std::optional<double>> y_fixed;
    std::vector<int> b_fixed;                     // per triangle: -1 free, else 0/1
    std::vector<std::pair<CoordRef, CoordRef>> orderings; // lhs <= rhs

    int w_index(int i, int j) const {
        return (i - 1) * (n - 1) + (j - 1) - (j > i ? 1 : 0);
    }
    int tri_index(const geom::TriangleId& t) const {
        for (size_t m = 0; m < triangles.size(); ++m)
            if (triangles[m] == t) return static_cast<int>(m);
        throw std::invalid_argument("tri_index: unknown triangle " + geom::to_string(t));
    }

    /// The six (w index, coefficient) terms of A_t.
    std::array<std::pair<int, double>, 6> area_terms(const geom::TriangleId& t) const {
        return {{{w_index(t.i, t.j), 0.5},
                 {w_index(t.j, t.k), 0.5},
                 {w_index(t.k, t.i), 0.5},
                 {w_index(t.i, t.k), -0.5},
                 {w_index(t.j, t.i), -0.5},
                 {w_index(t.k, t.j), -0.5}}};
    }

    int num_free_binaries() const {
        int c = 0;
        for (int b : b_fixed) c += (b < 0);
        return c;
    }
};

namespace detail {
inline ModelInstance make_core(int n, ModelKind kind, double z_upper) {
    if (n < 3) throw std::invalid_argument("model: need n >= 3, got " + std::to_string(n));
    ModelInstance m;
    m.n = n;
    m.kind = kind;
    m.z_upper = z_upper;
    m.triangles = geom::all_triangles(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j) m.w_pairs.emplace_back(i, j);
    m.x_fixed.assign(n + 1, std::nullopt);
    m.y_fixed.assign(n + 1, std::nullopt);
    m.b_fixed.assign(m.triangles.size(), -1);
    return m;
}
} // namespace detail

/// Plain formulation: box constraints, bilinear area definitions and the
/// sign-selected coupling z <= (2 b_t - 1) A_t. No fixing, no ordering.
inline ModelInstance build_baseline(int n) {
    return detail::make_core(n, ModelKind::Baseline, 0.5);
}

/// Strengthened formulation: products substituted, five boundary coordinates
/// fixed, orientations of T+/T- pinned, coordinate orderings added, and the
/// objective capped by the optimal value for n-1 points. For n < 5 the
/// boundary scaffold does not apply and the baseline plus the z cap is used.
inline ModelInstance build_final(int n, double delta_prev) {
    if (!(delta_prev > 0.0) || delta_prev > 0.5)
        throw std::invalid_argument("build_final: delta_prev must lie in (0, 1/2]");
    ModelInstance m = detail::make_core(n, ModelKind::Final, delta_prev);
    if (n < 5) return m;

    m.x_fixed[1] = 0.0;
    m.y_fixed[2] = 0.0;
    m.x_fixed[3] = 1.0;
    m.y_fixed[4] = 1.0;
    m.x_fixed[5] = 0.0;

    auto signs = sign_sets(n);
    for (const auto& t : signs.t_plus) m.b_fixed[m.tri_index(t)] = 1;
    for (const auto& t : signs.t_minus) m.b_fixed[m.tri_index(t)] = 0;

    m.orderings.push_back({{'x', 2}, {'x', 4}});
    m.orderings.push_back({{'y', 1}, {'y', 5}});
    for (int i = 6; i < n; ++i) m.orderings.push_back({{'x', i}, {'x', i + 1}});
    return m;
}

/// Full variable assignment, sized to the instance.
struct Assignment {
    std::vector<double> x, y; // [0] unused, indices 1..n
    std::vector<double> w;
    std::vector<double> A;
    std::vector<int> b;
    double z = 0.0;
};

/// Lifts a point configuration into a consistent assignment: products and
/// areas recomputed, free orientations set to the actual area signs, z set to
/// the minimum absolute area.
inline Assignment embed(const ModelInstance& m, const geom::Configuration& cfg) {
    if (cfg.n() != m.n) throw std::invalid_argument("embed: configuration size mismatch");
    Assignment a;
    a.x.assign(m.n + 1, 0.0);
    a.y.assign(m.n + 1, 0.0);
    for (int i = 1; i <= m.n; ++i) {
        a.x[i] = cfg.point(i).x;
        a.y[i] = cfg.point(i).y;
    }
    a.w.resize(m.w_pairs.size());
    for (size_t p = 0; p < m.w_pairs.size(); ++p)
        a.w[p] = a.x[m.w_pairs[p].first] * a.y[m.w_pairs[p].second];
    a.A.resize(m.triangles.size());
    a.b.resize(m.triangles.size());
    double zmin = 0.5;
    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        double area = 0.0;
        for (auto [wi, coef] : m.area_terms(m.triangles[ti])) area += coef * a.w[wi];
        a.A[ti] = area;
        a.b[ti] = m.b_fixed[ti] >= 0 ? m.b_fixed[ti] : (area >= 0.0 ? 1 : 0);
        zmin = std::min(zmin, std::fabs(area));
    }
    a.z = zmin;
    return a;
}

struct Violation {
    std::string constraint;
    double magnitude; // positive amount by which the constraint fails
};

/// Checks every constraint at tolerance 1e-9 and reports each violation with
/// its magnitude. An empty report means the assignment is feasible.
inline std::vector<Violation> check_feasible(const ModelInstance& m, const Assignment& a) {
    constexpr double tol = 1e-9;
    if (a.x.size() != static_cast<size_t>(m.n + 1) || a.y.size() != static_cast<size_t>(m.n + 1) ||
        a.w.size() != m.w_pairs.size() || a.A.size() != m.triangles.size() ||
        a.b.size() != m.triangles.size())
        throw std::invalid_argument("check_feasible: assignment does not cover all variables");

    std::vector<Violation> out;
    auto flag = [&](std::string what, double amount) {
        if (amount > tol) out.push_back({std::move(what), amount});
    };

    for (int i = 1; i <= m.n; ++i) {
        flag("x" + std::to_string(i) + " >= 0", -a.x[i]);
        flag("x" + std::to_string(i) + " <= 1", a.x[i] - 1.0);
        flag("y" + std::to_string(i) + " >= 0", -a.y[i]);
        flag("y" + std::to_string(i) + " <= 1", a.y[i] - 1.0);
        if (m.x_fixed[i]) flag("x" + std::to_string(i) + " fixed", std::fabs(a.x[i] - *m.x_fixed[i]));
        if (m.y_fixed[i]) flag("y" + std::to_string(i) + " fixed", std::fabs(a.y[i] - *m.y_fixed[i]));
    }
    for (size_t p = 0; p < m.w_pairs.size(); ++p) {
        auto [i, j] = m.w_pairs[p];
        flag("w" + std::to_string(i) + "," + std::to_string(j) + " = x*y",
             std::fabs(a.w[p] - a.x[i] * a.y[j]));
    }
    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        const auto& t = m.triangles[ti];
        double affine = 0.0;
        for (auto [wi, coef] : m.area_terms(t)) affine += coef * a.w[wi];
        flag("A" + geom::to_string(t) + " definition", std::fabs(a.A[ti] - affine));
        flag("A" + geom::to_string(t) + " box", std::fabs(a.A[ti]) - 0.5);
        if (a.b[ti] != 0 && a.b[ti] != 1)
            out.push_back({"b" + geom::to_string(t) + " binary", 1.0});
        if (m.b_fixed[ti] >= 0 && a.b[ti] != m.b_fixed[ti])
            out.push_back({"b" + geom::to_string(t) + " fixed", 1.0});
        flag("z <= (2b-1)A" + geom::to_string(t), a.z - (2.0 * a.b[ti] - 1.0) * a.A[ti]);
    }
    flag("z >= 0", -a.z);
    flag("z <= z_upper", a.z - m.z_upper);
    for (const auto& [lhs, rhs] : m.orderings) {
        double lv = lhs.axis == 'x' ? a.x[lhs.i] : a.y[lhs.i];
        double rv = rhs.axis == 'x' ? a.x[rhs.i] : a.y[rhs.i];
        flag(lhs.str() + " <= " + rhs.str(), lv - rv);
    }
    return out;
}

inline nlohmann::json to_json(const ModelInstance& m) {
    nlohmann::json j;
    j["n"] = m.n;
    j["kind"] = m.kind == ModelKind::Baseline ? "baseline" : "final";
    j["z_upper"] = m.z_upper;
    j["num_triangles"] = m.triangles.size();
    j["num_products"] = m.w_pairs.size();
    nlohmann::json fixed = nlohmann::json::object();
    for (int i = 1; i <= m.n; ++i) {
        if (m.x_fixed[i]) fixed["x" + std::to_string(i)] = *m.x_fixed[i];
        if (m.y_fixed[i]) fixed["y" + std::to_string(i)] = *m.y_fixed[i];
    }
    j["fixed_coordinates"] = fixed;
    nlohmann::json bs = nlohmann::json::object();
    for (size_t ti = 0; ti < m.triangles.size(); ++ti)
        if (m.b_fixed[ti] >= 0) bs[geom::to_string(m.triangles[ti])] = m.b_fixed[ti];
    j["fixed_binaries"] = bs;
    nlohmann::json ord = nlohmann::json::array();
    for (const auto& [lhs, rhs] : m.orderings) ord.push_back({lhs.str(), rhs.str()});
    j["orderings"] = ord;
    return j;
}

} // namespace heilbronn::model
