#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "heilbronn/lp.hpp"
#include "heilbronn/model.hpp"

namespace heilbronn::relax {

struct IntervalD {
    double lo = 0.0, hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool is_point() const { return lo == hi; }
    bool contains(double v) const { return lo <= v && v <= hi; }
    static IntervalD point(double v) { return {v, v}; }
};

namespace detail {

constexpr double kTiny = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

inline IntervalD iadd(IntervalD a, IntervalD b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline IntervalD isub(IntervalD a, IntervalD b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline IntervalD imul(IntervalD a, IntervalD b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}
inline IntervalD iscale(IntervalD a, double s) {
    return s >= 0 ? IntervalD{a.lo * s, a.hi * s} : IntervalD{a.hi * s, a.lo * s};
}

// Set of quotients {n/d : n in N, d in D}; up to two pieces when 0 in D.
struct DivPieces {
    IntervalD piece[2];
    int count = 0;
};

inline DivPieces ediv(IntervalD N, IntervalD D) {
    DivPieces out;
    if (D.lo > kTiny || D.hi < -kTiny) {
        double q1 = N.lo / D.lo, q2 = N.lo / D.hi, q3 = N.hi / D.lo, q4 = N.hi / D.hi;
        out.piece[out.count++] = {std::min(std::min(q1, q2), std::min(q3, q4)),
                                  std::max(std::max(q1, q2), std::max(q3, q4))};
        return out;
    }
    if (N.lo > kTiny) {
        if (D.lo < -kTiny) out.piece[out.count++] = {-kInf, N.lo / D.lo};
        if (D.hi > kTiny) out.piece[out.count++] = {N.lo / D.hi, kInf};
    } else if (N.hi < -kTiny) {
        if (D.hi > kTiny) out.piece[out.count++] = {-kInf, N.hi / D.hi};
        if (D.lo < -kTiny) out.piece[out.count++] = {N.hi / D.lo, kInf};
    } else {
        out.piece[out.count++] = {-kInf, kInf};
    }
    return out;
}

// Tightens `a` under the constraint a*b in P (hull of the piecewise result).
inline IntervalD project_mul(IntervalD P, IntervalD a, IntervalD b) {
    DivPieces q = ediv(P, b);
    bool any = false;
    IntervalD acc{kInf, -kInf};
    for (int m = 0; m < q.count; ++m) {
        double lo = std::max(a.lo, q.piece[m].lo);
        double hi = std::min(a.hi, q.piece[m].hi);
        if (lo <= hi) {
            acc.lo = std::min(acc.lo, lo);
            acc.hi = std::max(acc.hi, hi);
            any = true;
        }
    }
    if (!any) return {1.0, -1.0}; // empty marker, caller pads and checks
    return acc;
}

} // namespace detail

/// Per-variable closed intervals plus binary domains for one search node.
/// b_dom bits: 1 = value 0 allowed, 2 = value 1 allowed.
struct NodeBounds {
    std::vector<IntervalD> x, y; // 1-based, slot 0 unused
    std::vector<IntervalD> w;    // per model w_pairs
    std::vector<IntervalD> A;    // per triangle
    IntervalD z;
    std::vector<uint8_t> b_dom;
    bool infeasible = false;
};

constexpr uint8_t kCanZero = 1;
constexpr uint8_t kCanOne = 2;

inline NodeBounds root_bounds(const model::ModelInstance& m) {
    NodeBounds nb;
    nb.x.assign(m.n + 1, {0.0, 1.0});
    nb.y.assign(m.n + 1, {0.0, 1.0});
    for (int i = 1; i <= m.n; ++i) {
        if (m.x_fixed[i]) nb.x[i] = IntervalD::point(*m.x_fixed[i]);
        if (m.y_fixed[i]) nb.y[i] = IntervalD::point(*m.y_fixed[i]);
    }
    nb.w.assign(m.w_pairs.size(), {0.0, 1.0});
    nb.A.assign(m.triangles.size(), {-0.5, 0.5});
    nb.z = {0.0, m.z_upper};
    nb.b_dom.resize(m.triangles.size());
    for (size_t ti = 0; ti < m.triangles.size(); ++ti)
        nb.b_dom[ti] = m.b_fixed[ti] < 0 ? (kCanZero | kCanOne)
                                         : (m.b_fixed[ti] == 0 ? kCanZero : kCanOne);
    return nb;
}

/// One linear inequality cw*w + cx*x + cy*y <= rhs over a product triple.
struct McCormickRow {
    double cw, cx, cy, rhs;
};

/// The four-envelope hull of w = x*y over the box [xl,xu] x [yl,yu].
inline std::array<McCormickRow, 4> mccormick_rows(IntervalD xb, IntervalD yb) {
    if (xb.lo > xb.hi || yb.lo > yb.hi)
        throw std::invalid_argument("mccormick_rows: empty interval");
    return {{{-1.0, yb.lo, xb.lo, xb.lo * yb.lo},
             {-1.0, yb.hi, xb.hi, xb.hi * yb.hi},
             {1.0, -yb.lo, -xb.hi, -xb.hi * yb.lo},
             {1.0, -yb.hi, -xb.lo, -xb.lo * yb.hi}}};
}

/// Linear rows relaxing z <= (2 b - 1) A over the given binary domain. Slots:
/// cz*z + cb*b + cA*A + cu*u <= rhs. With b unfixed an auxiliary u = b*A is
/// introduced (uses_u true) and relaxed by its own envelope.
struct CouplingRows {
    struct Row {
        double cz, cb, cA, cu, rhs;
    };
    bool uses_u = false;
    std::vector<Row> rows;
};

inline CouplingRows linearize_sign_coupling(uint8_t b_dom, IntervalD A_bounds) {
    CouplingRows out;
    if (b_dom == kCanOne) {
        out.rows.push_back({1.0, 0.0, -1.0, 0.0, 0.0}); // z <= A
        return out;
    }
    if (b_dom == kCanZero) {
        out.rows.push_back({1.0, 0.0, 1.0, 0.0, 0.0}); // z <= -A
        return out;
    }
    if (b_dom != (kCanZero | kCanOne))
        throw std::invalid_argument("linearize_sign_coupling: empty binary domain");
    out.uses_u = true;
    for (const auto& r : mccormick_rows({0.0, 1.0}, A_bounds))
        out.rows.push_back({0.0, r.cx, r.cy, r.cw, r.rhs}); // x := b, y := A, w := u
    out.rows.push_back({1.0, 0.0, 1.0, -2.0, 0.0});         // z <= 2u - A
    return out;
}

namespace detail {

struct Fbbt {
    const model::ModelInstance& m;
    NodeBounds& nb;
    bool changed = false;

    bool shrink(IntervalD& cur, IntervalD cand) {
        double nlo = std::max(cur.lo, cand.lo - kTiny);
        double nhi = std::min(cur.hi, cand.hi + kTiny);
        if (nlo > nhi + 1e-9) {
            nb.infeasible = true;
            return false;
        }
        if (nlo > nhi) nlo = nhi = 0.5 * (nlo + nhi);
        if (nlo > cur.lo + kTiny || nhi < cur.hi - kTiny) changed = true;
        cur.lo = std::max(cur.lo, nlo);
        cur.hi = std::min(cur.hi, nhi);
        return true;
    }

    IntervalD& coord(model::CoordRef c) { return c.axis == 'x' ? nb.x[c.i] : nb.y[c.i]; }

    void orderings() {
        for (const auto& [lhs, rhs] : m.orderings) {
            IntervalD &a = coord(lhs), &b = coord(rhs);
            if (!shrink(a, {-kInf, b.hi})) return;
            if (!shrink(b, {a.lo, kInf})) return;
        }
    }

    // z <= (2b-1)A and z >= z.lo imply orientation fixing and area bounds.
    void sign_inference() {
        double zmax = kInf; // min over triangles of the per-triangle best side
        for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
            uint8_t dom = nb.b_dom[ti];
            IntervalD& A = nb.A[ti];
            if ((dom & kCanOne) && A.hi < nb.z.lo - kTiny) dom &= ~kCanOne;
            if ((dom & kCanZero) && -A.lo < nb.z.lo - kTiny) dom &= ~kCanZero;
            if (dom == 0) {
                nb.infeasible = true;
                return;
            }
            if (dom != nb.b_dom[ti]) {
                nb.b_dom[ti] = dom;
                changed = true;
            }
            if (dom == kCanOne && !shrink(A, {nb.z.lo, kInf})) return;
            if (dom == kCanZero && !shrink(A, {-kInf, -nb.z.lo})) return;
            double side = -kInf;
            if (dom & kCanOne) side = std::max(side, A.hi);
            if (dom & kCanZero) side = std::max(side, -A.lo);
            zmax = std::min(zmax, side);
        }
        if (!shrink(nb.z, {-kInf, zmax})) return;
        if (nb.z.lo > nb.z.hi + 1e-9) nb.infeasible = true;
    }

    // Forward-backward pass through A = ((xj-xi)(yk-yi) - (yj-yi)(xk-xi)) / 2.
    void triangle_geometry(size_t ti) {
        const auto& t = m.triangles[ti];
        IntervalD &xi = nb.x[t.i], &xj = nb.x[t.j], &xk = nb.x[t.k];
        IntervalD &yi = nb.y[t.i], &yj = nb.y[t.j], &yk = nb.y[t.k];

        IntervalD u = isub(xj, xi), v = isub(yk, yi);
        IntervalD s = isub(yj, yi), r = isub(xk, xi);
        IntervalD P = imul(u, v), Q = imul(s, r);
        if (!shrink(nb.A[ti], iscale(isub(P, Q), 0.5))) return;
        IntervalD A2 = iscale(nb.A[ti], 2.0);

        IntervalD Pt = iadd(A2, Q);
        if (!shrink(P, Pt)) return;
        IntervalD Qt = isub(P, A2);
        if (!shrink(Q, Qt)) return;

        if (!shrink(u, project_mul(P, u, v))) return;
        if (!shrink(v, project_mul(P, v, u))) return;
        if (!shrink(s, project_mul(Q, s, r))) return;
        if (!shrink(r, project_mul(Q, r, s))) return;

        if (!shrink(xj, iadd(u, xi))) return;
        if (!shrink(xi, isub(xj, u))) return;
        if (!shrink(yk, iadd(v, yi))) return;
        if (!shrink(yi, isub(yk, v))) return;
        if (!shrink(yj, iadd(s, yi))) return;
        if (!shrink(yi, isub(yj, s))) return;
        if (!shrink(xk, iadd(r, xi))) return;
        if (!shrink(xi, isub(xk, r))) return;
    }

    void products() {
        for (size_t p = 0; p < m.w_pairs.size(); ++p) {
            auto [i, j] = m.w_pairs[p];
            if (!shrink(nb.w[p], imul(nb.x[i], nb.y[j]))) return;
            if (!shrink(nb.x[i], project_mul(nb.w[p], nb.x[i], nb.y[j]))) return;
            if (!shrink(nb.y[j], project_mul(nb.w[p], nb.y[j], nb.x[i]))) return;
        }
    }

    void affine_areas() {
        for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
            auto terms = m.area_terms(m.triangles[ti]);
            IntervalD sum{0.0, 0.0};
            std::array<IntervalD, 6> scaled;
            for (int k = 0; k < 6; ++k) {
                scaled[k] = iscale(nb.w[terms[k].first], terms[k].second);
                sum = iadd(sum, scaled[k]);
            }
            if (!shrink(nb.A[ti], sum)) return;
            for (int k = 0; k < 6; ++k) {
                // independent-term sums subtract exactly componentwise
                IntervalD others{sum.lo - scaled[k].lo, sum.hi - scaled[k].hi};
                IntervalD target = isub(nb.A[ti], others);
                IntervalD wt = iscale(target, 1.0 / terms[k].second);
                if (!shrink(nb.w[terms[k].first], wt)) return;
            }
        }
    }

    void run() {
        for (int sweep = 0; sweep < 10 && !nb.infeasible; ++sweep) {
            changed = false;
            orderings();
            if (nb.infeasible) return;
            sign_inference();
            if (nb.infeasible) return;
            for (size_t ti = 0; ti < m.triangles.size() && !nb.infeasible; ++ti)
                triangle_geometry(ti);
            if (nb.infeasible) return;
            products();
            if (nb.infeasible) return;
            affine_areas();
            if (!changed) return;
        }
    }
};

} // namespace detail

/// Interval propagation over the model constraints. Never throws; an emptied
/// domain sets the infeasible flag. Reaches a fixpoint or stops after 10
/// sweeps with change threshold 1e-12.
inline NodeBounds fbbt(const model::ModelInstance& m, NodeBounds nb) {
    detail::Fbbt engine{m, nb};
    engine.run();
    return nb;
}

/// LP relaxation of the model restricted to one node's bounds, with column
/// maps back to the model variables.
struct NodeLp {
    LinearProgram lp;
    int z = -1;
    std::vector<int> x, y; // per point, slot 0 unused (-1)
    std::vector<int> w;    // per product pair
    std::vector<int> A;    // per triangle
    std::vector<int> b;    // per triangle
    std::vector<int> u;    // per triangle, -1 unless the coupling needed it
};

inline NodeLp build_node_lp(const model::ModelInstance& m, const NodeBounds& nb) {
    NodeLp n;
    LinearProgram& lp = n.lp;
    n.x.assign(m.n + 1, -1);
    n.y.assign(m.n + 1, -1);
    for (int i = 1; i <= m.n; ++i) {
        n.x[i] = lp.add_var(nb.x[i].lo, nb.x[i].hi);
        n.y[i] = lp.add_var(nb.y[i].lo, nb.y[i].hi);
    }
    n.w.resize(m.w_pairs.size());
    for (size_t p = 0; p < m.w_pairs.size(); ++p)
        n.w[p] = lp.add_var(nb.w[p].lo, nb.w[p].hi);
    n.A.resize(m.triangles.size());
    n.b.resize(m.triangles.size());
    n.u.assign(m.triangles.size(), -1);
    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        n.A[ti] = lp.add_var(nb.A[ti].lo, nb.A[ti].hi);
        double bl = (nb.b_dom[ti] & kCanZero) ? 0.0 : 1.0;
        double bu = (nb.b_dom[ti] & kCanOne) ? 1.0 : 0.0;
        n.b[ti] = lp.add_var(bl, bu);
    }
    n.z = lp.add_var(nb.z.lo, nb.z.hi, 1.0);

    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        LinearProgram::Row def;
        def.rel = LinearProgram::Rel::EQ;
        def.terms.push_back({n.A[ti], 1.0});
        for (auto [wi, coef] : m.area_terms(m.triangles[ti]))
            def.terms.push_back({n.w[wi], -coef});
        lp.add_row(std::move(def));
    }
    for (size_t p = 0; p < m.w_pairs.size(); ++p) {
        auto [i, j] = m.w_pairs[p];
        for (const auto& r : mccormick_rows(nb.x[i], nb.y[j])) {
            LinearProgram::Row row;
            row.rhs = r.rhs;
            row.terms = {{n.w[p], r.cw}, {n.x[i], r.cx}, {n.y[j], r.cy}};
            lp.add_row(std::move(row));
        }
    }
    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        CouplingRows rows = linearize_sign_coupling(nb.b_dom[ti], nb.A[ti]);
        if (rows.uses_u) {
            double ulo = std::min({0.0, nb.A[ti].lo, nb.A[ti].hi});
            double uhi = std::max({0.0, nb.A[ti].lo, nb.A[ti].hi});
            n.u[ti] = lp.add_var(ulo, uhi);
        }
        for (const auto& r : rows.rows) {
            LinearProgram::Row row;
            row.rhs = r.rhs;
            if (r.cz != 0.0) row.terms.push_back({n.z, r.cz});
            if (r.cb != 0.0) row.terms.push_back({n.b[ti], r.cb});
            if (r.cA != 0.0) row.terms.push_back({n.A[ti], r.cA});
            if (r.cu != 0.0) row.terms.push_back({n.u[ti], r.cu});
            lp.add_row(std::move(row));
        }
    }
    for (const auto& [lhs, rhs] : m.orderings) {
        auto col = [&](model::CoordRef c) { return c.axis == 'x' ? n.x[c.i] : n.y[c.i]; };
        LinearProgram::Row row;
        row.terms = {{col(lhs), 1.0}, {col(rhs), -1.0}};
        row.rhs = 0.0;
        lp.add_row(std::move(row));
    }
    return n;
}

} // namespace heilbronn::relax
