#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heilbronn::relax {

/// max objective . v subject to row relations and finite variable bounds.
struct LinearProgram {
    enum class Rel { LE, GE, EQ };
    struct Row {
        std::vector<std::pair<int, double>> terms; // (variable, coefficient)
        Rel rel = Rel::LE;
        double rhs = 0.0;
    };

    int num_vars = 0;
    std::vector<double> lo, hi; // finite bounds per variable
    std::vector<double> objective;
    std::vector<Row> rows;

    int add_var(double l, double u, double obj = 0.0) {
        lo.push_back(l);
        hi.push_back(u);
        objective.push_back(obj);
        return num_vars++;
    }
    void add_row(Row r) { rows.push_back(std::move(r)); }
};

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;            // primal values (structural variables)
    std::vector<double> reduced_cost; // per structural variable, 0 when basic
    std::vector<int8_t> at_bound;     // -1 at lower, +1 at upper, 0 basic
};

namespace detail {

// Bounded-variable primal simplex on a dense tableau. Phase 1 introduces an
// artificial column per initially violated row; Bland's rule takes over after
// a stall, which guarantees termination.
class SimplexTableau {
public:
    SimplexTableau(const LinearProgram& lp, bool bland_from_start)
        : lp_(lp), bland_(bland_from_start) {}

    LpStatus run(LpResult& out) {
        build();
        if (structurally_infeasible_) return LpStatus::Infeasible;
        if (num_art_ > 0) {
            set_phase1_costs();
            optimize();
            if (phase1_value() < -1e-7) return LpStatus::Infeasible;
            freeze_artificials();
        }
        set_phase2_costs();
        optimize();
        extract(out);
        return LpStatus::Optimal;
    }

private:
    const LinearProgram& lp_;
    bool bland_;
    int m_ = 0, ns_ = 0, ncols_ = 0, num_art_ = 0;
    bool structurally_infeasible_ = false;
    std::vector<double> T_;    // m x ncols tableau, row-major
    std::vector<double> cost_; // objective per column for the current phase
    std::vector<double> dj_;   // reduced costs per column
    std::vector<double> xb_;   // values of basic variables per row
    std::vector<double> lob_, hib_;
    std::vector<int> basis_;   // basic column per row
    std::vector<int> row_of_;  // row of a basic column, -1 if nonbasic
    std::vector<int8_t> side_; // nonbasic at lower (-1) or upper (+1)
    long iterations_ = 0;

    double& T(int r, int c) { return T_[static_cast<size_t>(r) * ncols_ + c]; }

    double nonbasic_value(int c) const { return side_[c] > 0 ? hib_[c] : lob_[c]; }

    void build() {
        m_ = static_cast<int>(lp_.rows.size());
        ns_ = lp_.num_vars;

        // row activity ranges give finite slack bounds
        std::vector<double> amin(m_, 0.0), amax(m_, 0.0);
        for (int r = 0; r < m_; ++r)
            for (auto [v, c] : lp_.rows[r].terms) {
                double a = c * lp_.lo[v], b = c * lp_.hi[v];
                amin[r] += std::min(a, b);
                amax[r] += std::max(a, b);
            }

        std::vector<double> slack_lo(m_), slack_hi(m_);
        for (int r = 0; r < m_; ++r) {
            double rhs = lp_.rows[r].rhs;
            switch (lp_.rows[r].rel) {
            case LinearProgram::Rel::LE:
                if (rhs < amin[r] - 1e-9) { structurally_infeasible_ = true; return; }
                slack_lo[r] = 0.0;
                slack_hi[r] = std::max(0.0, rhs - amin[r]);
                break;
            case LinearProgram::Rel::GE:
                if (rhs > amax[r] + 1e-9) { structurally_infeasible_ = true; return; }
                slack_lo[r] = std::min(0.0, rhs - amax[r]);
                slack_hi[r] = 0.0;
                break;
            case LinearProgram::Rel::EQ:
                if (rhs < amin[r] - 1e-9 || rhs > amax[r] + 1e-9) {
                    structurally_infeasible_ = true;
                    return;
                }
                slack_lo[r] = slack_hi[r] = 0.0;
                break;
            }
        }

        // residuals with every structural variable at its lower bound
        std::vector<double> residual(m_);
        for (int r = 0; r < m_; ++r) {
            double act = 0.0;
            for (auto [v, c] : lp_.rows[r].terms) act += c * lp_.lo[v];
            residual[r] = lp_.rows[r].rhs - act;
        }

        std::vector<int> art_row;
        for (int r = 0; r < m_; ++r) {
            double clamped = std::clamp(residual[r], slack_lo[r], slack_hi[r]);
            if (std::fabs(residual[r] - clamped) > 1e-12) art_row.push_back(r);
        }
        num_art_ = static_cast<int>(art_row.size());
        ncols_ = ns_ + m_ + num_art_;

        T_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
        lob_.assign(ncols_, 0.0);
        hib_.assign(ncols_, 0.0);
        for (int v = 0; v < ns_; ++v) {
            lob_[v] = lp_.lo[v];
            hib_[v] = lp_.hi[v];
        }
        for (int r = 0; r < m_; ++r) {
            for (auto [v, c] : lp_.rows[r].terms) T(r, v) += c;
            T(r, ns_ + r) = 1.0;
            lob_[ns_ + r] = slack_lo[r];
            hib_[ns_ + r] = slack_hi[r];
        }

        basis_.assign(m_, -1);
        row_of_.assign(ncols_, -1);
        side_.assign(ncols_, -1);
        xb_.assign(m_, 0.0);

        std::vector<char> has_art(m_, 0);
        for (int r : art_row) has_art[r] = 1;
        int art = 0;
        for (int r = 0; r < m_; ++r) {
            double clamped = std::clamp(residual[r], slack_lo[r], slack_hi[r]);
            if (has_art[r]) {
                int col = ns_ + m_ + art++;
                double excess = residual[r] - clamped;
                T(r, col) = excess >= 0 ? 1.0 : -1.0;
                lob_[col] = 0.0;
                hib_[col] = std::fabs(excess) + 1.0;
                basis_[r] = col;
                row_of_[col] = r;
                xb_[r] = std::fabs(excess);
                side_[ns_ + r] = (slack_hi[r] > slack_lo[r] && clamped == slack_hi[r]) ? 1 : -1;
            } else {
                basis_[r] = ns_ + r;
                row_of_[ns_ + r] = r;
                xb_[r] = clamped;
            }
        }
        cost_.assign(ncols_, 0.0);
        dj_.assign(ncols_, 0.0);
    }

    void set_phase1_costs() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int a = 0; a < num_art_; ++a) cost_[ns_ + m_ + a] = -1.0;
    }
    void set_phase2_costs() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int v = 0; v < ns_; ++v) cost_[v] = lp_.objective[v];
    }

    double phase1_value() const {
        double s = 0.0;
        for (int r = 0; r < m_; ++r)
            if (basis_[r] >= ns_ + m_) s -= xb_[r];
        return s;
    }

    void freeze_artificials() {
        for (int a = 0; a < num_art_; ++a) {
            int col = ns_ + m_ + a;
            lob_[col] = hib_[col] = 0.0;
            if (row_of_[col] < 0) side_[col] = -1;
        }
    }

    void refresh_reduced_costs() {
        std::vector<double> cb(m_);
        for (int r = 0; r < m_; ++r) cb[r] = cost_[basis_[r]];
        for (int c = 0; c < ncols_; ++c) {
            if (row_of_[c] >= 0) {
                dj_[c] = 0.0;
                continue;
            }
            double d = cost_[c];
            for (int r = 0; r < m_; ++r) {
                double coef = T_[static_cast<size_t>(r) * ncols_ + c];
                if (coef != 0.0) d -= cb[r] * coef;
            }
            dj_[c] = d;
        }
    }

    void pivot(int r, int q) {
        double inv = 1.0 / T(r, q);
        double* rr = &T_[static_cast<size_t>(r) * ncols_];
        for (int c = 0; c < ncols_; ++c) rr[c] *= inv;
        rr[q] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = T(i, q);
            if (f == 0.0) continue;
            double* ri = &T_[static_cast<size_t>(i) * ncols_];
            for (int c = 0; c < ncols_; ++c) ri[c] -= f * rr[c];
            ri[q] = 0.0;
        }
        double fd = dj_[q];
        if (fd != 0.0)
            for (int c = 0; c < ncols_; ++c) dj_[c] -= fd * rr[c];
        dj_[q] = 0.0;
    }

    void optimize() {
        const double dj_tol = 1e-9;
        int stall = 0;
        bool bland = bland_;
        refresh_reduced_costs();
        for (;; ++iterations_) {
            if (iterations_ > 200000)
                throw std::runtime_error("simplex: iteration limit exceeded");
            if (iterations_ % 64 == 63) refresh_reduced_costs();

            // entering column
            int q = -1, dir = 0;
            double best = dj_tol;
            for (int c = 0; c < ncols_; ++c) {
                if (row_of_[c] >= 0 || hib_[c] - lob_[c] < 1e-300) continue;
                double d = dj_[c];
                if (side_[c] < 0 && d > dj_tol) {
                    if (bland) { q = c; dir = 1; break; }
                    if (d > best) { best = d; q = c; dir = 1; }
                } else if (side_[c] > 0 && d < -dj_tol) {
                    if (bland) { q = c; dir = -1; break; }
                    if (-d > best) { best = -d; q = c; dir = -1; }
                }
            }
            if (q < 0) return; // optimal for this phase

            // ratio test: entering moves by step >= 0 in direction dir
            double limit = hib_[q] - lob_[q]; // bound flip distance
            int leave = -1;
            double leave_to = 0.0, best_pivot = 0.0;
            for (int r = 0; r < m_; ++r) {
                double coef = dir * T(r, q);
                if (std::fabs(coef) < 1e-11) continue;
                int bcol = basis_[r];
                double room = coef > 0 ? (xb_[r] - lob_[bcol]) / coef
                                       : (xb_[r] - hib_[bcol]) / coef;
                room = std::max(room, 0.0);
                if (room < limit - 1e-12) {
                    limit = room;
                    leave = r;
                    leave_to = coef > 0 ? lob_[bcol] : hib_[bcol];
                    best_pivot = std::fabs(T(r, q));
                } else if (leave >= 0 && room <= limit + 1e-12) {
                    bool take = bland ? basis_[r] < basis_[leave]
                                      : std::fabs(T(r, q)) > best_pivot;
                    if (take) {
                        leave = r;
                        leave_to = coef > 0 ? lob_[bcol] : hib_[bcol];
                        best_pivot = std::fabs(T(r, q));
                    }
                }
            }

            if (limit < 1e-11) ++stall;
            else stall = 0;
            if (stall > 60) bland = true;

            if (leave < 0) { // bound flip, basis unchanged
                for (int r = 0; r < m_; ++r) {
                    double coef = T(r, q);
                    if (coef != 0.0) xb_[r] -= coef * dir * limit;
                }
                side_[q] = -side_[q];
                continue;
            }

            double enter_value = nonbasic_value(q) + dir * limit;
            for (int r = 0; r < m_; ++r) {
                if (r == leave) continue;
                double coef = T(r, q);
                if (coef != 0.0) xb_[r] -= coef * dir * limit;
            }
            int out_col = basis_[leave];
            row_of_[out_col] = -1;
            side_[out_col] =
                std::fabs(leave_to - lob_[out_col]) <= std::fabs(leave_to - hib_[out_col]) ? -1 : 1;
            pivot(leave, q);
            basis_[leave] = q;
            row_of_[q] = leave;
            xb_[leave] = enter_value;
        }
    }

    void extract(LpResult& out) {
        out.x.assign(ns_, 0.0);
        out.reduced_cost.assign(ns_, 0.0);
        out.at_bound.assign(ns_, 0);
        for (int v = 0; v < ns_; ++v)
            out.x[v] = row_of_[v] >= 0 ? xb_[row_of_[v]] : nonbasic_value(v);
        refresh_reduced_costs();
        for (int v = 0; v < ns_; ++v) {
            if (row_of_[v] >= 0) continue;
            out.reduced_cost[v] = dj_[v];
            out.at_bound[v] = side_[v];
        }
        double obj = 0.0;
        for (int v = 0; v < ns_; ++v) obj += lp_.objective[v] * out.x[v];
        out.objective = obj;
    }
};

inline double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& row : lp.rows) {
        double act = 0.0;
        for (auto [v, c] : row.terms) act += c * x[v];
        switch (row.rel) {
        case LinearProgram::Rel::LE: worst = std::max(worst, act - row.rhs); break;
        case LinearProgram::Rel::GE: worst = std::max(worst, row.rhs - act); break;
        case LinearProgram::Rel::EQ: worst = std::max(worst, std::fabs(act - row.rhs)); break;
        }
    }
    for (int v = 0; v < lp.num_vars; ++v) {
        worst = std::max(worst, lp.lo[v] - x[v]);
        worst = std::max(worst, x[v] - lp.hi[v]);
    }
    return worst;
}

} // namespace detail

/// Solves the LP. Optimal solutions are primal feasible to 1e-8. Numerical
/// breakdown after the Bland retry raises std::runtime_error.
inline LpResult solve_lp(const LinearProgram& lp) {
    for (int v = 0; v < lp.num_vars; ++v) {
        if (!std::isfinite(lp.lo[v]) || !std::isfinite(lp.hi[v]))
            throw std::invalid_argument("solve_lp: all variable bounds must be finite");
        if (lp.lo[v] > lp.hi[v] + 1e-12) {
            LpResult r;
            r.status = LpStatus::Infeasible;
            return r;
        }
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
        LpResult res;
        try {
            detail::SimplexTableau tableau(lp, attempt == 1);
            res.status = tableau.run(res);
        } catch (const std::runtime_error&) {
            if (attempt == 1) throw;
            continue;
        }
        if (res.status == LpStatus::Infeasible) return res;
        if (detail::max_violation(lp, res.x) <= 1e-8) return res;
        if (attempt == 1)
            throw std::runtime_error("solve_lp: residual too large after Bland retry");
    }
    throw std::runtime_error("solve_lp: unreachable");
}

} // namespace heilbronn::relax
