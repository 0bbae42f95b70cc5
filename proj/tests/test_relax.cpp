#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "heilbronn/model.hpp"
#include "heilbronn/relax.hpp"

using namespace heilbronn;
using relax::IntervalD;
using relax::LinearProgram;
using relax::LpStatus;

namespace {
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Feasible w range at a fixed (x, y) according to the four envelope rows.
std::pair<double, double> envelope_range(const std::array<relax::McCormickRow, 4>& rows,
                                         double x, double y) {
    double lo = -1e300, hi = 1e300;
    for (const auto& r : rows) {
        double rest = r.rhs - r.cx * x - r.cy * y;
        if (r.cw > 0) hi = std::min(hi, rest / r.cw);
        else lo = std::max(lo, rest / r.cw);
    }
    return {lo, hi};
}
} // namespace

TEST_CASE("mccormick rows on the unit box") {
    auto rows = relax::mccormick_rows({0, 1}, {0, 1});
    // w >= 0, w >= x+y-1, w <= y, w <= x
    CHECK(rows[0].cw == -1.0);
    CHECK(rows[0].rhs == 0.0);
    CHECK(rows[1].cx == 1.0);
    CHECK(rows[1].cy == 1.0);
    CHECK(rows[1].rhs == 1.0);

    auto [lo_mid, hi_mid] = envelope_range(rows, 0.5, 0.5);
    CHECK_THAT(lo_mid, Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(hi_mid, Catch::Matchers::WithinAbs(0.5, 1e-15));

    CHECK_THROWS_AS(relax::mccormick_rows({1, 0}, {0, 1}), std::invalid_argument);
}

TEST_CASE("mccormick envelope gap peaks at the box center") {
    auto rows = relax::mccormick_rows({0, 1}, {0, 1});
    double max_gap = 0.0;
    for (int a = 0; a <= 100; ++a)
        for (int b = 0; b <= 100; ++b) {
            auto [lo, hi] = envelope_range(rows, a / 100.0, b / 100.0);
            max_gap = std::max(max_gap, hi - lo);
        }
    CHECK_THAT(max_gap, Catch::Matchers::WithinAbs(0.25, 1e-12));
}

TEST_CASE("degenerate x interval pins the product") {
    const double a = 0.3125;
    auto rows = relax::mccormick_rows({a, a}, {0, 1});
    for (double y : {0.0, 0.25, 0.7, 1.0}) {
        auto [lo, hi] = envelope_range(rows, a, y);
        CHECK_THAT(lo, Catch::Matchers::WithinAbs(a * y, 1e-12));
        CHECK_THAT(hi, Catch::Matchers::WithinAbs(a * y, 1e-12));
    }
}

TEST_CASE("envelope containment over random boxes") {
    std::mt19937_64 rng(51);
    int samples = 0;
    while (samples < 100000) {
        double xl = uniform01(rng), xu = xl + uniform01(rng) * (1 - xl);
        double yl = uniform01(rng), yu = yl + uniform01(rng) * (1 - yl);
        auto rows = relax::mccormick_rows({xl, xu}, {yl, yu});
        for (int s = 0; s < 20; ++s, ++samples) {
            double x = xl + uniform01(rng) * (xu - xl);
            double y = yl + uniform01(rng) * (yu - yl);
            double w = x * y;
            for (const auto& r : rows)
                CHECK(r.cw * w + r.cx * x + r.cy * y <= r.rhs + 1e-12);
        }
        // corners are exact
        for (double cx : {xl, xu})
            for (double cy : {yl, yu}) {
                auto [lo, hi] = envelope_range(rows, cx, cy);
                CHECK_THAT(hi - lo, Catch::Matchers::WithinAbs(0.0, 1e-12));
            }
    }
}

TEST_CASE("sign coupling linearization") {
    auto fixed1 = relax::linearize_sign_coupling(relax::kCanOne, {-0.5, 0.5});
    REQUIRE(fixed1.rows.size() == 1);
    CHECK_FALSE(fixed1.uses_u);
    CHECK(fixed1.rows[0].cz == 1.0);
    CHECK(fixed1.rows[0].cA == -1.0);

    auto fixed0 = relax::linearize_sign_coupling(relax::kCanZero, {-0.5, 0.5});
    REQUIRE(fixed0.rows.size() == 1);
    CHECK(fixed0.rows[0].cA == 1.0);

    auto free = relax::linearize_sign_coupling(relax::kCanZero | relax::kCanOne, {-0.5, 0.5});
    CHECK(free.uses_u);
    REQUIRE(free.rows.size() == 5);

    // every point feasible for either sign branch satisfies the relaxation
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 1000; ++trial) {
        double A = uniform01(rng) - 0.5;
        int b = rng() % 2;
        double z = uniform01(rng) * std::max(0.0, (2 * b - 1) * A);
        double u = b * A;
        for (const auto& r : free.rows)
            CHECK(r.cz * z + r.cb * b + r.cA * A + r.cu * u <= r.rhs + 1e-12);
    }
}

TEST_CASE("lp solver on tiny programs") {
    LinearProgram lp;
    int x = lp.add_var(0, 1);
    int z = lp.add_var(0, 1, 1.0);
    lp.add_row({{{z, 1.0}, {x, -1.0}}, LinearProgram::Rel::LE, 0.0}); // z <= x
    lp.add_row({{{z, 1.0}, {x, 1.0}}, LinearProgram::Rel::LE, 1.0});  // z <= 1 - x
    auto res = relax::solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(0.5, 1e-9));
    CHECK_THAT(res.x[x], Catch::Matchers::WithinAbs(0.5, 1e-9));

    LinearProgram bad;
    int v = bad.add_var(0, 1);
    bad.add_row({{{v, 1.0}}, LinearProgram::Rel::GE, 0.7});
    bad.add_row({{{v, 1.0}}, LinearProgram::Rel::LE, 0.3});
    CHECK(relax::solve_lp(bad).status == LpStatus::Infeasible);
}

TEST_CASE("lp solver against constructed optima") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        LinearProgram lp;
        const int k = 6;
        std::vector<double> c(k), xstar(k);
        for (int v = 0; v < k; ++v) {
            c[v] = 2.0 * uniform01(rng) - 1.0;
            lp.add_var(0, 1, c[v]);
            xstar[v] = c[v] > 0 ? 1.0 : 0.0;
        }
        double expected = 0.0;
        for (int v = 0; v < k; ++v) expected += c[v] * xstar[v];
        // rows kept slack at the box optimum do not change it
        for (int r = 0; r < 8; ++r) {
            LinearProgram::Row row;
            double act = 0.0;
            for (int v = 0; v < k; ++v) {
                double a = 2.0 * uniform01(rng) - 1.0;
                row.terms.push_back({v, a});
                act += a * xstar[v];
            }
            row.rhs = act + 0.1 + uniform01(rng);
            lp.add_row(std::move(row));
        }
        auto res = relax::solve_lp(lp);
        REQUIRE(res.status == LpStatus::Optimal);
        CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(expected, 1e-7));
    }

    // fractional matching on six variables: optimum is exactly 3
    LinearProgram match;
    for (int v = 0; v < 6; ++v) match.add_var(0, 1, 1.0);
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            match.add_row({{{i, 1.0}, {j, 1.0}}, LinearProgram::Rel::LE, 1.0});
    auto res = relax::solve_lp(match);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(3.0, 1e-8));
}

TEST_CASE("lp solver handles equality rows") {
    LinearProgram lp;
    int a = lp.add_var(0, 2, 1.0);
    int b = lp.add_var(0, 2, 1.0);
    lp.add_row({{{a, 1.0}, {b, 1.0}}, LinearProgram::Rel::EQ, 1.5});
    lp.add_row({{{a, 1.0}, {b, -1.0}}, LinearProgram::Rel::LE, 0.5});
    auto res = relax::solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(1.5, 1e-9));
}

TEST_CASE("root relaxation of the final five-point model") {
    auto m = model::build_final(5, 0.5);
    auto nb = relax::fbbt(m, relax::root_bounds(m));
    REQUIRE_FALSE(nb.infeasible);
    auto node = relax::build_node_lp(m, nb);
    auto res = relax::solve_lp(node.lp);
    REQUIRE(res.status == LpStatus::Optimal);
    const double delta5 = std::sqrt(3.0) / 9.0;
    CHECK(res.objective >= delta5 - 1e-9); // upper bound on the optimal value
    CHECK(res.objective <= 0.5 + 1e-9);
    // regression anchor, recorded from the first validated run
    CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("fbbt collapses to exact areas at a point") {
    auto m = model::build_baseline(5);
    auto nb = relax::root_bounds(m);
    std::mt19937_64 rng(61);
    std::vector<geom::Point> pts(5);
    for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
    auto cfg = geom::make_configuration(pts);
    for (int i = 1; i <= 5; ++i) {
        nb.x[i] = IntervalD::point(cfg.point(i).x);
        nb.y[i] = IntervalD::point(cfg.point(i).y);
    }
    nb = relax::fbbt(m, nb);
    REQUIRE_FALSE(nb.infeasible);
    for (size_t ti = 0; ti < m.triangles.size(); ++ti) {
        double exact = geom::signed_area(cfg, m.triangles[ti]);
        CHECK(nb.A[ti].width() < 1e-10);
        CHECK(nb.A[ti].lo <= exact + 1e-10);
        CHECK(nb.A[ti].hi >= exact - 1e-10);
    }
}

TEST_CASE("fbbt detects an ordering conflict") {
    auto m = model::build_final(6, 0.2);
    auto nb = relax::root_bounds(m);
    nb.x[2] = {0.6, 1.0};
    nb.x[4] = {0.0, 0.5};
    nb = relax::fbbt(m, nb);
    CHECK(nb.infeasible);
}

TEST_CASE("fbbt tightens coordinates from an objective bound") {
    auto m = model::build_final(5, 0.5);
    auto nb = relax::root_bounds(m);
    nb.z.lo = 0.19;
    nb = relax::fbbt(m, nb);
    REQUIRE_FALSE(nb.infeasible);
    CHECK(nb.y[1].hi < 1.0 - 1e-6); // strictly below the top edge
}

TEST_CASE("fbbt keeps feasible assignments feasible") {
    std::mt19937_64 rng(67);
    auto m = model::build_final(5, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        double y1 = uniform01(rng), y5 = uniform01(rng);
        if (y1 > y5) std::swap(y1, y5);
        double x2 = uniform01(rng), x4 = uniform01(rng);
        if (x2 > x4) std::swap(x2, x4);
        auto cfg = geom::make_configuration(
            {{0, y1}, {x2, 0}, {1, uniform01(rng)}, {x4, 1}, {0, y5}});
        auto a = model::embed(m, cfg);
        if (!model::check_feasible(m, a).empty()) continue;
        auto nb = relax::fbbt(m, relax::root_bounds(m));
        REQUIRE_FALSE(nb.infeasible);
        for (int i = 1; i <= 5; ++i) {
            CHECK(nb.x[i].contains(a.x[i]));
            CHECK(nb.y[i].contains(a.y[i]));
        }
        for (size_t p = 0; p < m.w_pairs.size(); ++p) CHECK(nb.w[p].contains(a.w[p]));
        for (size_t ti = 0; ti < m.triangles.size(); ++ti)
            CHECK(nb.A[ti].lo - 1e-12 <= a.A[ti]);
        CHECK(a.z <= nb.z.hi + 1e-12);
    }
}
