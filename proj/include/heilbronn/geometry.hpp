#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heilbronn::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Ordered triple of 1-based point indices, i < j < k.
struct TriangleId {
    int i = 0, j = 0, k = 0;

    friend bool operator==(const TriangleId&, const TriangleId&) = default;
    friend auto operator<=>(const TriangleId&, const TriangleId&) = default;
};

inline std::string to_string(const TriangleId& t) {
    return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + ")";
}

/// n points in the closed unit square, 1-indexed through point(i).
struct Configuration {
    std::vector<Point> points;

    int n() const { return static_cast<int>(points.size()); }
    const Point& point(int i) const { return points[static_cast<size_t>(i) - 1]; }
    Point& point(int i) { return points[static_cast<size_t>(i) - 1]; }
};

constexpr double kCoordinateTol = 1e-9;

/// Validates n >= 3 and containment in [0,1]^2 up to 1e-9.
inline Configuration make_configuration(std::vector<Point> pts) {
    if (pts.size() < 3)
        throw std::invalid_argument("Configuration: need at least 3 points, got " +
                                    std::to_string(pts.size()));
    for (size_t m = 0; m < pts.size(); ++m) {
        auto ok = [](double c) { return c >= -kCoordinateTol && c <= 1.0 + kCoordinateTol; };
        if (!ok(pts[m].x) || !ok(pts[m].y))
            throw std::invalid_argument("Configuration: point " + std::to_string(m + 1) +
                                        " outside the unit square");
    }
    return Configuration{std::move(pts)};
}

inline std::vector<TriangleId> all_triangles(int n) {
    std::vector<TriangleId> out;
    out.reserve(static_cast<size_t>(n) * (n - 1) * (n - 2) / 6);
    for (int i = 1; i <= n - 2; ++i)
        for (int j = i + 1; j <= n - 1; ++j)
            for (int k = j + 1; k <= n; ++k) out.push_back({i, j, k});
    return out;
}

/// Signed area of the (ordered) triangle abc; positive iff counterclockwise.
inline double signed_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

inline void check_triangle(const Configuration& cfg, const TriangleId& t) {
    if (t.i < 1 || t.i >= t.j || t.j >= t.k || t.k > cfg.n())
        throw std::invalid_argument("invalid triangle " + to_string(t) + " for n=" +
                                    std::to_string(cfg.n()));
}

inline double signed_area(const Configuration& cfg, const TriangleId& t) {
    check_triangle(cfg, t);
    return signed_area(cfg.point(t.i), cfg.point(t.j), cfg.point(t.k));
}

/// Minimum |signed area| over all triangles and the lexicographically
/// smallest id attaining it.
inline std::pair<double, TriangleId> min_triangle_area(const Configuration& cfg) {
    if (cfg.n() < 3) throw std::invalid_argument("min_triangle_area: fewer than 3 points");
    double best = std::numeric_limits<double>::infinity();
    TriangleId arg{};
    for (int i = 1; i <= cfg.n() - 2; ++i)
        for (int j = i + 1; j <= cfg.n() - 1; ++j)
            for (int k = j + 1; k <= cfg.n(); ++k) {
                double a = std::fabs(signed_area(cfg.point(i), cfg.point(j), cfg.point(k)));
                if (a < best) {
                    best = a;
                    arg = {i, j, k};
                }
            }
    return {best, arg};
}

/// All C(n,3) absolute areas in ascending order; ties keep triangle-id order.
struct AreaDistribution {
    std::vector<std::pair<TriangleId, double>> entries;
    double min_area = 0.0;
};

inline AreaDistribution area_distribution(const Configuration& cfg) {
    if (cfg.n() < 3) throw std::invalid_argument("area_distribution: fewer than 3 points");
    AreaDistribution d;
    for (const auto& t : all_triangles(cfg.n()))
        d.entries.emplace_back(t, std::fabs(signed_area(cfg, t)));
    std::sort(d.entries.begin(), d.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    d.min_area = d.entries.front().second;
    return d;
}

/// The eight symmetries of the unit square.
enum class D4 : uint8_t {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    MirrorX,        // (x,y) -> (1-x, y)
    MirrorY,        // (x,y) -> (x, 1-y)
    Diagonal,       // (x,y) -> (y, x)
    AntiDiagonal,   // (x,y) -> (1-y, 1-x)
};

constexpr std::array<D4, 8> kD4Elements = {D4::Identity, D4::Rot90,   D4::Rot180,   D4::Rot270,
                                           D4::MirrorX,  D4::MirrorY, D4::Diagonal, D4::AntiDiagonal};

inline Point apply_symmetry(const Point& p, D4 g) {
    switch (g) {
    case D4::Identity:     return p;
    case D4::Rot90:        return {1.0 - p.y, p.x};
    case D4::Rot180:       return {1.0 - p.x, 1.0 - p.y};
    case D4::Rot270:       return {p.y, 1.0 - p.x};
    case D4::MirrorX:      return {1.0 - p.x, p.y};
    case D4::MirrorY:      return {p.x, 1.0 - p.y};
    case D4::Diagonal:     return {p.y, p.x};
    case D4::AntiDiagonal: return {1.0 - p.y, 1.0 - p.x};
    }
    throw std::logic_error("apply_symmetry: unreachable");
}

inline Configuration apply_symmetry(const Configuration& cfg, D4 g) {
    Configuration out = cfg;
    for (auto& p : out.points) p = apply_symmetry(p, g);
    return out;
}

struct AreaCluster {
    double level = 0.0; // mean of the cluster's areas
    int multiplicity = 0;
};

/// Groups the sorted areas into clusters, starting a new cluster whenever the
/// gap to the previous area exceeds rel_gap relative to it.
inline std::vector<AreaCluster> cluster_areas(const AreaDistribution& dist, double rel_gap = 1e-3) {
    if (dist.entries.empty()) throw std::invalid_argument("cluster_areas: empty distribution");
    if (!(rel_gap > 0.0)) throw std::invalid_argument("cluster_areas: rel_gap must be positive");
    std::vector<AreaCluster> out;
    double sum = dist.entries.front().second;
    int count = 1;
    for (size_t m = 1; m < dist.entries.size(); ++m) {
        double prev = dist.entries[m - 1].second;
        double cur = dist.entries[m].second;
        if ((cur - prev) / std::max(prev, 1e-12) > rel_gap) {
            out.push_back({sum / count, count});
            sum = 0.0;
            count = 0;
        }
        sum += cur;
        ++count;
    }
    out.push_back({sum / count, count});
    return out;
}

} // namespace heilbronn::geom
