#pragma once

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

namespace iaspa {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Rect {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    bool contains(Vec2 p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

/// Simple polygon, vertices in counter-clockwise order once normalized.
class Polygon {
  public:
    Polygon() = default;
    explicit Polygon(std::vector<Vec2> vertices) : pts_(std::move(vertices)) {}

    const std::vector<Vec2>& vertices() const { return pts_; }
    std::size_t size() const { return pts_.size(); }

    /// Positive for counter-clockwise orientation.
    double signed_area() const;

    /// Reverses the vertex order if the polygon is clockwise.
    void normalize_orientation();

    /// True if any two non-adjacent edges intersect.
    bool is_self_intersecting() const;

    /// Even-odd (crossing number) containment test. Points exactly on an
    /// edge are classified by ray parity; callers that care use interior
    /// points.
    bool contains(Vec2 p) const;

    /// Parameter intervals [t0,t1] of the segment a + t*(b - a), t in [0,1],
    /// that lie inside the polygon. Intervals are disjoint and ascending.
    std::vector<std::pair<double, double>> segment_inside_intervals(Vec2 a, Vec2 b) const;

  private:
    std::vector<Vec2> pts_;
};

struct Ellipse {
    Vec2 center;
    double semi_a = 1.0;   // semi-axis along the rotated x direction
    double semi_b = 1.0;   // semi-axis along the rotated y direction
    double angle_rad = 0;  // rotation of the axes, counter-clockwise

    bool contains(Vec2 p) const {
        const double c = std::cos(angle_rad), s = std::sin(angle_rad);
        const double dx = p.x - center.x, dy = p.y - center.y;
        const double u = c * dx + s * dy;
        const double v = -s * dx + c * dy;
        return (u / semi_a) * (u / semi_a) + (v / semi_b) * (v / semi_b) <= 1.0;
    }
};

using ExclusionZone = std::variant<Polygon, Ellipse>;

inline bool zone_contains(const ExclusionZone& z, Vec2 p) {
    return std::visit([&](const auto& shape) { return shape.contains(p); }, z);
}

}  // namespace iaspa
