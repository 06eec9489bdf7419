#include "iaspa/geometry.hpp"

#include <algorithm>

namespace iaspa {

double Polygon::signed_area() const {
    double a = 0.0;
    const std::size_t n = pts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts_[i];
        const Vec2& q = pts_[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

void Polygon::normalize_orientation() {
    if (signed_area() < 0.0) std::reverse(pts_.begin(), pts_.end());
}

namespace {

// Proper or touching intersection between segments [p,p+r] and [q,q+s].
bool segments_intersect(Vec2 p, Vec2 r, Vec2 q, Vec2 s) {
    const double rxs = cross(r, s);
    const Vec2 qp = q - p;
    if (rxs == 0.0) {
        if (cross(qp, r) != 0.0) return false;  // parallel, non-collinear
        // Collinear: overlap test on the dominant axis.
        const double rr = dot(r, r);
        if (rr == 0.0) return false;
        double t0 = dot(qp, r) / rr;
        double t1 = t0 + dot(s, r) / rr;
        if (t0 > t1) std::swap(t0, t1);
        return t1 >= 0.0 && t0 <= 1.0;
    }
    const double t = cross(qp, s) / rxs;
    const double u = cross(qp, r) / rxs;
    return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

}  // namespace

bool Polygon::is_self_intersecting() const {
    const std::size_t n = pts_.size();
    if (n < 4) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 pi = pts_[i];
        const Vec2 ri = pts_[(i + 1) % n] - pi;
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (shared vertex).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            const Vec2 pj = pts_[j];
            const Vec2 rj = pts_[(j + 1) % n] - pj;
            if (segments_intersect(pi, ri, pj, rj)) return true;
        }
    }
    return false;
}

bool Polygon::contains(Vec2 p) const {
    const std::size_t n = pts_.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = pts_[i];
        const Vec2& b = pts_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

std::vector<std::pair<double, double>> Polygon::segment_inside_intervals(Vec2 a, Vec2 b) const {
    std::vector<std::pair<double, double>> out;
    const std::size_t n = pts_.size();
    if (n < 3) return out;

    const Vec2 r = b - a;
    const double rr = dot(r, r);
    if (rr == 0.0) {
        // Degenerate segment: inside or not as a point.
        if (contains(a)) out.emplace_back(0.0, 1.0);
        return out;
    }

    std::vector<double> ts;
    ts.reserve(n + 2);
    ts.push_back(0.0);
    ts.push_back(1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 q = pts_[i];
        const Vec2 s = pts_[(i + 1) % n] - q;
        const double rxs = cross(r, s);
        const Vec2 qa = q - a;
        if (rxs != 0.0) {
            const double t = cross(qa, s) / rxs;
            const double u = cross(qa, r) / rxs;
            if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
        } else if (cross(qa, r) == 0.0) {
            // Edge collinear with the segment: its endpoints bound grazing runs.
            const double t0 = dot(qa, r) / rr;
            const double t1 = t0 + dot(s, r) / rr;
            for (double t : {t0, t1})
                if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());

    // Classify each sub-interval by its midpoint; merge adjacent inside runs.
    double run_start = -1.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double t0 = ts[i], t1 = ts[i + 1];
        if (t1 - t0 <= 0.0) continue;
        const double tm = 0.5 * (t0 + t1);
        const bool in = contains(a + tm * r);
        if (in && run_start < 0.0) run_start = t0;
        if (!in && run_start >= 0.0) {
            out.emplace_back(run_start, t0);
            run_start = -1.0;
        }
    }
    if (run_start >= 0.0) out.emplace_back(run_start, 1.0);
    return out;
}

}  // namespace iaspa
