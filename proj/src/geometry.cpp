#include "kiri/geometry.hpp"

#include <cmath>

namespace kiri {

double polygon_signed_area(const Polygon& poly) {
    double a = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

bool point_in_polygon(const Eigen::Vector2d& p, const Polygon& poly) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

bool point_in_polygons(const Eigen::Vector2d& p, const std::vector<Polygon>& polys) {
    for (const auto& poly : polys)
        if (point_in_polygon(p, poly)) return true;
    return false;
}

namespace {

bool segments_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
    auto cross = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
        return u.x() * v.y() - u.y() * v.x();
    };
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

bool polygon_is_simple(const Polygon& poly) {
    const size_t n = poly.size();
    if (n < 3) return false;
    if (std::abs(polygon_signed_area(poly)) <= 0.0) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent segments (sharing an endpoint)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

Polygon clip_polygon_convex(const Polygon& subject, const Polygon& clip) {
    Polygon output = subject;
    const size_t m = clip.size();
    for (size_t i = 0; i < m && !output.empty(); ++i) {
        const Eigen::Vector2d a = clip[i];
        const Eigen::Vector2d b = clip[(i + 1) % m];
        const Eigen::Vector2d edge = b - a;
        auto inside = [&](const Eigen::Vector2d& p) {
            return edge.x() * (p.y() - a.y()) - edge.y() * (p.x() - a.x()) >= 0.0;
        };
        Polygon input;
        input.swap(output);
        const size_t n = input.size();
        for (size_t j = 0; j < n; ++j) {
            const Eigen::Vector2d& p = input[j];
            const Eigen::Vector2d& q = input[(j + 1) % n];
            const bool pin = inside(p), qin = inside(q);
            if (pin) output.push_back(p);
            if (pin != qin) {
                // intersection of pq with the clip line through a,b
                const double denom = edge.x() * (q.y() - p.y()) - edge.y() * (q.x() - p.x());
                const double t = (edge.x() * (a.y() - p.y()) - edge.y() * (a.x() - p.x())) / denom;
                output.push_back(p + t * (q - p));
            }
        }
    }
    return output;
}

Polygon make_cross_polygon(double arm_length, double arm_width) {
    const double l = 0.5 * arm_length;
    const double w = 0.5 * arm_width;
    return Polygon{{l, -w},  {l, w},   {w, w},   {w, l},   {-w, l},  {-w, w},
                   {-l, w},  {-l, -w}, {-w, -w}, {-w, -l}, {w, -l},  {w, -w}};
}

Polygon make_square_polygon(double side) {
    const double h = 0.5 * side;
    return Polygon{{h, -h}, {h, h}, {-h, h}, {-h, -h}};
}

Polygon make_circle_polygon(double radius, int segments) {
    Polygon poly;
    poly.reserve(segments);
    for (int i = 0; i < segments; ++i) {
        const double t = 2.0 * M_PI * i / segments;
        poly.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
    return poly;
}

std::vector<Polygon> make_lobe_polygons(int count, double lobe_length, double lobe_width,
                                        int segments_per_lobe) {
    if (count < 1) throw GeometryError("lobes: count must be >= 1");
    std::vector<Polygon> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double phi = 2.0 * M_PI * k / count;
        const double c = std::cos(phi), s = std::sin(phi);
        Polygon lobe;
        lobe.reserve(segments_per_lobe);
        for (int i = 0; i < segments_per_lobe; ++i) {
            const double t = 2.0 * M_PI * i / segments_per_lobe;
            // ellipse with semi-axes (lobe_length/2, lobe_width/2), centered a
            // half-length out from the origin
            const double x = 0.5 * lobe_length + 0.5 * lobe_length * std::cos(t);
            const double y = 0.5 * lobe_width * std::sin(t);
            lobe.emplace_back(c * x - s * y, s * x + c * y);
        }
        out.push_back(std::move(lobe));
    }
    return out;
}

SubstrateShape SubstrateShape::square(double side) {
    if (!(side > 0.0)) throw GeometryError("substrate square: side must be > 0");
    SubstrateShape s;
    s.kind = Kind::Square;
    s.side = side;
    return s;
}

SubstrateShape SubstrateShape::circle(double radius) {
    if (!(radius > 0.0)) throw GeometryError("substrate circle: radius must be > 0");
    SubstrateShape s;
    s.kind = Kind::Circle;
    s.radius = radius;
    return s;
}

Polygon SubstrateShape::boundary(int circle_segments) const {
    return kind == Kind::Square ? make_square_polygon(side)
                                : make_circle_polygon(radius, circle_segments);
}

double SubstrateShape::area() const {
    return kind == Kind::Square ? side * side
                                : std::abs(polygon_signed_area(make_circle_polygon(radius)));
}

double SubstrateShape::extent() const { return kind == Kind::Square ? 0.5 * side : radius; }

KirigamiPattern KirigamiPattern::cross(double arm_length, double arm_width) {
    KirigamiPattern p;
    p.kind = Kind::Cross;
    p.arm_length = arm_length;
    p.arm_width = arm_width;
    p.validate();
    return p;
}

KirigamiPattern KirigamiPattern::lobes(int count, double lobe_length, double lobe_width) {
    KirigamiPattern p;
    p.kind = Kind::Lobes;
    p.polygons = make_lobe_polygons(count, lobe_length, lobe_width);
    p.validate();
    return p;
}

KirigamiPattern KirigamiPattern::custom(std::vector<Polygon> polys) {
    KirigamiPattern p;
    p.kind = Kind::Custom;
    p.polygons = std::move(polys);
    p.validate();
    return p;
}

KirigamiPattern KirigamiPattern::empty() {
    KirigamiPattern p;
    p.kind = Kind::Empty;
    return p;
}

std::vector<Polygon> KirigamiPattern::outlines() const {
    switch (kind) {
        case Kind::Cross:
            return {make_cross_polygon(arm_length, arm_width)};
        case Kind::Lobes:
        case Kind::Custom:
            return polygons;
        case Kind::Empty:
            return {};
    }
    return {};
}

void KirigamiPattern::validate() const {
    if (kind == Kind::Cross) {
        if (!(arm_width > 0.0 && arm_width <= arm_length))
            throw GeometryError("cross pattern requires 0 < arm_width <= arm_length");
        return;
    }
    for (const auto& poly : polygons) {
        if (!polygon_is_simple(poly))
            throw GeometryError("pattern polygon is degenerate or self-intersecting");
        if (polygon_signed_area(poly) < 0.0)
            throw GeometryError("pattern polygon must be counter-clockwise");
    }
}

double coverage_fraction(const KirigamiPattern& pattern, const SubstrateShape& substrate) {
    pattern.validate();
    const Polygon bound = substrate.boundary();
    double covered = 0.0;
    for (const auto& poly : pattern.outlines()) {
        const Polygon clipped = clip_polygon_convex(poly, bound);
        if (clipped.size() >= 3) covered += std::abs(polygon_signed_area(clipped));
    }
    const double total = std::abs(polygon_signed_area(bound));
    return std::min(1.0, covered / total);
}

}  // namespace kiri
