#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

namespace kiri {

using Polygon = std::vector<Eigen::Vector2d>;  // closed, simple, CCW loop

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Signed shoelace area; positive for CCW loops.
double polygon_signed_area(const Polygon& poly);

/// Even-odd point-in-polygon test.
bool point_in_polygon(const Eigen::Vector2d& p, const Polygon& poly);
bool point_in_polygons(const Eigen::Vector2d& p, const std::vector<Polygon>& polys);

/// True if the loop is simple (no self-intersections) and has nonzero area.
bool polygon_is_simple(const Polygon& poly);

/// Sutherland-Hodgman clip of `subject` against a convex CCW `clip` polygon.
Polygon clip_polygon_convex(const Polygon& subject, const Polygon& clip);

/// Cross: union of two axis-aligned rectangles arm_length x arm_width centered
/// at the origin, as a single 12-gon.
Polygon make_cross_polygon(double arm_length, double arm_width);

Polygon make_square_polygon(double side);
Polygon make_circle_polygon(double radius, int segments = 256);

/// k elliptical lobes of the given length/width radiating from the origin.
std::vector<Polygon> make_lobe_polygons(int count, double lobe_length, double lobe_width,
                                        int segments_per_lobe = 64);

struct SubstrateShape {
    enum class Kind { Square, Circle } kind = Kind::Square;
    double side = 0.0;    // square
    double radius = 0.0;  // circle

    static SubstrateShape square(double side);
    static SubstrateShape circle(double radius);

    Polygon boundary(int circle_segments = 256) const;
    double area() const;
    double extent() const;  // bounding half-size
};

struct KirigamiPattern {
    enum class Kind { Cross, Lobes, Custom, Empty } kind = Kind::Empty;
    double arm_length = 0.0;  // cross
    double arm_width = 0.0;   // cross
    std::vector<Polygon> polygons;  // lobes / custom

    static KirigamiPattern cross(double arm_length, double arm_width);
    static KirigamiPattern lobes(int count, double lobe_length, double lobe_width);
    static KirigamiPattern custom(std::vector<Polygon> polys);
    static KirigamiPattern empty();

    /// Pattern outline(s) as polygon loops. Assumed pairwise disjoint.
    std::vector<Polygon> outlines() const;
    void validate() const;
};

/// Area fraction of the substrate covered by the pattern, by exact polygon
/// clipping (circle approximated by a 256-gon).
double coverage_fraction(const KirigamiPattern& pattern, const SubstrateShape& substrate);

}  // namespace kiri
