#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "kiri/geometry.hpp"

namespace kiri {

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Interior edge shared by exactly two faces.
struct Hinge {
    int v0 = -1, v1 = -1;  // edge endpoints
    int va = -1, vb = -1;  // opposite vertices of the two adjacent faces
    int f0 = -1, f1 = -1;
};

/// Triangulated mid-surface. The vertex positions are the planar bonded
/// (stretched) configuration; rest metrics carry the layer mismatch.
struct TriMesh {
    std::vector<Eigen::Vector3d> vertices;        // mm, z = 0 as generated
    std::vector<std::array<int, 3>> faces;        // CCW
    std::vector<Hinge> hinges;
    std::vector<char> face_covered;               // inside the pattern footprint
    std::vector<Eigen::Matrix2d> rest_metric_substrate;  // per face, edge basis
    std::vector<Eigen::Matrix2d> rest_metric_face;       // per face, edge basis
    double prestretch = 1.0;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }

    /// Planar metric of a face in its edge basis, from current vertices.
    Eigen::Matrix2d planar_metric(int face) const;
    double face_area(int face) const;
    double covered_area_fraction() const;
    double min_angle_deg() const;
    int euler_characteristic() const;
};

/// Structured triangulation of the substrate footprint. Faces whose centroid
/// lies inside the pattern get face_covered = true. The grid is mirror
/// symmetric about the coordinate axes.
TriMesh generate_mesh(const KirigamiPattern& pattern, const SubstrateShape& substrate,
                      double target_edge_length);

/// Set per-face rest metrics for prestretch lambda: substrate rest metric is
/// planar/lambda^2 everywhere, face-layer rest metric equals the planar metric
/// on covered faces.
void assign_rest_metrics(TriMesh& mesh, double lambda);

/// Wavefront OBJ export (v/f records, 1-based indices).
void export_obj(std::ostream& os, const std::vector<Eigen::Vector3d>& positions,
                const std::vector<std::array<int, 3>>& faces);
void export_obj_file(const std::string& path, const std::vector<Eigen::Vector3d>& positions,
                     const std::vector<std::array<int, 3>>& faces);

/// Pattern outlines as CSV point lists (polygon_index,x_mm,y_mm).
void export_outline_csv(std::ostream& os, const std::vector<Polygon>& outlines);

}  // namespace kiri
