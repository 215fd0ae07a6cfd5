#include "kiri/mesh.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace kiri {

Eigen::Matrix2d TriMesh::planar_metric(int face) const {
    const auto& f = faces[face];
    const Eigen::Vector3d e1 = vertices[f[1]] - vertices[f[0]];
    const Eigen::Vector3d e2 = vertices[f[2]] - vertices[f[0]];
    Eigen::Matrix2d g;
    g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
    return g;
}

double TriMesh::face_area(int face) const {
    const auto& f = faces[face];
    const Eigen::Vector3d e1 = vertices[f[1]] - vertices[f[0]];
    const Eigen::Vector3d e2 = vertices[f[2]] - vertices[f[0]];
    return 0.5 * e1.cross(e2).norm();
}

double TriMesh::covered_area_fraction() const {
    double covered = 0.0, total = 0.0;
    for (int i = 0; i < face_count(); ++i) {
        const double a = face_area(i);
        total += a;
        if (face_covered[i]) covered += a;
    }
    return total > 0.0 ? covered / total : 0.0;
}

double TriMesh::min_angle_deg() const {
    double best = 180.0;
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3d a = vertices[f[(k + 1) % 3]] - vertices[f[k]];
            const Eigen::Vector3d b = vertices[f[(k + 2) % 3]] - vertices[f[k]];
            const double ang = std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / M_PI;
            best = std::min(best, ang);
        }
    }
    return best;
}

int TriMesh::euler_characteristic() const {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    return vertex_count() - static_cast<int>(edges.size()) + face_count();
}

namespace {

void build_hinges(TriMesh& mesh) {
    struct Adj {
        int face, opp;
        bool forward;  // face traverses the edge as (v0 -> v1) with v0 < v1
    };
    std::map<std::pair<int, int>, std::vector<Adj>> edge_faces;
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto& f = mesh.faces[fi];
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3], opp = f[(k + 2) % 3];
            edge_faces[{std::min(a, b), std::max(a, b)}].push_back({fi, opp, a < b});
        }
    }
    mesh.hinges.clear();
    for (const auto& [edge, adj] : edge_faces) {
        if (adj.size() > 2) throw GeometryError("generate_mesh produced a non-manifold edge");
        if (adj.size() != 2) continue;
        if (adj[0].forward == adj[1].forward)
            throw GeometryError("generate_mesh produced inconsistently oriented faces");
        const Adj& fwd = adj[0].forward ? adj[0] : adj[1];
        const Adj& bwd = adj[0].forward ? adj[1] : adj[0];
        Hinge h;
        h.v0 = edge.first;
        h.v1 = edge.second;
        h.f0 = fwd.face;   // opposite vertex va lies left of v0 -> v1
        h.va = fwd.opp;
        h.f1 = bwd.face;
        h.vb = bwd.opp;
        mesh.hinges.push_back(h);
    }
}

void mark_coverage(TriMesh& mesh, const KirigamiPattern& pattern) {
    const auto outlines = pattern.outlines();
    mesh.face_covered.assign(mesh.face_count(), 0);
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto& f = mesh.faces[fi];
        const Eigen::Vector3d c =
            (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
        if (point_in_polygons({c.x(), c.y()}, outlines)) mesh.face_covered[fi] = 1;
    }
}

// Structured grid with diagonals alternating by cell parity. The node set is
// mirror symmetric about both axes; the alternation keeps the connectivity
// symmetric too when the cell count is even.
TriMesh grid_mesh(double half, int cells, bool clip_circle, double radius) {
    TriMesh mesh;
    const double h = 2.0 * half / cells;
    auto node_xy = [&](int i, int j) {
        return Eigen::Vector3d(-half + i * h, -half + j * h, 0.0);
    };

    std::vector<int> node_id((cells + 1) * (cells + 1), -1);
    std::vector<std::pair<int, int>> kept_cells;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            if (clip_circle) {
                bool inside = true;
                for (int di = 0; di <= 1 && inside; ++di)
                    for (int dj = 0; dj <= 1 && inside; ++dj)
                        inside = node_xy(i + di, j + dj).head<2>().norm() <= radius + 1e-12;
                if (!inside) continue;
            }
            kept_cells.push_back({i, j});
        }
    }
    if (kept_cells.empty()) throw GeometryError("generate_mesh: empty footprint");

    auto get_node = [&](int i, int j) {
        int& id = node_id[i * (cells + 1) + j];
        if (id < 0) {
            id = mesh.vertex_count();
            mesh.vertices.push_back(node_xy(i, j));
        }
        return id;
    };
    for (const auto& [i, j] : kept_cells) {
        const int c00 = get_node(i, j);
        const int c10 = get_node(i + 1, j);
        const int c11 = get_node(i + 1, j + 1);
        const int c01 = get_node(i, j + 1);
        if ((i + j) % 2 == 0) {
            mesh.faces.push_back({c00, c10, c11});
            mesh.faces.push_back({c00, c11, c01});
        } else {
            mesh.faces.push_back({c00, c10, c01});
            mesh.faces.push_back({c10, c11, c01});
        }
    }
    return mesh;
}

}  // namespace

TriMesh generate_mesh(const KirigamiPattern& pattern, const SubstrateShape& substrate,
                      double target_edge_length) {
    if (!(target_edge_length > 0.0))
        throw std::invalid_argument("generate_mesh: target_edge_length must be > 0");
    pattern.validate();
    if (pattern.kind == KirigamiPattern::Kind::Cross &&
        target_edge_length > pattern.arm_width / 4.0)
        throw ResolutionError("generate_mesh: edge length " + std::to_string(target_edge_length) +
                              " mm cannot resolve arm width " + std::to_string(pattern.arm_width) +
                              " mm (need >= 4 elements across an arm)");

    const double half = substrate.extent();
    const int cells = std::max(2, static_cast<int>(std::ceil(2.0 * half / target_edge_length)));
    TriMesh mesh = grid_mesh(half, cells, substrate.kind == SubstrateShape::Kind::Circle,
                             substrate.radius);
    build_hinges(mesh);
    mark_coverage(mesh, pattern);
    assign_rest_metrics(mesh, 1.0);
    return mesh;
}

void assign_rest_metrics(TriMesh& mesh, double lambda) {
    if (lambda < 1.0) throw std::domain_error("assign_rest_metrics: lambda must be >= 1");
    mesh.prestretch = lambda;
    mesh.rest_metric_substrate.resize(mesh.face_count());
    mesh.rest_metric_face.resize(mesh.face_count());
    const double scale = 1.0 / (lambda * lambda);
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const Eigen::Matrix2d g = mesh.planar_metric(fi);
        mesh.rest_metric_substrate[fi] = scale * g;
        mesh.rest_metric_face[fi] = g;  // face layers bond unstretched
    }
}

void export_obj(std::ostream& os, const std::vector<Eigen::Vector3d>& positions,
                const std::vector<std::array<int, 3>>& faces) {
    char buf[128];
    for (const auto& v : positions) {
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
        os << buf;
    }
    for (const auto& f : faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void export_obj_file(const std::string& path, const std::vector<Eigen::Vector3d>& positions,
                     const std::vector<std::array<int, 3>>& faces) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    export_obj(os, positions, faces);
}

void export_outline_csv(std::ostream& os, const std::vector<Polygon>& outlines) {
    os << "polygon_index,x_mm,y_mm\n";
    char buf[96];
    for (size_t k = 0; k < outlines.size(); ++k) {
        for (const auto& p : outlines[k]) {
            std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", k, p.x(), p.y());
            os << buf;
        }
    }
}

}  // namespace kiri
