#include "kiri/shell.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace kiri {

Eigen::VectorXd ShellModel::flat_positions() const {
    Eigen::VectorXd x(dof_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) x.segment<3>(3 * i) = mesh.vertices[i];
    return x;
}

namespace {

int nearest_vertex(const TriMesh& mesh, const Eigen::Vector2d& target) {
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        const double d = (mesh.vertices[i].head<2>() - target).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

ShellModel build_shell_model(TriMesh mesh, const LayerSpec& substrate, const LayerSpec& face,
                             double nu) {
    if (mesh.rest_metric_substrate.size() != static_cast<size_t>(mesh.face_count()))
        throw std::invalid_argument("build_shell_model: mesh is missing rest metrics");

    ShellModel m;
    m.mat_substrate = substrate.material;
    m.mat_face = face.material;
    m.t_substrate = substrate.thickness;
    m.t_face = face.thickness;

    TrilayerSpec local;
    local.substrate = substrate;
    local.face = face;
    local.prestretch = mesh.prestretch;
    local.coverage = 1.0;
    local.poisson = nu;
    m.d_covered = bending_stiffness_trilayer(local);
    m.d_bare = bending_stiffness_plate(substrate, nu);
    m.c_s = membrane_stiffness(substrate, nu);

    const int nf = mesh.face_count();
    m.inv_rest_substrate.resize(nf);
    m.inv_rest_face.resize(nf);
    m.rest_area_substrate.resize(nf);
    m.rest_area_face.resize(nf);
    m.det_rest_substrate.resize(nf);
    m.det_rest_face.resize(nf);
    for (int fi = 0; fi < nf; ++fi) {
        const Eigen::Matrix2d& gs = mesh.rest_metric_substrate[fi];
        m.det_rest_substrate[fi] = gs.determinant();
        m.inv_rest_substrate[fi] = gs.inverse();
        m.rest_area_substrate[fi] = 0.5 * std::sqrt(m.det_rest_substrate[fi]);
        if (mesh.face_covered[fi]) {
            const Eigen::Matrix2d& gf = mesh.rest_metric_face[fi];
            m.det_rest_face[fi] = gf.determinant();
            m.inv_rest_face[fi] = gf.inverse();
            m.rest_area_face[fi] = 0.5 * std::sqrt(m.det_rest_face[fi]);
        } else {
            m.det_rest_face[fi] = 0.0;
            m.inv_rest_face[fi].setZero();
            m.rest_area_face[fi] = 0.0;
        }
    }

    // hinge coefficient: D * |e| / (2*hbar), hbar the mean height of the two
    // adjacent triangles; exact for axis-aligned cylinder bending on this grid
    m.hinge_coeff.resize(mesh.hinges.size());
    for (size_t hi = 0; hi < mesh.hinges.size(); ++hi) {
        const Hinge& h = mesh.hinges[hi];
        const double d0 = mesh.face_covered[h.f0] ? m.d_covered : m.d_bare;
        const double d1 = mesh.face_covered[h.f1] ? m.d_covered : m.d_bare;
        const double d = 0.5 * (d0 + d1);
        const double len = (mesh.vertices[h.v1] - mesh.vertices[h.v0]).norm();
        const double h0 = 2.0 * mesh.face_area(h.f0) / len;
        const double h1 = 2.0 * mesh.face_area(h.f1) / len;
        const double hbar = 0.5 * (h0 + h1);
        m.hinge_coeff[hi] = d * len / (2.0 * hbar);
    }

    m.vertex_area.assign(mesh.vertex_count(), 0.0);
    for (int fi = 0; fi < nf; ++fi) {
        const double a = mesh.face_area(fi) / 3.0;
        for (int k = 0; k < 3; ++k) m.vertex_area[mesh.faces[fi][k]] += a;
    }

    // rigid-body constraints: center vertex fixed, in-plane spin removed by
    // pinning the y coordinate of a vertex on the +x axis
    m.center_vertex = nearest_vertex(mesh, {0.0, 0.0});
    double half = 0.0;
    for (const auto& v : mesh.vertices) half = std::max(half, std::max(std::abs(v.x()), std::abs(v.y())));
    m.length_scale = 2.0 * half;
    const int spin_vertex = nearest_vertex(mesh, {half, 0.0});
    m.pinned_dofs = {3 * m.center_vertex, 3 * m.center_vertex + 1, 3 * m.center_vertex + 2,
                     3 * spin_vertex + 1};

    m.tip_vertices = {nearest_vertex(mesh, {half, 0.0}), nearest_vertex(mesh, {0.0, half}),
                      nearest_vertex(mesh, {-half, 0.0}), nearest_vertex(mesh, {0.0, -half})};

    m.mesh = std::move(mesh);
    return m;
}

namespace {

struct MembraneTerms {
    double energy = 0.0;
    Eigen::Vector3d g0 = Eigen::Vector3d::Zero();
    Eigen::Vector3d g1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d g2 = Eigen::Vector3d::Zero();
};

// Incompressible plane-stress Mooney-Rivlin over one face and one layer.
// ahat = inverse rest metric, det_rest its determinant, weight = rest area *
// thickness. Works from the Cauchy-Green tensor C = ahat * a with
// a the deformed metric in the same edge basis.
inline void membrane_face(const MooneyRivlin& mat, const Eigen::Matrix2d& ahat, double det_rest,
                          double weight, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2,
                          int face, bool with_grad, MembraneTerms& out) {
    const double a00 = d1.dot(d1);
    const double a01 = d1.dot(d2);
    const double a11 = d2.dot(d2);
    const double deta = a00 * a11 - a01 * a01;
    if (!(deta > 1e-14 * det_rest))
        throw ElementInversionError(face, "membrane element " + std::to_string(face) +
                                              " is degenerate or inverted");
    const double b00 = ahat(0, 0), b01 = ahat(0, 1), b11 = ahat(1, 1);
    const double tr = b00 * a00 + 2.0 * b01 * a01 + b11 * a11;  // tr(C)
    const double d = deta / det_rest;                           // det(C)
    // I1 = tr(C) + 1/det(C), I2 = det(C) + tr(C)/det(C)
    const double w = mat.c1 * (tr + 1.0 / d - 3.0) + mat.c2 * (d + tr / d - 3.0);
    out.energy += weight * w;
    if (!with_grad) return;

    const double dw_dtr = mat.c1 + mat.c2 / d;
    const double dw_dd = -mat.c1 / (d * d) + mat.c2 * (1.0 - tr / (d * d));
    const double s = dw_dd / det_rest;  // d(detC)/d(a_ij) factor
    const double wa00 = dw_dtr * b00 + s * a11;
    const double wa11 = dw_dtr * b11 + s * a00;
    const double wa01 = 2.0 * (dw_dtr * b01 - s * a01);
    const Eigen::Vector3d gd1 = weight * (2.0 * wa00 * d1 + wa01 * d2);
    const Eigen::Vector3d gd2 = weight * (2.0 * wa11 * d2 + wa01 * d1);
    out.g1 += gd1;
    out.g2 += gd2;
    out.g0 -= gd1 + gd2;
}

struct HingeTerms {
    double theta = 0.0;
    Eigen::Vector3d g0, g1, ga, gb;
};

// Signed dihedral deviation from flat across the hinge, and its gradient.
// Convention: n1 from the face left of v0->v1, n2 from the right face.
inline bool hinge_theta(const Eigen::Vector3d& x0, const Eigen::Vector3d& x1,
                        const Eigen::Vector3d& xa, const Eigen::Vector3d& xb, bool with_grad,
                        HingeTerms& out) {
    const Eigen::Vector3d e = x1 - x0;
    const double l = e.norm();
    const Eigen::Vector3d n1 = e.cross(xa - x0);
    const Eigen::Vector3d n2 = (xb - x0).cross(e);
    const double n1n = n1.squaredNorm(), n2n = n2.squaredNorm();
    if (l < 1e-300 || n1n < 1e-300 || n2n < 1e-300) return false;
    const Eigen::Vector3d eh = e / l;
    const double sin_t = n1.cross(n2).dot(eh) / std::sqrt(n1n * n2n);
    const double cos_t = n1.dot(n2) / std::sqrt(n1n * n2n);
    out.theta = std::atan2(sin_t, cos_t);
    if (!with_grad) return true;

    const Eigen::Vector3d u1 = n1 / n1n;
    const Eigen::Vector3d u2 = n2 / n2n;
    out.ga = -l * u1;
    out.gb = -l * u2;
    out.g0 = ((x1 - xa).dot(e) / l) * u1 - ((xb - x1).dot(e) / l) * u2;
    out.g1 = ((xa - x0).dot(e) / l) * u1 + ((xb - x0).dot(e) / l) * u2;
    return true;
}

}  // namespace

double membrane_energy(const ShellModel& model, const Eigen::VectorXd& positions) {
    double energy = 0.0;
    const auto& mesh = model.mesh;
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto& f = mesh.faces[fi];
        const Eigen::Vector3d d1 =
            positions.segment<3>(3 * f[1]) - positions.segment<3>(3 * f[0]);
        const Eigen::Vector3d d2 =
            positions.segment<3>(3 * f[2]) - positions.segment<3>(3 * f[0]);
        MembraneTerms t;
        membrane_face(model.mat_substrate, model.inv_rest_substrate[fi],
                      model.det_rest_substrate[fi],
                      model.rest_area_substrate[fi] * model.t_substrate, d1, d2, fi, false, t);
        if (mesh.face_covered[fi])
            membrane_face(model.mat_face, model.inv_rest_face[fi], model.det_rest_face[fi],
                          model.rest_area_face[fi] * 2.0 * model.t_face, d1, d2, fi, false, t);
        energy += t.energy;
    }
    return energy;
}

double bending_energy(const ShellModel& model, const Eigen::VectorXd& positions) {
    double energy = 0.0;
    const auto& mesh = model.mesh;
    for (size_t hi = 0; hi < mesh.hinges.size(); ++hi) {
        const Hinge& h = mesh.hinges[hi];
        HingeTerms t;
        if (!hinge_theta(positions.segment<3>(3 * h.v0), positions.segment<3>(3 * h.v1),
                         positions.segment<3>(3 * h.va), positions.segment<3>(3 * h.vb), false, t))
            continue;
        energy += model.hinge_coeff[hi] * t.theta * t.theta;
    }
    return energy;
}

double total_energy(const ShellModel& model, const Eigen::VectorXd& positions) {
    return membrane_energy(model, positions) + bending_energy(model, positions);
}

double total_energy_and_gradient(const ShellModel& model, const Eigen::VectorXd& positions,
                                 Eigen::VectorXd& gradient, bool project_pinned) {
    const auto& mesh = model.mesh;
    gradient.setZero(model.dof_count());
    double energy = 0.0;

    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto& f = mesh.faces[fi];
        const Eigen::Vector3d d1 =
            positions.segment<3>(3 * f[1]) - positions.segment<3>(3 * f[0]);
        const Eigen::Vector3d d2 =
            positions.segment<3>(3 * f[2]) - positions.segment<3>(3 * f[0]);
        MembraneTerms t;
        membrane_face(model.mat_substrate, model.inv_rest_substrate[fi],
                      model.det_rest_substrate[fi],
                      model.rest_area_substrate[fi] * model.t_substrate, d1, d2, fi, true, t);
        if (mesh.face_covered[fi])
            membrane_face(model.mat_face, model.inv_rest_face[fi], model.det_rest_face[fi],
                          model.rest_area_face[fi] * 2.0 * model.t_face, d1, d2, fi, true, t);
        energy += t.energy;
        gradient.segment<3>(3 * f[0]) += t.g0;
        gradient.segment<3>(3 * f[1]) += t.g1;
        gradient.segment<3>(3 * f[2]) += t.g2;
    }

    for (size_t hi = 0; hi < mesh.hinges.size(); ++hi) {
        const Hinge& h = mesh.hinges[hi];
        HingeTerms t;
        if (!hinge_theta(positions.segment<3>(3 * h.v0), positions.segment<3>(3 * h.v1),
                         positions.segment<3>(3 * h.va), positions.segment<3>(3 * h.vb), true, t))
            continue;
        energy += model.hinge_coeff[hi] * t.theta * t.theta;
        const double scale = 2.0 * model.hinge_coeff[hi] * t.theta;
        gradient.segment<3>(3 * h.v0) += scale * t.g0;
        gradient.segment<3>(3 * h.v1) += scale * t.g1;
        gradient.segment<3>(3 * h.va) += scale * t.ga;
        gradient.segment<3>(3 * h.vb) += scale * t.gb;
    }

    if (project_pinned)
        for (int dof : model.pinned_dofs) gradient[dof] = 0.0;
    return energy;
}

}  // namespace kiri
