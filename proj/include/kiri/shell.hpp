#pragma once

#include <Eigen/Core>
#include <string>

#include "kiri/laminate.hpp"
#include "kiri/mesh.hpp"

namespace kiri {

struct ElementInversionError : std::runtime_error {
    int face;
    ElementInversionError(int face_, const std::string& msg)
        : std::runtime_error(msg), face(face_) {}
};

/// Mid-surface discretization of the trilayer: membrane layers superposed
/// with their own rest metrics, bending carried per hinge by the local
/// laminate stiffness (trilayer value on covered faces, bare substrate plate
/// elsewhere, hinge value averaged from its two faces).
struct ShellModel {
    TriMesh mesh;
    MooneyRivlin mat_substrate, mat_face;
    double t_substrate = 0.0;
    double t_face = 0.0;  // single face layer; covered faces carry two

    // per face, precomputed from the rest metrics
    std::vector<Eigen::Matrix2d> inv_rest_substrate;
    std::vector<Eigen::Matrix2d> inv_rest_face;
    std::vector<double> rest_area_substrate;  // mm^2
    std::vector<double> rest_area_face;       // 0 when uncovered
    std::vector<double> det_rest_substrate;
    std::vector<double> det_rest_face;

    // per hinge: energy = coeff * theta^2
    std::vector<double> hinge_coeff;

    // lumped planar vertex areas, for distributed loads
    std::vector<double> vertex_area;

    // pinned coordinate indices into the flattened 3N vector (rigid modes)
    std::vector<int> pinned_dofs;
    int center_vertex = -1;
    std::array<int, 4> tip_vertices{-1, -1, -1, -1};  // +x, +y, -x, -y

    double length_scale = 0.0;      // planar size L (substrate extent * 2), mm
    double c_s = 0.0;               // substrate membrane stiffness, kPa*mm
    double d_covered = 0.0;         // local trilayer bending stiffness, kPa*mm^3
    double d_bare = 0.0;            // bare substrate plate stiffness

    int dof_count() const { return 3 * mesh.vertex_count(); }
    Eigen::VectorXd flat_positions() const;
};

/// Assemble the model. The mesh must already carry rest metrics for the
/// desired prestretch (assign_rest_metrics).
ShellModel build_shell_model(TriMesh mesh, const LayerSpec& substrate, const LayerSpec& face,
                             double nu);

double membrane_energy(const ShellModel& model, const Eigen::VectorXd& positions);
double bending_energy(const ShellModel& model, const Eigen::VectorXd& positions);

/// Energy and analytic gradient of membrane + bending. The gradient at pinned
/// coordinates is projected to zero unless project_pinned is false.
double total_energy_and_gradient(const ShellModel& model, const Eigen::VectorXd& positions,
                                 Eigen::VectorXd& gradient, bool project_pinned = true);

/// Energy only (same sum as total_energy_and_gradient).
double total_energy(const ShellModel& model, const Eigen::VectorXd& positions);

}  // namespace kiri
