#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kiri/mesh.hpp"

using namespace kiri;

TEST_CASE("square grid mesh: counts, quality, topology") {
    TriMesh mesh = generate_mesh(KirigamiPattern::cross(60.0, 20.0),
                                 SubstrateShape::square(60.0), 2.0);
    const int n = 31;  // 61x61 grid at edge 1.0, 31x31 at edge 2.0
    CHECK(mesh.vertex_count() == n * n);
    CHECK(mesh.face_count() == 2 * (n - 1) * (n - 1));
    CHECK(mesh.euler_characteristic() == 1);  // disk
    CHECK(mesh.min_angle_deg() > 30.0);

    // covered fraction tracks the exact 5/9 coverage
    CHECK(mesh.covered_area_fraction() == doctest::Approx(5.0 / 9.0).epsilon(0.02));

    // mirror symmetry of the covered flags about both axes
    for (int f = 0; f < mesh.face_count(); ++f) {
        Eigen::Vector3d c = (mesh.vertices[mesh.faces[f][0]] + mesh.vertices[mesh.faces[f][1]] +
                             mesh.vertices[mesh.faces[f][2]]) /
                            3.0;
        bool found = false;
        for (int g = 0; g < mesh.face_count(); ++g) {
            Eigen::Vector3d d = (mesh.vertices[mesh.faces[g][0]] + mesh.vertices[mesh.faces[g][1]] +
                                 mesh.vertices[mesh.faces[g][2]]) /
                                3.0;
            if ((d - Eigen::Vector3d(-c.x(), c.y(), 0)).norm() < 1e-9) {
                CHECK(mesh.face_covered[f] == mesh.face_covered[g]);
                found = true;
                break;
            }
        }
        CHECK(found);
        if (f > 200) break;  // spot check, full loop is O(F^2)
    }
}

TEST_CASE("hinges connect exactly two faces and cover all interior edges") {
    TriMesh mesh = generate_mesh(KirigamiPattern::empty(), SubstrateShape::square(20.0), 4.0);
    const int v = mesh.vertex_count(), f = mesh.face_count();
    const int e = v + f - 1;  // Euler, disk
    const int boundary = 4 * 5;  // 5 edges per side at 20/4
    CHECK(static_cast<int>(mesh.hinges.size()) == e - boundary);
    for (const auto& h : mesh.hinges) {
        CHECK(h.v0 != h.v1);
        CHECK(h.va != h.vb);
        CHECK(h.f0 != h.f1);
    }
}

TEST_CASE("rest metrics: substrate shrunk by lambda^2, face planar where covered") {
    TriMesh mesh = generate_mesh(KirigamiPattern::cross(60.0, 20.0),
                                 SubstrateShape::square(60.0), 3.0);
    assign_rest_metrics(mesh, 1.6);
    for (int f = 0; f < mesh.face_count(); ++f) {
        const Eigen::Matrix2d a = mesh.planar_metric(f);
        CHECK((mesh.rest_metric_substrate[f] - a / 2.56).norm() < 1e-12 * a.norm());
        if (mesh.face_covered[f])
            CHECK((mesh.rest_metric_face[f] - a).norm() < 1e-12 * a.norm());
    }
}

TEST_CASE("circle substrate meshes to a disk with first-order area convergence") {
    // grid cells fully inside the disk: area converges to pi*r^2 from below
    double prev_deficit = 1.0;
    for (double edge : {3.0, 1.5, 0.75}) {
        TriMesh mesh = generate_mesh(KirigamiPattern::empty(), SubstrateShape::circle(30.0), edge);
        CHECK(mesh.euler_characteristic() == 1);
        CHECK(mesh.min_angle_deg() > 30.0);
        double area = 0.0;
        for (int f = 0; f < mesh.face_count(); ++f) area += mesh.face_area(f);
        const double deficit = (M_PI * 900.0 - area) / (M_PI * 900.0);
        CHECK(deficit > 0.0);
        CHECK(deficit < prev_deficit * 0.75);
        prev_deficit = deficit;
    }
    CHECK(prev_deficit < 0.05);
}

TEST_CASE("too-coarse resolution is rejected") {
    CHECK_THROWS_AS(generate_mesh(KirigamiPattern::cross(60.0, 20.0),
                                  SubstrateShape::square(60.0), 10.0),
                    ResolutionError);
}

TEST_CASE("obj export writes one v per vertex and one f per face") {
    TriMesh mesh = generate_mesh(KirigamiPattern::empty(), SubstrateShape::square(12.0), 4.0);
    std::ostringstream os;
    export_obj(os, mesh.vertices, mesh.faces);
    const std::string text = os.str();
    int nv = 0, nf = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("f ", 0) == 0) ++nf;
    }
    CHECK(nv == mesh.vertex_count());
    CHECK(nf == mesh.face_count());
}
