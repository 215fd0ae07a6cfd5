#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "kiri/mesh.hpp"
#include "kiri/shell.hpp"

using namespace kiri;

namespace {

const MooneyRivlin kSubstrateMat{22.1, 1.7};
const MooneyRivlin kFaceMat{17.9, 84.5};

ShellModel cross_model(double edge = 4.0, double lambda = 1.6) {
    KirigamiPattern pattern = KirigamiPattern::cross(60.0, 20.0);
    SubstrateShape substrate = SubstrateShape::square(60.0);
    TriMesh mesh = generate_mesh(pattern, substrate, edge);
    assign_rest_metrics(mesh, lambda);
    return build_shell_model(std::move(mesh), {kSubstrateMat, 1.1}, {kFaceMat, 1.6}, 0.5);
}

ShellModel bare_plate(double side, double edge, double lambda = 1.0) {
    TriMesh mesh = generate_mesh(KirigamiPattern::empty(), SubstrateShape::square(side), edge);
    assign_rest_metrics(mesh, lambda);
    return build_shell_model(std::move(mesh), {kSubstrateMat, 1.1}, {kFaceMat, 1.6}, 0.5);
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
    ShellModel model = cross_model();
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd x = model.flat_positions();
        const double amp = 0.3 + 0.4 * trial;
        for (int i = 0; i < x.size(); ++i) x[i] += amp * u(rng);

        Eigen::VectorXd g(x.size());
        total_energy_and_gradient(model, x, g, false);

        const double h = 1e-6 * model.length_scale;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(x.size()) - 1);
        double worst = 0.0;
        for (int k = 0; k < 60; ++k) {
            const int dof = pick(rng);
            Eigen::VectorXd xp = x, xm = x;
            xp[dof] += h;
            xm[dof] -= h;
            const double fd = (total_energy(model, xp) - total_energy(model, xm)) / (2 * h);
            const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(fd - g[dof]) / scale);
        }
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("energy is invariant under rigid motion") {
    ShellModel model = cross_model();
    Eigen::VectorXd x = model.flat_positions();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < x.size(); ++i) x[i] += u(rng);
    const double e0 = total_energy(model, x);

    const Eigen::Matrix3d r =
        Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
    const Eigen::Vector3d t(4.0, -2.0, 9.0);
    Eigen::VectorXd y(x.size());
    for (int i = 0; i < x.size() / 3; ++i)
        y.segment<3>(3 * i) = r * x.segment<3>(3 * i) + t;
    CHECK(total_energy(model, y) == doctest::Approx(e0).epsilon(1e-9));
}

TEST_CASE("membrane patch: uniform equibiaxial stretch matches the closed form") {
    ShellModel model = bare_plate(20.0, 2.0);
    const double s = 1.23;
    Eigen::VectorXd x = model.flat_positions() * s;

    double rest_area = 0.0;
    for (double a : model.rest_area_substrate) rest_area += a;
    const double expected =
        strain_energy_density_equibiaxial(kSubstrateMat, s) * rest_area * model.t_substrate;
    CHECK(std::abs(membrane_energy(model, x) - expected) < 1e-10 * expected);
    CHECK(bending_energy(model, x) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bending patch: cylinder energy converges to the plate value") {
    const double side = 20.0;
    const double rho = 40.0;  // radius, mm
    double prev_err = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double edge = 0.8 / (1 << level);
        ShellModel model = bare_plate(side, edge);
        Eigen::VectorXd x = model.flat_positions();
        for (int i = 0; i < x.size() / 3; ++i) {
            const double px = x[3 * i + 0];
            x[3 * i + 0] = rho * std::sin(px / rho);
            x[3 * i + 2] = rho * (1.0 - std::cos(px / rho));
        }
        double area = 0.0;
        for (double a : model.rest_area_substrate) area += a;
        const double exact = 0.5 * model.d_bare * area / (rho * rho);
        const double err = std::abs(bending_energy(model, x) - exact) / exact;
        CHECK(err < 0.05);
        if (level > 0) CHECK(err < prev_err * 0.75);  // at least first order
        prev_err = err;
    }
}

TEST_CASE("flat configuration with unit prestretch is stress free") {
    ShellModel model = bare_plate(20.0, 2.0, 1.0);
    Eigen::VectorXd x = model.flat_positions();
    Eigen::VectorXd g(x.size());
    const double e = total_energy_and_gradient(model, x, g, false);
    CHECK(std::abs(e) < 1e-12);
    CHECK(g.cwiseAbs().maxCoeff() < 1e-12);
}
