#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kiri/analytic.hpp"
#include "kiri/laminate.hpp"

using namespace kiri;

namespace {
AnalyticInput reference_input() {
    AnalyticInput in;
    in.c_s = 209.44;
    in.d_eq = 2986.0157185185194;
    in.length_l = 60.0;
    in.prestretch = 1.6;
    in.shape = ShapeLaw::Pyramid;
    return in;
}
}  // namespace

TEST_CASE("reference curvature and pyramid height") {
    const AnalyticInput in = reference_input();
    const double kappa = curvature_from_prestretch(in.c_s, in.d_eq, in.prestretch - 1.0);
    CHECK(kappa == doctest::Approx(0.09931504359211664).epsilon(1e-12));
    CHECK(height_ratio(in) == doctest::Approx(0.4151420780941247).epsilon(1e-12));
}

TEST_CASE("pyramid height stays below 1/2, increases, and plateaus") {
    const AnalyticInput base = reference_input();
    double prev = 0.0, prev_inc = -1.0;
    for (int i = 0; i < 200; ++i) {
        AnalyticInput in = base;
        in.prestretch = 1.0 + 9.0 * (i + 1) / 200.0;  // lambda in (1, 10]
        const double h = height_ratio(in);
        CHECK(h < 0.5);
        CHECK(h > prev);
        const double inc = h - prev;
        if (in.prestretch >= 1.5 && prev_inc >= 0.0) CHECK(inc <= prev_inc + 1e-15);
        prev = h;
        prev_inc = (in.prestretch >= 1.5) ? inc : -1.0;
    }
}

TEST_CASE("curvature substituted into the bending energy recovers the stretch release") {
    // At the optimal curvature the bending energy equals the membrane energy
    // released by the mismatch strain: (1/2) A d k^2 == (1/2) A c_s (eps/(1+eps))^2.
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> cs(10.0, 1000.0), d(100.0, 1e5), lam(1.01, 2.5),
        area(100.0, 5000.0);
    for (int i = 0; i < 100; ++i) {
        const double c_s = cs(rng), d_eq = d(rng), a = area(rng);
        const double eps = lam(rng) - 1.0;
        const double kappa = curvature_from_prestretch(c_s, d_eq, eps);
        const double bend = bending_energy_total(d_eq, a, kappa);
        const double stretch = small_strain_stretch_energy(c_s, a, eps / (1.0 + eps));
        CHECK(std::abs(bend - stretch) <= 1e-12 * stretch);
    }
}

TEST_CASE("spherical-cap chord relation is consistent with H/L = kappa*L/8") {
    // Sample a cap radius rho and rise H; the planar chord length follows
    // (L/2)^2 = rho^2 - (rho - H)^2 + H^2 = 2*rho*H. With kappa = 1/rho the
    // rise ratio H/L must equal kappa*L/8 exactly.
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> rad(5.0, 500.0), frac(0.01, 0.9);
    for (int i = 0; i < 100; ++i) {
        const double rho = rad(rng);
        const double h = frac(rng) * rho;
        const double l = std::sqrt(8.0 * rho * h);
        const double lhs = h / l;
        const double rhs = cap_height_ratio(1.0 / rho, l);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
}

TEST_CASE("cap law equals composed curvature/height maps") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> cs(10.0, 500.0), d(500.0, 5e4), lam(1.01, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double c_s = cs(rng), d_eq = d(rng), eps = lam(rng) - 1.0;
        const double via_kappa =
            cap_height_ratio(curvature_from_prestretch(c_s, d_eq, eps), 60.0);
        const double direct = scaling_law_height_ratio(c_s, d_eq, 60.0, eps);
        CHECK(via_kappa == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_CASE("inverse design round trip in prestretch") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> lam(1.05, 3.0);
    for (ShapeLaw law : {ShapeLaw::Pyramid, ShapeLaw::SphericalCap}) {
        for (int i = 0; i < 50; ++i) {
            AnalyticInput in = reference_input();
            in.shape = law;
            in.prestretch = lam(rng);
            double target = height_ratio(in);
            if (law == ShapeLaw::SphericalCap && target >= 1.0) continue;
            const double recovered = inverse_design(target, DesignVariable::Prestretch, in);
            CHECK(std::abs(recovered - in.prestretch) < 1e-9);
        }
    }
}

TEST_CASE("inverse design round trip in size") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> len(20.0, 150.0);
    for (ShapeLaw law : {ShapeLaw::Pyramid, ShapeLaw::SphericalCap}) {
        for (int i = 0; i < 50; ++i) {
            AnalyticInput in = reference_input();
            in.shape = law;
            in.length_l = len(rng);
            const double target = height_ratio(in);
            const double recovered = inverse_design(target, DesignVariable::Size, in);
            CHECK(std::abs(recovered - in.length_l) < 1e-9 * in.length_l);
        }
    }
}

TEST_CASE("infeasible pyramid targets report the attainable bound") {
    AnalyticInput in = reference_input();
    try {
        inverse_design(0.55, DesignVariable::Prestretch, in);  // pyramid cannot exceed 1/2
        FAIL("expected InfeasibleTargetError");
    } catch (const InfeasibleTargetError& e) {
        CHECK(e.attainable_bound < 0.5);
        CHECK(e.attainable_bound > 0.4);  // reference stack reaches ~0.49 as lambda -> inf
    }
}

TEST_CASE("energy bookkeeping helpers") {
    const MooneyRivlin sub{22.1, 1.7};
    const double a = unstretched_area_square(60.0, 1.6);
    CHECK(a == doctest::Approx(std::pow(60.0 / (std::sqrt(2.0) * 1.6), 2)).epsilon(1e-14));
    CHECK(unstretched_area_circle(30.0, 1.6) ==
          doctest::Approx(M_PI * 900.0 / 2.56).epsilon(1e-14));
    CHECK(stretch_energy_total(sub, 1.6, a, 1.1) ==
          doctest::Approx(strain_energy_density_equibiaxial(sub, 1.6) * a * 1.1).epsilon(1e-14));
}
