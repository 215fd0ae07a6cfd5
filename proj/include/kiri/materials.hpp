#pragma once

#include <stdexcept>

namespace kiri {

/// Two-constant incompressible Mooney-Rivlin material. Units: kPa.
/// c1 may be negative as long as the shear modulus 2(c1+c2) stays positive.
struct MooneyRivlin {
    double c1 = 0.0;  // kPa
    double c2 = 0.0;  // kPa

    double shear_modulus() const { return 2.0 * (c1 + c2); }
    bool valid() const { return shear_modulus() > 0.0; }
};

struct InvalidMaterialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cauchy stress under equibiaxial stretch lambda (lambda_1 = lambda_2 = lambda,
/// lambda_3 = 1/lambda^2). Returns kPa.
double cauchy_stress_equibiaxial(const MooneyRivlin& mat, double lambda);

/// Strain energy per unit volume at equibiaxial stretch lambda. Returns kPa (= uJ/mm^3).
double strain_energy_density_equibiaxial(const MooneyRivlin& mat, double lambda);

/// Energy density for independent in-plane principal stretches with incompressible
/// plane-stress kinematics, lambda_3 = 1/(lambda_1*lambda_2). Reduces to the
/// equibiaxial form when lambda1 == lambda2.
double strain_energy_density_biaxial(const MooneyRivlin& mat, double lambda1, double lambda2);

/// Small-strain Young's modulus E = 6(c1+c2) of the incompressible solid.
double young_modulus(const MooneyRivlin& mat);

/// Quadratic stretch energy (1/2) * area * c_s * eps^2. Units: c_s in N/m
/// (= kPa*mm), area in mm^2, result in uJ.
double small_strain_stretch_energy(double c_s, double area, double eps);

}  // namespace kiri
