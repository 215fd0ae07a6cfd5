#include "kiri/materials.hpp"

#include <cmath>

namespace kiri {

double cauchy_stress_equibiaxial(const MooneyRivlin& mat, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("cauchy_stress_equibiaxial: lambda must be > 0");
    const double l2 = lambda * lambda;
    const double l4 = l2 * l2;
    return 2.0 * mat.c1 * (l2 - 1.0 / l4) - 2.0 * mat.c2 * (1.0 / l2 - l4);
}

double strain_energy_density_equibiaxial(const MooneyRivlin& mat, double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("strain_energy_density_equibiaxial: lambda must be > 0");
    const double l2 = lambda * lambda;
    const double l4 = l2 * l2;
    return mat.c1 * (2.0 * l2 + 1.0 / l4 - 3.0) + mat.c2 * (l4 + 2.0 / l2 - 3.0);
}

double strain_energy_density_biaxial(const MooneyRivlin& mat, double lambda1, double lambda2) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::domain_error("strain_energy_density_biaxial: stretches must be > 0");
    const double a = lambda1 * lambda1;
    const double b = lambda2 * lambda2;
    const double c = 1.0 / (a * b);  // lambda_3^2, J = 1
    const double i1 = a + b + c;
    const double i2 = a * b + b * c + c * a;
    return mat.c1 * (i1 - 3.0) + mat.c2 * (i2 - 3.0);
}

double young_modulus(const MooneyRivlin& mat) {
    if (!mat.valid())
        throw InvalidMaterialError("young_modulus: shear modulus 2(c1+c2) must be positive");
    return 6.0 * (mat.c1 + mat.c2);
}

double small_strain_stretch_energy(double c_s, double area, double eps) {
    if (area < 0.0) throw std::domain_error("small_strain_stretch_energy: negative area");
    return 0.5 * area * c_s * eps * eps;
}

}  // namespace kiri
