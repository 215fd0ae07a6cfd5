#include "kiri/laminate.hpp"

#include <cmath>
#include <stdexcept>

namespace kiri {

void TrilayerSpec::validate() const {
    if (!substrate.valid()) throw std::invalid_argument("TrilayerSpec: invalid substrate layer");
    if (!face.valid()) throw std::invalid_argument("TrilayerSpec: invalid face layer");
    if (!(prestretch >= 1.0)) throw std::invalid_argument("TrilayerSpec: prestretch must be >= 1");
    if (coverage < 0.0 || coverage > 1.0)
        throw std::invalid_argument("TrilayerSpec: coverage must lie in [0,1]");
    if (poisson < 0.0 || poisson > 0.5)
        throw std::invalid_argument("TrilayerSpec: poisson must lie in [0, 0.5]");
}

double membrane_stiffness(const LayerSpec& layer, double nu) {
    if (nu >= 1.0) throw std::domain_error("membrane_stiffness: nu must be < 1");
    if (layer.thickness < 0.0) throw std::domain_error("membrane_stiffness: negative thickness");
    const double e = young_modulus(layer.material);
    return e * layer.thickness / (1.0 - nu * nu);
}

double bending_stiffness_plate(const LayerSpec& layer, double nu) {
    const double e = young_modulus(layer.material);
    const double t = layer.thickness;
    return e * t * t * t / (12.0 * (1.0 - nu * nu));
}

double bending_stiffness_trilayer(const TrilayerSpec& spec) {
    spec.validate();
    const double es = young_modulus(spec.substrate.material);
    const double ek = young_modulus(spec.face.material);
    const double ts = spec.substrate.thickness;
    const double tk = spec.face.thickness;
    const double nu2 = 1.0 - spec.poisson * spec.poisson;
    const double n = spec.coverage;

    // Neutral axis of the symmetric stack is the substrate mid-plane.
    const double face_term = tk * tk * tk / 12.0 + tk * std::pow(0.5 * tk + 0.5 * ts, 2);
    const double covered = (2.0 * ek * face_term + es * ts * ts * ts / 12.0) / nu2;
    const double bare = es * ts * ts * ts / (12.0 * nu2);
    return n * covered + (1.0 - n) * bare;
}

double neutral_axis_bilayer(const LayerSpec& substrate, const LayerSpec& face) {
    const double es = young_modulus(substrate.material);
    const double ek = young_modulus(face.material);
    const double ts = substrate.thickness;
    const double tk = face.thickness;
    const double r = es / ek;
    return (tk * (0.5 * tk + ts) + r * ts * (0.5 * ts)) / (tk + r * ts);
}

double bending_stiffness_bilayer(const TrilayerSpec& spec) {
    spec.validate();
    const double es = young_modulus(spec.substrate.material);
    const double ek = young_modulus(spec.face.material);
    const double ts = spec.substrate.thickness;
    const double tk = spec.face.thickness;
    const double nu2 = 1.0 - spec.poisson * spec.poisson;
    const double n = spec.coverage;
    const double zbar = neutral_axis_bilayer(spec.substrate, spec.face);

    const double face_term = tk * tk * tk / 12.0 + tk * std::pow(0.5 * tk + ts - zbar, 2);
    const double sub_term = ts * ts * ts / 12.0 + ts * std::pow(0.5 * ts - zbar, 2);
    const double covered = (ek * face_term + es * sub_term) / nu2;
    const double bare = es * ts * ts * ts / (12.0 * nu2);
    return n * covered + (1.0 - n) * bare;
}

}  // namespace kiri
