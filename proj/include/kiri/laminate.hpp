#pragma once

#include "kiri/materials.hpp"

namespace kiri {

/// One layer of the stack: material plus thickness in mm.
struct LayerSpec {
    MooneyRivlin material;
    double thickness = 0.0;  // mm

    bool valid() const { return thickness > 0.0 && material.valid(); }
};

/// Substrate plus two identical face (Kirigami) layers, bonded at prestretch
/// lambda with the pattern covering an area fraction n of the substrate.
struct TrilayerSpec {
    LayerSpec substrate;
    LayerSpec face;          // used twice, top and bottom
    double prestretch = 1.0; // lambda >= 1
    double coverage = 0.0;   // n in [0,1]
    double poisson = 0.5;    // nu in [0, 0.5]

    void validate() const;
};

/// Membrane stiffness C = E*t/(1-nu^2) of a single layer. Units: kPa*mm = N/m.
double membrane_stiffness(const LayerSpec& layer, double nu);

/// Equivalent bending stiffness of the symmetric trilayer, area-fraction mixed
/// over covered/uncovered regions. Units: kPa*mm^3 (= uN*m = 1e-6 N*m).
double bending_stiffness_trilayer(const TrilayerSpec& spec);

/// Neutral-axis height of a substrate+face bilayer, measured from the bottom
/// of the substrate. Units: mm.
double neutral_axis_bilayer(const LayerSpec& substrate, const LayerSpec& face);

/// Equivalent bending stiffness of the bilayer (one face layer), about the
/// neutral axis from neutral_axis_bilayer. Units: kPa*mm^3.
double bending_stiffness_bilayer(const TrilayerSpec& spec);

/// Bending stiffness of the bare substrate plate, E*t^3/(12(1-nu^2)).
double bending_stiffness_plate(const LayerSpec& layer, double nu);

}  // namespace kiri
