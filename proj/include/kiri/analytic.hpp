#pragma once

#include <stdexcept>
#include <string>

#include "kiri/materials.hpp"

namespace kiri {

enum class ShapeLaw { Pyramid, SphericalCap };

/// Which parameter inverse_design solves for.
enum class DesignVariable { Prestretch, Size };

/// Inputs to the closed-form height model. Stiffnesses in the mm/kPa unit
/// system: c_s in kPa*mm (N/m), d_eq in kPa*mm^3.
struct AnalyticInput {
    double c_s = 0.0;
    double d_eq = 0.0;
    double length_l = 0.0;   // planar precursor size L, mm
    double prestretch = 1.0; // lambda
    ShapeLaw shape = ShapeLaw::Pyramid;

    void validate() const;
};

struct InfeasibleTargetError : std::runtime_error {
    double attainable_bound;
    InfeasibleTargetError(const std::string& msg, double bound)
        : std::runtime_error(msg), attainable_bound(bound) {}
};

/// Spontaneous curvature from the pre-stretch strain eps = lambda - 1:
/// kappa = sqrt(c_s/d_eq) * eps/(1+eps). Units: 1/mm.
double curvature_from_prestretch(double c_s, double d_eq, double eps);

/// Normalized pyramid height H/L = sin(arctan(kappa*L/4))/2, in [0, 0.5).
double pyramid_height_ratio(double kappa, double length_l);

/// Normalized spherical-cap height H/L = kappa*L/8.
double cap_height_ratio(double kappa, double length_l);

/// H/L = (L/8)*sqrt(c_s/d_eq)*eps/(1+eps); identical to composing
/// cap_height_ratio with curvature_from_prestretch.
double scaling_law_height_ratio(double c_s, double d_eq, double length_l, double eps);

/// Forward height map for either shape law at the given prestretch.
double height_ratio(const AnalyticInput& in);

/// Area of the unstretched substrate. Square-like: (L/(sqrt(2)*lambda))^2;
/// circular of released radius R: pi*R^2/lambda^2.
double unstretched_area_square(double length_l, double lambda);
double unstretched_area_circle(double radius, double lambda);

/// Total hyperelastic stretch energy W(lambda)*area*t_s. Units: uJ.
double stretch_energy_total(const MooneyRivlin& mat, double lambda, double area, double t_s);

/// Plate bending energy (1/2)*area*d_eq*kappa^2. Units: uJ.
double bending_energy_total(double d_eq, double area, double kappa);

/// Solve the forward height map for the chosen free variable so that
/// height_ratio == target. Throws InfeasibleTargetError when the target lies
/// outside the attainable range; the error carries the attainable bound.
double inverse_design(double target_h_over_l, DesignVariable free_variable, AnalyticInput fixed);

}  // namespace kiri
