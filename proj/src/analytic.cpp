#include "kiri/analytic.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace kiri {

void AnalyticInput::validate() const {
    if (!(c_s > 0.0)) throw std::invalid_argument("AnalyticInput: c_s must be > 0");
    if (!(d_eq > 0.0)) throw std::invalid_argument("AnalyticInput: d_eq must be > 0");
    if (!(length_l > 0.0)) throw std::invalid_argument("AnalyticInput: length_l must be > 0");
    if (!(prestretch >= 1.0)) throw std::invalid_argument("AnalyticInput: prestretch must be >= 1");
}

double curvature_from_prestretch(double c_s, double d_eq, double eps) {
    if (eps < 0.0) throw std::domain_error("curvature_from_prestretch: pre-compression (eps < 0) out of scope");
    return std::sqrt(c_s / d_eq) * eps / (1.0 + eps);
}

double pyramid_height_ratio(double kappa, double length_l) {
    return 0.5 * std::sin(std::atan(kappa * length_l / 4.0));
}

double cap_height_ratio(double kappa, double length_l) {
    return kappa * length_l / 8.0;
}

double scaling_law_height_ratio(double c_s, double d_eq, double length_l, double eps) {
    return cap_height_ratio(curvature_from_prestretch(c_s, d_eq, eps), length_l);
}

double height_ratio(const AnalyticInput& in) {
    in.validate();
    const double kappa = curvature_from_prestretch(in.c_s, in.d_eq, in.prestretch - 1.0);
    return in.shape == ShapeLaw::Pyramid ? pyramid_height_ratio(kappa, in.length_l)
                                         : cap_height_ratio(kappa, in.length_l);
}

double unstretched_area_square(double length_l, double lambda) {
    if (!(lambda >= 1.0)) throw std::domain_error("unstretched_area_square: lambda must be >= 1");
    const double s = length_l / (std::sqrt(2.0) * lambda);
    return s * s;
}

double unstretched_area_circle(double radius, double lambda) {
    if (!(lambda >= 1.0)) throw std::domain_error("unstretched_area_circle: lambda must be >= 1");
    return M_PI * radius * radius / (lambda * lambda);
}

double stretch_energy_total(const MooneyRivlin& mat, double lambda, double area, double t_s) {
    return strain_energy_density_equibiaxial(mat, lambda) * area * t_s;
}

double bending_energy_total(double d_eq, double area, double kappa) {
    return 0.5 * area * d_eq * kappa * kappa;
}

namespace {

// Bracketed bisection with secant refinement on a monotone increasing map.
double solve_monotone(const std::function<double(double)>& f, double target, double lo, double hi) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo > 0.0 || fhi < 0.0)
        throw std::logic_error("inverse_design: bracket does not contain the target");
    double a = lo, b = hi, fa = flo, fb = fhi;
    double x = 0.5 * (a + b);
    double prev_width = b - a;
    for (int it = 0; it < 400; ++it) {
        // secant candidate, clamped into the bracket; fall back to bisection
        // on every other step if the bracket is not at least halving, so flat
        // plateaus cannot stall one-sided secant updates
        double xs = (std::abs(fb - fa) > 0.0) ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
        if (!(xs > a && xs < b) || (it % 2 == 1 && b - a > 0.5 * prev_width))
            xs = 0.5 * (a + b);
        if (it % 2 == 1) prev_width = b - a;
        x = xs;
        const double fx = f(x) - target;
        if (fx == 0.0 || b - a < 4e-16 * std::max(1.0, std::abs(x))) return x;
        if (fx < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    return x;
}

}  // namespace

double inverse_design(double target_h_over_l, DesignVariable free_variable, AnalyticInput fixed) {
    if (target_h_over_l < 0.0)
        throw std::domain_error("inverse_design: target H/L must be >= 0");

    if (free_variable == DesignVariable::Prestretch) {
        if (target_h_over_l == 0.0) return 1.0;
        // eps/(1+eps) -> 1 as lambda -> inf, so the curvature is capped.
        const double kappa_max = std::sqrt(fixed.c_s / fixed.d_eq);
        const double bound = fixed.shape == ShapeLaw::Pyramid
                                 ? pyramid_height_ratio(kappa_max, fixed.length_l)
                                 : cap_height_ratio(kappa_max, fixed.length_l);
        if (target_h_over_l >= bound)
            throw InfeasibleTargetError(
                "inverse_design: target H/L " + std::to_string(target_h_over_l) +
                    " is at or above the attainable bound " + std::to_string(bound) +
                    " for the prestretch variable",
                bound);
        auto forward = [&](double lambda) {
            AnalyticInput in = fixed;
            in.prestretch = lambda;
            return height_ratio(in);
        };
        double hi = 2.0;
        while (forward(hi) < target_h_over_l && hi < 1e12) hi *= 2.0;
        return solve_monotone(forward, target_h_over_l, 1.0, hi);
    }

    // Size as the free variable.
    const double eps = fixed.prestretch - 1.0;
    if (target_h_over_l == 0.0 && eps == 0.0) return fixed.length_l;
    const double kappa = curvature_from_prestretch(fixed.c_s, fixed.d_eq, eps);
    if (kappa <= 0.0)
        throw InfeasibleTargetError(
            "inverse_design: lambda = 1 admits only a flat shape; nonzero target infeasible", 0.0);
    if (fixed.shape == ShapeLaw::Pyramid && target_h_over_l >= 0.5)
        throw InfeasibleTargetError(
            "inverse_design: pyramid H/L is bounded below 0.5 for any size", 0.5);
    if (fixed.shape == ShapeLaw::SphericalCap) {
        // H/L = kappa*L/8 is linear in L; solve directly.
        return 8.0 * target_h_over_l / kappa;
    }
    auto forward = [&](double length) {
        AnalyticInput in = fixed;
        in.length_l = length;
        return height_ratio(in);
    };
    double lo = 1e-12, hi = 1.0;
    while (forward(hi) < target_h_over_l && hi < 1e14) hi *= 2.0;
    return solve_monotone(forward, target_h_over_l, lo, hi);
}

}  // namespace kiri
