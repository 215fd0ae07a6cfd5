#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kiri/shell.hpp"

namespace kiri {

struct SolverOptions {
    int max_iterations = 20000;
    double grad_tol_factor = 1e-8;   // tolerance = factor * c_s * L
    double seed_load_factor = 1e-4;  // transverse load = factor * c_s per unit area
    int lbfgs_history = 10;

    double gradient_tolerance(const ShellModel& model) const {
        return grad_tol_factor * model.c_s * model.length_scale;
    }
};

enum class StateSign { Positive, Negative };
enum class ModeLabel { Mode1, Mode2, Unclassified };

struct EquilibriumState {
    Eigen::VectorXd positions;
    double energy_total = 0.0;
    double energy_membrane = 0.0;
    double energy_bending = 0.0;
    double gradient_norm = 0.0;
    double height = 0.0;  // mm
    StateSign sign = StateSign::Positive;
    ModeLabel mode = ModeLabel::Unclassified;
    bool converged = false;
    int iterations = 0;

    std::vector<Eigen::Vector3d> vertex_positions() const;
};

struct NonConvergenceError : std::runtime_error {
    EquilibriumState last_state;
    NonConvergenceError(std::string msg, EquilibriumState state)
        : std::runtime_error(std::move(msg)), last_state(std::move(state)) {}
};

/// Symmetry-breaking seeds: a small distributed transverse load, uniform
/// (mode 1) or alternating across the arms (mode 2), in either direction.
enum class SeedKind { GlobalPositive, GlobalNegative, Mode2Positive, Mode2Negative };

/// Two-phase quasi-static relaxation: minimize under the small transverse
/// seed load, then remove the load and re-minimize. Throws
/// NonConvergenceError (carrying the last state) at the iteration cap.
EquilibriumState minimize(const ShellModel& model, const Eigen::VectorXd& start_positions,
                          SeedKind seed, const SolverOptions& opts = {});

/// H = max(z) - min(z).
double height_of(const Eigen::VectorXd& positions);

/// Fill height, sign, and mode label from the geometry.
void classify_state(const ShellModel& model, EquilibriumState& state);

/// Run each seed, deduplicate equilibria (rigid alignment, threshold
/// 1e-3 * L), and return the distinct states. Per-seed non-convergence is
/// recorded in `failures` (when provided) and the remaining states returned.
std::vector<EquilibriumState> find_stable_states(const ShellModel& model,
                                                 const std::vector<SeedKind>& seeds,
                                                 const SolverOptions& opts = {},
                                                 std::vector<std::string>* failures = nullptr);

enum class SnapControl { ForceRamp, DisplacementSteps };

struct SnapSample {
    double force = 0.0;         // mN, total applied at the actuation vertices
    double displacement = 0.0;  // mm, control displacement
    double energy = 0.0;        // uJ, total internal energy of the loaded state
};

struct SnapResult {
    std::vector<SnapSample> curve;
    EquilibriumState final_state;
    bool snapped = false;
};

struct SnapOptions {
    SnapControl control = SnapControl::DisplacementSteps;
    int steps = 48;
    double max_travel_factor = 2.4;  // control range = factor * |mean tip deflection|
    double max_force_factor = 0.02;  // force ramp cap = factor * c_s * L
};

/// Quasi-static snap-through from a converged state: step the control,
/// re-minimize, and stop once unloading relaxes into a different stable
/// state. A no-snap outcome is reported in the result, not an error.
SnapResult snap_through(const ShellModel& model, const EquilibriumState& from_state,
                        const SnapOptions& snap_opts = {}, const SolverOptions& opts = {});

/// Max vertex distance after optimal rigid alignment (Kabsch).
double aligned_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace kiri
