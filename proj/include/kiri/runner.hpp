#pragma once

#include <string>

#include "kiri/config.hpp"

namespace kiri {

/// Each runner executes one CLI subcommand: it reads the config, writes its
/// artifacts under out_dir (created if missing), and returns a short human
/// summary. Validation problems throw ConfigError, infeasible design targets
/// throw InfeasibleTargetError, solver failures throw NonConvergenceError.

/// Closed-form analysis of the configured stack: stiffnesses, spontaneous
/// curvature, height predictions, energy split. Writes analysis.json.
std::string run_analyze(const StudyConfig& cfg, const std::string& out_dir);

/// Closed-form prestretch x size sweep; simulated heights are appended per
/// row when cfg.sweep_simulate is set. Writes sweep.csv.
std::string run_sweep(const StudyConfig& cfg, const std::string& out_dir);

/// Invert the height law for the configured free variable. Writes design.json.
std::string run_design(const StudyConfig& cfg, const std::string& out_dir);

/// Relax the discrete shell from all four symmetry-breaking seeds. Writes
/// states.csv, summary.json, and one OBJ per distinct equilibrium.
std::string run_simulate(const StudyConfig& cfg, const std::string& out_dir);

/// Quasi-static snap-through starting from the positive equilibrium. Writes
/// snap.csv (force_mN,displacement_mm,energy_uJ) and snap.json.
std::string run_snap(const StudyConfig& cfg, const std::string& out_dir);

}  // namespace kiri
