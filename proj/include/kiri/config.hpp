#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kiri/analytic.hpp"
#include "kiri/geometry.hpp"
#include "kiri/laminate.hpp"
#include "kiri/solver.hpp"

namespace kiri {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full description of one study, deserialized from JSON. Defaults are the
/// measured PDMS substrate / glass-fiber composite stack.
struct StudyConfig {
    // named materials table; substrate_material / face_material select from it
    std::map<std::string, LayerSpec> materials{
        {"substrate", {{22.1, 1.7}, 1.1}},
        {"face_a", {{17.9, 84.5}, 1.6}},
        {"face_b", {{-2.6, 185.8}, 1.4}},
    };
    std::string substrate_material = "substrate";
    std::string face_material = "face_a";

    // resolved from the table on parse/override
    LayerSpec substrate_layer{{22.1, 1.7}, 1.1};
    LayerSpec face_layer{{17.9, 84.5}, 1.6};

    double poisson = 0.5;
    int seed = 0;  // echoed into outputs; all solves are deterministic

    // geometry
    std::string substrate_shape = "square";  // square | circle
    double substrate_size = 60.0;            // side (square) or diameter (circle), mm
    std::string pattern = "cross";           // cross | lobes | none
    double arm_length = 60.0;                // mm; lobe length for "lobes"
    double arm_width = 20.0;                 // mm; lobe width for "lobes"
    int lobe_count = 4;

    double prestretch = 1.6;

    // closed-form model
    ShapeLaw shape_law = ShapeLaw::Pyramid;

    // simulation
    double mesh_edge_length = 2.0;  // mm
    SolverOptions solver;
    SnapOptions snap;

    // sweep
    std::vector<double> sweep_prestretch{1.2, 1.4, 1.6, 1.8, 2.0};
    std::vector<double> sweep_size{40.0, 60.0, 80.0};
    bool sweep_simulate = false;  // also run the shell model per sweep point

    // inverse design
    double design_target = 0.3;              // target H/L
    std::string design_variable = "prestretch";  // prestretch | size

    void validate() const;

    SubstrateShape substrate() const;
    SubstrateShape substrate_for_size(double size) const;
    KirigamiPattern kirigami_pattern() const;
    KirigamiPattern kirigami_pattern_for_size(double size) const;
    TrilayerSpec trilayer(double coverage) const;
    TrilayerSpec trilayer(double coverage, double lambda) const;
};

/// Parse JSON text into a config; starts from the defaults, so any subset of
/// keys is a valid document. Unknown keys are an error (typo guard).
StudyConfig parse_config(const std::string& json_text);
StudyConfig load_config_file(const std::string& path);

/// Apply one "dotted.path=value" override on top of a parsed config.
void apply_override(StudyConfig& cfg, const std::string& assignment);

std::string config_to_json(const StudyConfig& cfg);

}  // namespace kiri
