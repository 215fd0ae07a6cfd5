#include "kiri/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kiri {

using nlohmann::json;

namespace {

json to_json_doc(const StudyConfig& c) {
    json mats = json::object();
    for (const auto& [name, layer] : c.materials)
        mats[name] = {{"c1_kpa", layer.material.c1},
                      {"c2_kpa", layer.material.c2},
                      {"thickness_mm", layer.thickness}};
    return json{
        {"materials", std::move(mats)},
        {"substrate_material", c.substrate_material},
        {"face_material", c.face_material},
        {"poisson", c.poisson},
        {"seed", c.seed},
        {"geometry",
         {{"substrate_shape", c.substrate_shape},
          {"substrate_size_mm", c.substrate_size},
          {"pattern", c.pattern},
          {"arm_length_mm", c.arm_length},
          {"arm_width_mm", c.arm_width},
          {"lobe_count", c.lobe_count}}},
        {"prestretch", c.prestretch},
        {"shape_law", c.shape_law == ShapeLaw::Pyramid ? "pyramid" : "cap"},
        {"simulation",
         {{"mesh_edge_length_mm", c.mesh_edge_length},
          {"max_iterations", c.solver.max_iterations},
          {"gradient_tolerance_factor", c.solver.grad_tol_factor},
          {"seed_load_factor", c.solver.seed_load_factor},
          {"snap_control",
           c.snap.control == SnapControl::DisplacementSteps ? "displacement" : "force"},
          {"snap_steps", c.snap.steps},
          {"snap_max_travel_factor", c.snap.max_travel_factor},
          {"snap_max_force_factor", c.snap.max_force_factor}}},
        {"sweep",
         {{"prestretch", c.sweep_prestretch},
          {"size_mm", c.sweep_size},
          {"simulate", c.sweep_simulate}}},
        {"design",
         {{"target_height_ratio", c.design_target}, {"variable", c.design_variable}}}};
}

void merge_checked(json& base, const json& user, const std::string& path) {
    if (!user.is_object()) throw ConfigError("config: expected an object at '" + path + "'");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string child = path.empty() ? it.key() : path + "." + it.key();
        const bool new_material = path == "materials" && !base.contains(it.key());
        if (!base.contains(it.key()) && !new_material)
            throw ConfigError("config: unknown key '" + child + "'");
        if (new_material)
            base[it.key()] = json{{"c1_kpa", 0.0}, {"c2_kpa", 0.0}, {"thickness_mm", 0.0}};
        json& slot = base[it.key()];
        if (slot.is_object())
            merge_checked(slot, it.value(), child);
        else
            slot = it.value();
    }
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("config: '" + path + "' must be a number");
    return j.get<double>();
}

StudyConfig from_json_doc(const json& j) {
    StudyConfig c;
    c.materials.clear();
    for (auto it = j["materials"].begin(); it != j["materials"].end(); ++it) {
        const std::string base = "materials." + it.key();
        const json& m = it.value();
        c.materials[it.key()] = {
            {num(m["c1_kpa"], base + ".c1_kpa"), num(m["c2_kpa"], base + ".c2_kpa")},
            num(m["thickness_mm"], base + ".thickness_mm")};
    }
    c.substrate_material = j["substrate_material"].get<std::string>();
    c.face_material = j["face_material"].get<std::string>();
    for (const auto* name : {&c.substrate_material, &c.face_material})
        if (!c.materials.count(*name))
            throw ConfigError("config: material name '" + *name +
                              "' is not defined in the materials table");
    c.substrate_layer = c.materials.at(c.substrate_material);
    c.face_layer = c.materials.at(c.face_material);
    c.poisson = num(j["poisson"], "poisson");
    c.seed = j["seed"].get<int>();
    const json& g = j["geometry"];
    c.substrate_shape = g["substrate_shape"].get<std::string>();
    c.substrate_size = num(g["substrate_size_mm"], "geometry.substrate_size_mm");
    c.pattern = g["pattern"].get<std::string>();
    c.arm_length = num(g["arm_length_mm"], "geometry.arm_length_mm");
    c.arm_width = num(g["arm_width_mm"], "geometry.arm_width_mm");
    c.lobe_count = g["lobe_count"].get<int>();
    c.prestretch = num(j["prestretch"], "prestretch");
    const std::string law = j["shape_law"].get<std::string>();
    if (law == "pyramid")
        c.shape_law = ShapeLaw::Pyramid;
    else if (law == "cap")
        c.shape_law = ShapeLaw::SphericalCap;
    else
        throw ConfigError("config: shape_law must be 'pyramid' or 'cap', got '" + law + "'");
    const json& s = j["simulation"];
    c.mesh_edge_length = num(s["mesh_edge_length_mm"], "simulation.mesh_edge_length_mm");
    c.solver.max_iterations = s["max_iterations"].get<int>();
    c.solver.grad_tol_factor = num(s["gradient_tolerance_factor"],
                                   "simulation.gradient_tolerance_factor");
    c.solver.seed_load_factor = num(s["seed_load_factor"], "simulation.seed_load_factor");
    const std::string ctrl = s["snap_control"].get<std::string>();
    if (ctrl == "displacement")
        c.snap.control = SnapControl::DisplacementSteps;
    else if (ctrl == "force")
        c.snap.control = SnapControl::ForceRamp;
    else
        throw ConfigError("config: snap_control must be 'displacement' or 'force', got '" +
                          ctrl + "'");
    c.snap.steps = s["snap_steps"].get<int>();
    c.snap.max_travel_factor = num(s["snap_max_travel_factor"],
                                   "simulation.snap_max_travel_factor");
    c.snap.max_force_factor = num(s["snap_max_force_factor"],
                                  "simulation.snap_max_force_factor");
    const json& sw = j["sweep"];
    c.sweep_prestretch = sw["prestretch"].get<std::vector<double>>();
    c.sweep_size = sw["size_mm"].get<std::vector<double>>();
    c.sweep_simulate = sw["simulate"].get<bool>();
    c.design_target = num(j["design"]["target_height_ratio"], "design.target_height_ratio");
    c.design_variable = j["design"]["variable"].get<std::string>();
    return c;
}

}  // namespace

void StudyConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("config: " + msg);
    };
    require(substrate_layer.valid(), "materials.substrate: thickness and shear modulus must be positive");
    require(face_layer.valid(), "materials.face: thickness and shear modulus must be positive");
    require(poisson >= 0.0 && poisson <= 0.5, "poisson must be in [0, 0.5]");
    require(substrate_shape == "square" || substrate_shape == "circle",
            "geometry.substrate_shape must be 'square' or 'circle'");
    require(substrate_size > 0.0, "geometry.substrate_size_mm must be positive");
    require(pattern == "cross" || pattern == "lobes" || pattern == "none",
            "geometry.pattern must be 'cross', 'lobes', or 'none'");
    if (pattern == "cross") {
        require(arm_length > 0.0 && arm_width > 0.0,
                "geometry.arm_length_mm and arm_width_mm must be positive");
        require(arm_width <= arm_length, "geometry.arm_width_mm must not exceed arm_length_mm");
    }
    if (pattern == "lobes") {
        require(lobe_count >= 2, "geometry.lobe_count must be at least 2");
        require(arm_length > 0.0 && arm_width > 0.0,
                "geometry.arm_length_mm and arm_width_mm must be positive");
    }
    require(prestretch >= 1.0, "prestretch must be >= 1");
    require(mesh_edge_length > 0.0, "simulation.mesh_edge_length_mm must be positive");
    require(solver.max_iterations > 0, "simulation.max_iterations must be positive");
    require(solver.grad_tol_factor > 0.0, "simulation.gradient_tolerance_factor must be positive");
    require(snap.steps > 0, "simulation.snap_steps must be positive");
    require(!sweep_prestretch.empty(), "sweep.prestretch must not be empty");
    require(!sweep_size.empty(), "sweep.size_mm must not be empty");
    for (double l : sweep_prestretch) require(l >= 1.0, "sweep.prestretch values must be >= 1");
    for (double s : sweep_size) require(s > 0.0, "sweep.size_mm values must be positive");
    require(design_target > 0.0, "design.target_height_ratio must be positive");
    require(design_variable == "prestretch" || design_variable == "size",
            "design.variable must be 'prestretch' or 'size'");
}

SubstrateShape StudyConfig::substrate() const { return substrate_for_size(substrate_size); }

SubstrateShape StudyConfig::substrate_for_size(double size) const {
    return substrate_shape == "circle" ? SubstrateShape::circle(size / 2.0)
                                       : SubstrateShape::square(size);
}

KirigamiPattern StudyConfig::kirigami_pattern() const {
    return kirigami_pattern_for_size(substrate_size);
}

KirigamiPattern StudyConfig::kirigami_pattern_for_size(double size) const {
    const double scale = size / substrate_size;
    if (pattern == "none") return KirigamiPattern::empty();
    if (pattern == "lobes")
        return KirigamiPattern::lobes(lobe_count, arm_length * scale, arm_width * scale);
    return KirigamiPattern::cross(arm_length * scale, arm_width * scale);
}

TrilayerSpec StudyConfig::trilayer(double coverage) const {
    return trilayer(coverage, prestretch);
}

TrilayerSpec StudyConfig::trilayer(double coverage, double lambda) const {
    TrilayerSpec spec;
    spec.substrate = substrate_layer;
    spec.face = face_layer;
    spec.prestretch = lambda;
    spec.coverage = coverage;
    spec.poisson = poisson;
    spec.validate();
    return spec;
}

StudyConfig parse_config(const std::string& json_text) {
    json user;
    try {
        user = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    json base = to_json_doc(StudyConfig{});
    merge_checked(base, user, "");
    StudyConfig cfg = from_json_doc(base);
    cfg.validate();
    return cfg;
}

StudyConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("config: cannot open file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(StudyConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like path.to.key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json doc = to_json_doc(cfg);
    json* node = &doc;
    std::string parents;
    size_t start = 0;
    std::vector<std::string> keys;
    while (true) {
        const size_t dot = path.find('.', start);
        keys.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    for (size_t i = 0; i + 1 < keys.size(); ++i) {
        if (!node->contains(keys[i]) || !(*node)[keys[i]].is_object())
            throw ConfigError("override: unknown key '" + path + "'");
        node = &(*node)[keys[i]];
    }
    if (!node->contains(keys.back()) || (*node)[keys.back()].is_object())
        throw ConfigError("override: unknown key '" + path + "'");
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare strings need no quoting
    }
    (*node)[keys.back()] = parsed;
    cfg = from_json_doc(doc);
    cfg.validate();
}

std::string config_to_json(const StudyConfig& cfg) { return to_json_doc(cfg).dump(2); }

}  // namespace kiri
