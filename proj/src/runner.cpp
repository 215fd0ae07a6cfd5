#include "kiri/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kiri/mesh.hpp"
#include "kiri/shell.hpp"

namespace kiri {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::filesystem::path prepare_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Side of the square (or diameter) the height law normalizes against: the
/// pattern arm span when a pattern is present, the substrate size otherwise.
double char_length(const StudyConfig& cfg, double size) {
    if (cfg.pattern == "none") return size;
    return cfg.arm_length * size / cfg.substrate_size;
}

struct PointAnalysis {
    double size = 0.0, lambda = 0.0, eps = 0.0;
    double coverage = 0.0, c_s = 0.0, d_eq = 0.0, d_bare = 0.0;
    double kappa = 0.0, length = 0.0;
    double h_over_l_pyramid = 0.0, h_over_l_cap = 0.0;
};

PointAnalysis analyze_point(const StudyConfig& cfg, double size, double lambda) {
    PointAnalysis p;
    p.size = size;
    p.lambda = lambda;
    p.eps = lambda - 1.0;
    const SubstrateShape sub = cfg.substrate_for_size(size);
    const KirigamiPattern pat = cfg.kirigami_pattern_for_size(size);
    p.coverage = coverage_fraction(pat, sub);
    p.c_s = membrane_stiffness(cfg.substrate_layer, cfg.poisson);
    const TrilayerSpec spec = cfg.trilayer(p.coverage, lambda);
    p.d_eq = bending_stiffness_trilayer(spec);
    p.d_bare = bending_stiffness_plate(cfg.substrate_layer, cfg.poisson);
    p.kappa = curvature_from_prestretch(p.c_s, p.d_eq, p.eps);
    p.length = char_length(cfg, size);
    p.h_over_l_pyramid = pyramid_height_ratio(p.kappa, p.length);
    p.h_over_l_cap = cap_height_ratio(p.kappa, p.length);
    return p;
}

ShellModel model_for(const StudyConfig& cfg, double size, double lambda) {
    TriMesh mesh = generate_mesh(cfg.kirigami_pattern_for_size(size),
                                 cfg.substrate_for_size(size), cfg.mesh_edge_length);
    assign_rest_metrics(mesh, lambda);
    return build_shell_model(std::move(mesh), cfg.substrate_layer, cfg.face_layer, cfg.poisson);
}

const char* sign_name(StateSign s) { return s == StateSign::Positive ? "positive" : "negative"; }
const char* mode_name(ModeLabel m) {
    switch (m) {
        case ModeLabel::Mode1: return "mode1";
        case ModeLabel::Mode2: return "mode2";
        default: return "unclassified";
    }
}

struct SimOutcome {
    std::vector<EquilibriumState> states;
    std::vector<std::string> failures;
};

SimOutcome simulate(const ShellModel& model, const StudyConfig& cfg, bool include_mode2) {
    std::vector<SeedKind> seeds{SeedKind::GlobalPositive, SeedKind::GlobalNegative};
    if (include_mode2) {
        seeds.push_back(SeedKind::Mode2Positive);
        seeds.push_back(SeedKind::Mode2Negative);
    }
    SimOutcome out;
    out.states = find_stable_states(model, seeds, cfg.solver, &out.failures);
    return out;
}

}  // namespace

std::string run_analyze(const StudyConfig& cfg, const std::string& out_dir) {
    const auto dir = prepare_dir(out_dir);
    const PointAnalysis p = analyze_point(cfg, cfg.substrate_size, cfg.prestretch);

    const double h_over_l =
        cfg.shape_law == ShapeLaw::Pyramid ? p.h_over_l_pyramid : p.h_over_l_cap;
    const double area =
        cfg.substrate_shape == "circle"
            ? unstretched_area_circle(cfg.substrate_size / 2.0, cfg.prestretch)
            : unstretched_area_square(p.length, cfg.prestretch);
    const double e_stretch = stretch_energy_total(cfg.substrate_layer.material, cfg.prestretch,
                                                  area, cfg.substrate_layer.thickness);
    const double e_bend = bending_energy_total(p.d_eq, area, p.kappa);

    ordered_json doc{{"coverage_fraction", p.coverage},
                     {"membrane_stiffness_n_per_m", p.c_s},
                     {"bending_stiffness_kpa_mm3", p.d_eq},
                     {"bare_plate_stiffness_kpa_mm3", p.d_bare},
                     {"curvature_per_mm", p.kappa},
                     {"characteristic_length_mm", p.length},
                     {"height_ratio_pyramid", p.h_over_l_pyramid},
                     {"height_ratio_cap", p.h_over_l_cap},
                     {"height_ratio", h_over_l},
                     {"height_mm", h_over_l * p.length},
                     {"unstretched_area_mm2", area},
                     {"stretch_energy_uj", e_stretch},
                     {"bending_energy_uj", e_bend}};
    write_text(dir / "analysis.json", doc.dump(2) + "\n");

    std::ostringstream os;
    os << "coverage n = " << fmt9(p.coverage) << ", C_s = " << fmt9(p.c_s)
       << " N/m, D_eq = " << fmt9(p.d_eq) << " kPa*mm^3\n"
       << "kappa = " << fmt9(p.kappa) << " /mm, H/L = " << fmt9(h_over_l)
       << " (H = " << fmt9(h_over_l * p.length) << " mm)\n"
       << "wrote " << (dir / "analysis.json").string();
    return os.str();
}

std::string run_design(const StudyConfig& cfg, const std::string& out_dir) {
    const auto dir = prepare_dir(out_dir);
    const PointAnalysis p = analyze_point(cfg, cfg.substrate_size, cfg.prestretch);

    AnalyticInput in;
    in.c_s = p.c_s;
    in.d_eq = p.d_eq;
    in.length_l = p.length;
    in.prestretch = cfg.prestretch;
    in.shape = cfg.shape_law;
    const DesignVariable var = cfg.design_variable == "size" ? DesignVariable::Size
                                                             : DesignVariable::Prestretch;
    const double solved = inverse_design(cfg.design_target, var, in);

    AnalyticInput check = in;
    if (var == DesignVariable::Size)
        check.length_l = solved;
    else
        check.prestretch = solved;
    const double achieved = height_ratio(check);

    ordered_json doc{{"variable", cfg.design_variable},
                     {"solved_value", solved},
                     {"target_height_ratio", cfg.design_target},
                     {"achieved_height_ratio", achieved},
                     {"membrane_stiffness_n_per_m", p.c_s},
                     {"bending_stiffness_kpa_mm3", p.d_eq}};
    write_text(dir / "design.json", doc.dump(2) + "\n");

    std::ostringstream os;
    os << "target H/L = " << fmt9(cfg.design_target) << " -> " << cfg.design_variable << " = "
       << fmt9(solved) << " (achieved " << fmt9(achieved) << ")\n"
       << "wrote " << (dir / "design.json").string();
    return os.str();
}

std::string run_sweep(const StudyConfig& cfg, const std::string& out_dir) {
    const auto dir = prepare_dir(out_dir);

    struct Row {
        PointAnalysis p;
        std::string sim_cols;
    };
    std::vector<std::pair<double, double>> points;  // (size, lambda)
    for (double size : cfg.sweep_size)
        for (double lambda : cfg.sweep_prestretch) points.emplace_back(size, lambda);

    auto compute_row = [&cfg](double size, double lambda) {
        Row row;
        row.p = analyze_point(cfg, size, lambda);
        std::ostringstream os;
        if (cfg.sweep_simulate) {
            try {
                ShellModel model = model_for(cfg, size, lambda);
                SimOutcome out = simulate(model, cfg, false);
                double hp = 0.0, hn = 0.0;
                for (const auto& st : out.states) {
                    if (st.sign == StateSign::Positive)
                        hp = std::max(hp, st.height);
                    else
                        hn = std::max(hn, st.height);
                }
                os << fmt9(hp / row.p.length) << "," << fmt9(hn / row.p.length) << ","
                   << out.states.size() << ",";
                for (size_t i = 0; i < out.failures.size(); ++i)
                    os << (i ? "; " : "") << "seed " << i + 1 << " did not converge";
            } catch (const std::exception& e) {
                std::string msg = e.what();
                for (char& ch : msg)
                    if (ch == ',' || ch == '\n') ch = ';';
                os << ",,0," << msg;
            }
        } else {
            os << ",,,";
        }
        row.sim_cols = os.str();
        return row;
    };

    std::vector<Row> rows(points.size());
    if (cfg.sweep_simulate) {
        std::vector<std::future<Row>> futs;
        futs.reserve(points.size());
        for (auto [size, lambda] : points)
            futs.push_back(std::async(std::launch::async, compute_row, size, lambda));
        for (size_t i = 0; i < futs.size(); ++i) rows[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < points.size(); ++i)
            rows[i] = compute_row(points[i].first, points[i].second);
    }

    const double scale_w = cfg.arm_width / cfg.substrate_size;
    std::ostringstream csv;
    csv << "lambda,eps,l_mm,w_mm,t_s_mm,t_k_mm,n,c_s_n_per_m,d_eq_kpa_mm3,kappa_per_mm,"
           "h_over_l_analytic,h_over_l_sim_pos,h_over_l_sim_neg,n_equilibria,errors\n";
    for (const auto& row : rows) {
        const auto& p = row.p;
        const double h_analytic =
            cfg.shape_law == ShapeLaw::Pyramid ? p.h_over_l_pyramid : p.h_over_l_cap;
        csv << fmt9(p.lambda) << "," << fmt9(p.eps) << "," << fmt9(p.length) << ","
            << fmt9(scale_w * p.size) << "," << fmt9(cfg.substrate_layer.thickness) << ","
            << fmt9(cfg.face_layer.thickness) << "," << fmt9(p.coverage) << "," << fmt9(p.c_s)
            << "," << fmt9(p.d_eq) << "," << fmt9(p.kappa) << "," << fmt9(h_analytic) << ","
            << row.sim_cols << "\n";
    }
    write_text(dir / "sweep.csv", csv.str());

    std::ostringstream os;
    os << rows.size() << " sweep points (" << cfg.sweep_size.size() << " sizes x "
       << cfg.sweep_prestretch.size() << " prestretches)"
       << (cfg.sweep_simulate ? ", simulated" : "") << "\n"
       << "wrote " << (dir / "sweep.csv").string();
    return os.str();
}

std::string run_simulate(const StudyConfig& cfg, const std::string& out_dir) {
    const auto dir = prepare_dir(out_dir);
    const PointAnalysis p = analyze_point(cfg, cfg.substrate_size, cfg.prestretch);
    ShellModel model = model_for(cfg, cfg.substrate_size, cfg.prestretch);
    SimOutcome out = simulate(model, cfg, true);

    std::ostringstream csv;
    csv << "state,sign,mode,height_mm,h_over_l,energy_total_uj,energy_membrane_uj,"
           "energy_bending_uj,gradient_norm_mn,iterations\n";
    ordered_json states_json = ordered_json::array();
    std::map<std::string, int> name_counts;
    for (size_t i = 0; i < out.states.size(); ++i) {
        const auto& st = out.states[i];
        std::string base = std::string("state_") +
                           (st.mode == ModeLabel::Mode2 ? "mode2_" : "") + sign_name(st.sign);
        const int dup = ++name_counts[base];
        if (dup > 1) base += "_" + std::to_string(dup);
        const std::string obj_name = base + ".obj";
        export_obj_file((dir / obj_name).string(), st.vertex_positions(), model.mesh.faces);
        csv << i + 1 << "," << sign_name(st.sign) << "," << mode_name(st.mode) << ","
            << fmt9(st.height) << "," << fmt9(st.height / p.length) << ","
            << fmt9(st.energy_total) << "," << fmt9(st.energy_membrane) << ","
            << fmt9(st.energy_bending) << "," << fmt9(st.gradient_norm) << "," << st.iterations
            << "\n";
        states_json.push_back({{"file", obj_name},
                               {"sign", sign_name(st.sign)},
                               {"mode", mode_name(st.mode)},
                               {"height_mm", st.height},
                               {"h_over_l", st.height / p.length},
                               {"energy_total_uj", st.energy_total},
                               {"energy_membrane_uj", st.energy_membrane},
                               {"energy_bending_uj", st.energy_bending},
                               {"gradient_norm_mn", st.gradient_norm},
                               {"iterations", st.iterations}});
    }
    write_text(dir / "states.csv", csv.str());

    ordered_json doc{{"seed", cfg.seed},
                     {"vertex_count", model.mesh.vertex_count()},
                     {"face_count", model.mesh.face_count()},
                     {"coverage_fraction", p.coverage},
                     {"analytic_height_ratio",
                      cfg.shape_law == ShapeLaw::Pyramid ? p.h_over_l_pyramid : p.h_over_l_cap},
                     {"states", states_json},
                     {"seed_failures", out.failures}};
    write_text(dir / "summary.json", doc.dump(2) + "\n");

    std::ostringstream os;
    os << out.states.size() << " distinct equilibria (" << model.mesh.vertex_count()
       << " vertices)";
    for (const auto& st : out.states)
        os << "\n  " << sign_name(st.sign) << " " << mode_name(st.mode)
           << ": H/L = " << fmt9(st.height / p.length) << ", E = " << fmt9(st.energy_total)
           << " uJ";
    if (!out.failures.empty()) os << "\n  " << out.failures.size() << " seed(s) not converged";
    os << "\nwrote " << (dir / "summary.json").string();
    return os.str();
}

std::string run_snap(const StudyConfig& cfg, const std::string& out_dir) {
    const auto dir = prepare_dir(out_dir);
    const PointAnalysis p = analyze_point(cfg, cfg.substrate_size, cfg.prestretch);
    ShellModel model = model_for(cfg, cfg.substrate_size, cfg.prestretch);
    SimOutcome out = simulate(model, cfg, false);

    const EquilibriumState* start = nullptr;
    for (const auto& st : out.states)
        if (st.sign == StateSign::Positive && (!start || st.height > start->height)) start = &st;
    if (!start && !out.states.empty()) start = &out.states.front();
    if (!start)
        throw NonConvergenceError("snap: no converged starting equilibrium", EquilibriumState{});

    const SnapResult snap = snap_through(model, *start, cfg.snap, cfg.solver);

    std::ostringstream csv;
    csv << "force_mN,displacement_mm,energy_uJ\n";
    for (const auto& s : snap.curve)
        csv << fmt9(s.force) << "," << fmt9(s.displacement) << "," << fmt9(s.energy) << "\n";
    if (!snap.snapped) csv << "no_snap,,\n";
    write_text(dir / "snap.csv", csv.str());

    export_obj_file((dir / "snap_final.obj").string(), snap.final_state.vertex_positions(),
                    model.mesh.faces);

    ordered_json doc{{"snapped", snap.snapped},
                     {"samples", snap.curve.size()},
                     {"start_sign", sign_name(start->sign)},
                     {"final_sign", sign_name(snap.final_state.sign)},
                     {"start_height_mm", start->height},
                     {"final_height_mm", snap.final_state.height},
                     {"start_energy_uj", start->energy_total},
                     {"final_energy_uj", snap.final_state.energy_total}};
    write_text(dir / "snap.json", doc.dump(2) + "\n");

    std::ostringstream os;
    os << (snap.snapped ? "snapped" : "no snap") << " after " << snap.curve.size()
       << " control steps; final state " << sign_name(snap.final_state.sign)
       << ", H = " << fmt9(snap.final_state.height) << " mm\n"
       << "wrote " << (dir / "snap.csv").string();
    return os.str();
}

}  // namespace kiri
