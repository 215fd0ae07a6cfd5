#include "kirigami.h"

#include <cstring>
#include <new>
#include <string>

#include "kiri/config.hpp"
#include "kiri/runner.hpp"

struct kiri_config {
    kiri::StudyConfig cfg;
};

namespace {

thread_local std::string g_last_error;

kiri_status fail(kiri_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
kiri_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        return fn();
    } catch (const kiri::ConfigError& e) {
        return fail(KIRI_ERR_VALIDATION, e.what());
    } catch (const kiri::InvalidMaterialError& e) {
        return fail(KIRI_ERR_VALIDATION, e.what());
    } catch (const kiri::GeometryError& e) {
        return fail(KIRI_ERR_VALIDATION, e.what());
    } catch (const kiri::ResolutionError& e) {
        return fail(KIRI_ERR_VALIDATION, e.what());
    } catch (const kiri::InfeasibleTargetError& e) {
        return fail(KIRI_ERR_INFEASIBLE, e.what());
    } catch (const kiri::NonConvergenceError& e) {
        return fail(KIRI_ERR_SOLVER, e.what());
    } catch (const std::domain_error& e) {
        return fail(KIRI_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(KIRI_ERR_VALIDATION, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(KIRI_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(KIRI_ERR_IO, e.what());
    }
}

kiri_status run_with(const kiri_config* cfg, const char* out_dir, char** out_summary,
                     std::string (*runner)(const kiri::StudyConfig&, const std::string&)) {
    if (!cfg) return fail(KIRI_ERR_VALIDATION, "null config");
    return guarded([&]() {
        const std::string summary = runner(cfg->cfg, out_dir ? out_dir : ".");
        if (out_summary) *out_summary = dup_string(summary);
        return KIRI_OK;
    });
}

}  // namespace

extern "C" {

const char* kiri_version(void) { return "1.0.0"; }

const char* kiri_last_error(void) { return g_last_error.c_str(); }

kiri_status kiri_config_parse(const char* json_text, kiri_config** out) {
    if (!json_text || !out) return fail(KIRI_ERR_VALIDATION, "null argument");
    return guarded([&]() {
        auto* handle = new kiri_config{kiri::parse_config(json_text)};
        *out = handle;
        return KIRI_OK;
    });
}

kiri_status kiri_config_load(const char* path, kiri_config** out) {
    if (!path || !out) return fail(KIRI_ERR_VALIDATION, "null argument");
    return guarded([&]() {
        auto* handle = new kiri_config{kiri::load_config_file(path)};
        *out = handle;
        return KIRI_OK;
    });
}

kiri_status kiri_config_set(kiri_config* cfg, const char* assignment) {
    if (!cfg || !assignment) return fail(KIRI_ERR_VALIDATION, "null argument");
    return guarded([&]() {
        kiri::apply_override(cfg->cfg, assignment);
        return KIRI_OK;
    });
}

kiri_status kiri_config_dump(const kiri_config* cfg, char** out_json) {
    if (!cfg || !out_json) return fail(KIRI_ERR_VALIDATION, "null argument");
    return guarded([&]() {
        *out_json = dup_string(kiri::config_to_json(cfg->cfg));
        return KIRI_OK;
    });
}

void kiri_config_free(kiri_config* cfg) { delete cfg; }

void kiri_string_free(char* s) { delete[] s; }

kiri_status kiri_cauchy_stress(double c1_kpa, double c2_kpa, double lambda, double* out_kpa) {
    if (!out_kpa) return fail(KIRI_ERR_VALIDATION, "null output");
    return guarded([&]() {
        *out_kpa = kiri::cauchy_stress_equibiaxial({c1_kpa, c2_kpa}, lambda);
        return KIRI_OK;
    });
}

kiri_status kiri_curvature(double c_s, double d_eq, double lambda, double* out_per_mm) {
    if (!out_per_mm) return fail(KIRI_ERR_VALIDATION, "null output");
    return guarded([&]() {
        *out_per_mm = kiri::curvature_from_prestretch(c_s, d_eq, lambda - 1.0);
        return KIRI_OK;
    });
}

kiri_status kiri_height_ratio(const kiri_config* cfg, int shape_law, double* out) {
    if (!cfg || !out) return fail(KIRI_ERR_VALIDATION, "null argument");
    if (shape_law != 0 && shape_law != 1)
        return fail(KIRI_ERR_VALIDATION, "shape_law must be 0 (pyramid) or 1 (cap)");
    return guarded([&]() {
        const kiri::StudyConfig& c = cfg->cfg;
        const double n =
            kiri::coverage_fraction(c.kirigami_pattern(), c.substrate());
        kiri::AnalyticInput in;
        in.c_s = kiri::membrane_stiffness(c.substrate_layer, c.poisson);
        in.d_eq = kiri::bending_stiffness_trilayer(c.trilayer(n));
        in.length_l = c.pattern == "none" ? c.substrate_size : c.arm_length;
        in.prestretch = c.prestretch;
        in.shape = shape_law == 0 ? kiri::ShapeLaw::Pyramid : kiri::ShapeLaw::SphericalCap;
        *out = kiri::height_ratio(in);
        return KIRI_OK;
    });
}

kiri_status kiri_run_analyze(const kiri_config* cfg, const char* out_dir, char** out_summary) {
    return run_with(cfg, out_dir, out_summary, kiri::run_analyze);
}
kiri_status kiri_run_sweep(const kiri_config* cfg, const char* out_dir, char** out_summary) {
    return run_with(cfg, out_dir, out_summary, kiri::run_sweep);
}
kiri_status kiri_run_design(const kiri_config* cfg, const char* out_dir, char** out_summary) {
    return run_with(cfg, out_dir, out_summary, kiri::run_design);
}
kiri_status kiri_run_simulate(const kiri_config* cfg, const char* out_dir, char** out_summary) {
    return run_with(cfg, out_dir, out_summary, kiri::run_simulate);
}
kiri_status kiri_run_snap(const kiri_config* cfg, const char* out_dir, char** out_summary) {
    return run_with(cfg, out_dir, out_summary, kiri::run_snap);
}

}  // extern "C"
