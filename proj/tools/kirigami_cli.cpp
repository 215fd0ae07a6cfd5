// Command-line front-end; exercises the library exclusively through the
// public C interface.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kirigami.h"

namespace {

int exit_code_for(kiri_status status) {
    switch (status) {
        case KIRI_OK:
            return 0;
        case KIRI_ERR_SOLVER:
            return 2;
        default:
            return 1;  // validation / IO / domain / infeasible
    }
}

int run(kiri_status (*runner)(const kiri_config*, const char*, char**),
        const std::string& config_path, const std::vector<std::string>& overrides,
        const std::string& out_dir, bool dump) {
    kiri_config* cfg = nullptr;
    kiri_status st = config_path.empty() ? kiri_config_parse("{}", &cfg)
                                         : kiri_config_load(config_path.c_str(), &cfg);
    if (st != KIRI_OK) {
        std::fprintf(stderr, "error: %s\n", kiri_last_error());
        return exit_code_for(st);
    }
    for (const auto& ov : overrides) {
        st = kiri_config_set(cfg, ov.c_str());
        if (st != KIRI_OK) {
            std::fprintf(stderr, "error: %s\n", kiri_last_error());
            kiri_config_free(cfg);
            return exit_code_for(st);
        }
    }
    if (dump) {
        char* json = nullptr;
        if (kiri_config_dump(cfg, &json) == KIRI_OK) {
            std::printf("%s\n", json);
            kiri_string_free(json);
        }
    }
    char* summary = nullptr;
    st = runner(cfg, out_dir.c_str(), &summary);
    if (st != KIRI_OK) {
        std::fprintf(stderr, "error: %s\n", kiri_last_error());
    } else if (summary) {
        std::printf("%s\n", summary);
    }
    kiri_string_free(summary);
    kiri_config_free(cfg);
    return exit_code_for(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("kirigami ") + kiri_version() +
                 " - design and simulation of bistable trilayer composites"};
    app.require_subcommand(1);
    app.fallthrough();  // let global options appear after the subcommand

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    bool dump = false;

    app.add_option("--config", config_path, "JSON config file (defaults used when omitted)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--set", overrides, "override config values, e.g. --set prestretch=1.8");
    app.add_flag("--dump-config", dump, "print the effective config before running");

    struct Sub {
        const char* name;
        const char* help;
        kiri_status (*fn)(const kiri_config*, const char*, char**);
    };
    const Sub subs[] = {
        {"analyze", "closed-form stiffness, curvature, and height report", kiri_run_analyze},
        {"sweep", "prestretch x size sweep to CSV", kiri_run_sweep},
        {"design", "solve prestretch or size for a target height ratio", kiri_run_design},
        {"simulate", "relax the discrete shell to its stable states", kiri_run_simulate},
        {"snap", "trace the snap-through force-displacement curve", kiri_run_snap},
    };
    for (const auto& sub : subs) app.add_subcommand(sub.name, sub.help);

    CLI11_PARSE(app, argc, argv);

    for (const auto& sub : subs)
        if (app.got_subcommand(sub.name)) return run(sub.fn, config_path, overrides, out_dir, dump);
    return 1;
}
