// vaceuler CLI: simulate | check | plot, driving the C API of libvaceuler.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 run terminated by a
// health check.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "vaceuler.h"

namespace {

int status_to_exit(vc_status s) {
    switch (s) {
        case VC_OK: return 0;
        case VC_ERR_HEALTH: return 2;
        default: return 1;
    }
}

void print_error(vc_status s) {
    if (s != VC_OK) std::fprintf(stderr, "error: %s\n", vc_last_error());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian free-boundary compressible Euler simulator and diagnostics"};
    app.require_subcommand(1);

    // simulate -------------------------------------------------------------
    std::string sim_config;
    std::string sim_out = ".";
    int sim_cadence = -1;
    int sim_stack = -1;
    auto* sim = app.add_subcommand("simulate", "run a configured simulation");
    sim->add_option("--config", sim_config, "configuration file")->required();
    sim->add_option("--out", sim_out, "output directory (CSV + JSON summary)");
    sim->add_option("--cadence", sim_cadence, "override diagnostics.cadence");
    sim->add_option("--stack-depth", sim_stack, "override stack.depth (K)");

    // check ----------------------------------------------------------------
    std::string check_suite;
    std::string check_out;
    std::uint64_t check_seed = 0;
    auto* chk = app.add_subcommand("check", "run a verification battery");
    chk->add_option("suite", check_suite, "identities | norms | estimates")->required();
    chk->add_option("--out", check_out, "JSON report path");
    chk->add_option("--seed", check_seed, "battery field generation seed");

    // plot -----------------------------------------------------------------
    std::string plot_csv;
    std::string plot_out = ".";
    auto* plt = app.add_subcommand("plot", "render SVG plots from a run record CSV");
    plt->add_option("record", plot_csv, "run record CSV path")->required();
    plt->add_option("--out", plot_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e); // prints usage; nonzero on error
    }

    if (sim->parsed()) {
        vc_config* cfg = nullptr;
        vc_status s = vc_config_load(sim_config.c_str(), &cfg);
        if (s != VC_OK) {
            print_error(s);
            return 1;
        }
        if (sim_cadence != -1)
            s = vc_config_set(cfg, "diagnostics.cadence", std::to_string(sim_cadence).c_str());
        if (s == VC_OK && sim_stack >= 0)
            s = vc_config_set(cfg, "stack.depth", std::to_string(sim_stack).c_str());
        if (s != VC_OK) {
            print_error(s);
            vc_config_free(cfg);
            return 1;
        }
        vc_run* run = nullptr;
        s = vc_simulate(cfg, sim_out.c_str(), &run);
        if (run) {
            char term[256] = {0};
            vc_run_termination(run, term, sizeof(term));
            char csv[4096] = {0};
            vc_run_csv_path(run, csv, sizeof(csv));
            std::fprintf(stderr, "%zu rows -> %s (%s)\n", vc_run_rows(run), csv, term);
            vc_run_free(run);
        } else {
            print_error(s);
        }
        vc_config_free(cfg);
        return status_to_exit(s);
    }

    if (chk->parsed()) {
        int passed = 0;
        const char* out = check_out.empty() ? nullptr : check_out.c_str();
        vc_status s = vc_check(check_suite.c_str(), check_seed, out, &passed);
        if (s != VC_OK) {
            print_error(s);
            if (s == VC_ERR_CONFIG)
                std::fprintf(stderr, "usage: vaceuler check {identities|norms|estimates}\n");
            return 1;
        }
        std::fprintf(stderr, "suite %s: %s\n", check_suite.c_str(),
                     passed ? "all checks passed" : "FAILURES");
        return passed ? 0 : 1;
    }

    if (plt->parsed()) {
        int files = 0, violated = 0;
        vc_status s = vc_plot(plot_csv.c_str(), plot_out.c_str(), &files, &violated);
        if (s != VC_OK) {
            print_error(s);
            return 1;
        }
        std::fprintf(stderr, "%d plots -> %s\n", files, plot_out.c_str());
        if (violated)
            std::fprintf(stderr, "warning: E(t) exceeds 2 M0 somewhere in this record\n");
        return 0;
    }
    return 1;
}
