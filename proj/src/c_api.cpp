#include "vaceuler.h"

#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "vaceuler/checks.hpp"
#include "vaceuler/config.hpp"
#include "vaceuler/energy.hpp"
#include "vaceuler/plot.hpp"
#include "vaceuler/run_record.hpp"

namespace {

thread_local std::string g_last_error;

vc_status fail(vc_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
vc_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const vaceuler::ConfigError& e) {
        return fail(VC_ERR_CONFIG, e.what());
    } catch (const vaceuler::NotPhysicalVacuum& e) {
        return fail(VC_ERR_CONFIG, e.what());
    } catch (const vaceuler::InteriorVacuum& e) {
        return fail(VC_ERR_CONFIG, e.what());
    } catch (const vaceuler::BottomBCViolation& e) {
        return fail(VC_ERR_CONFIG, e.what());
    } catch (const vaceuler::StackOverflowOrder& e) {
        return fail(VC_ERR_CONFIG, e.what());
    } catch (const vaceuler::IoError& e) {
        return fail(VC_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(VC_ERR_INTERNAL, e.what());
    }
}

bool copy_out(const std::string& s, char* buf, size_t buflen) {
    if (!buf || buflen == 0) return false;
    const size_t n = std::min(buflen - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
    return true;
}

} // namespace

struct vc_config {
    vaceuler::Config cfg;
};

struct vc_run {
    vaceuler::SimulationResult result;
    std::string csv_path;
    std::string summary_path;
};

extern "C" {

const char* vc_version(void) { return "vaceuler 1.0.0"; }

const char* vc_last_error(void) { return g_last_error.c_str(); }

vc_status vc_config_load(const char* path, vc_config** out) {
    if (!path || !out) return fail(VC_ERR_INVALID, "null argument");
    return guarded([&] {
        auto* h = new vc_config{vaceuler::Config::load(path)};
        *out = h;
        return VC_OK;
    });
}

vc_status vc_config_parse(const char* text, vc_config** out) {
    if (!text || !out) return fail(VC_ERR_INVALID, "null argument");
    return guarded([&] {
        auto* h = new vc_config{vaceuler::Config::parse(text)};
        *out = h;
        return VC_OK;
    });
}

vc_status vc_config_set(vc_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(VC_ERR_INVALID, "null argument");
    return guarded([&] {
        cfg->cfg.set(key, value);
        cfg->cfg.finalize();
        return VC_OK;
    });
}

void vc_config_free(vc_config* cfg) { delete cfg; }

vc_status vc_simulate(const vc_config* cfg, const char* out_dir, vc_run** out) {
    if (!cfg || !out_dir || !out) return fail(VC_ERR_INVALID, "null argument");
    return guarded([&]() -> vc_status {
        using nlohmann::json;
        const auto& c = cfg->cfg;
        vaceuler::SimulationResult res = vaceuler::simulate(c.sim);

        std::filesystem::create_directories(out_dir);
        const std::string csv_path =
            std::string(out_dir) + "/" + c.output_prefix + "_series.csv";
        const std::string summary_path =
            std::string(out_dir) + "/" + c.output_prefix + "_summary.json";
        vaceuler::write_text_file(csv_path, vaceuler::run_record_csv(res.rows));
        const std::string final_path =
            std::string(out_dir) + "/" + c.output_prefix + "_final.csv";
        vaceuler::write_text_file(
            final_path,
            vaceuler::final_state_csv(res.final_state.eta, res.final_state.v));

        json j;
        j["schema"] = 1;
        j["version"] = vc_version();
        j["config"] = json::object();
        for (const auto& [k, v] : c.entries) j["config"][k] = v;
        j["rows"] = res.rows.size();
        j["termination"] = res.termination;
        j["clean"] = res.clean;
        j["t_end"] = res.rows.empty() ? 0.0 : res.rows.back().t;
        j["physical_energy_0"] = res.physical_energy0;
        double drift = 0.0, jmin = INFINITY, jmax = -INFINITY;
        for (const auto& r : res.rows) {
            drift = std::max(drift, r.pe_drift_rel);
            jmin = std::min(jmin, r.j_min);
            jmax = std::max(jmax, r.j_max);
        }
        j["pe_drift_max"] = drift;
        j["j_min"] = jmin;
        j["j_max"] = jmax;
        if (std::isfinite(res.initial_energy)) {
            j["energy"]["m0"] = res.initial_energy;
            j["energy"]["two_m0"] = 2.0 * res.initial_energy;
            std::vector<double> ts, es;
            for (const auto& r : res.rows) {
                ts.push_back(r.t);
                es.push_back(r.e_total);
            }
            auto bm = vaceuler::bound_monitor(ts, es, 1.0,
                                              vaceuler::PolynomialSpec::square());
            j["energy"]["t_star"] = std::isfinite(bm.t_star) ? json(bm.t_star) : json("inf");
            j["energy"]["bound_holds"] = bm.bound_holds;
            j["energy"]["max_ratio"] = bm.max_ratio;
            if (!bm.bound_holds) j["energy"]["first_violation_t"] = bm.first_violation_t;
            j["energy"]["terms_not_computed"] = res.energy_terms_missing;
        }
        j["notes"] = json::array(
            {"eta-norm health cap uses |Omega| = 1 in place of the undefined |Omega+|",
             "bound monitor defaults: C = 1, P(f) = f^2"});
        j["outputs"] = json::array({csv_path, final_path});
        vaceuler::write_text_file(summary_path, j.dump(2) + "\n");

        auto* run = new vc_run{std::move(res), csv_path, summary_path};
        *out = run;
        if (!run->result.clean) {
            g_last_error = "run terminated early: " + run->result.termination;
            return VC_ERR_HEALTH;
        }
        return VC_OK;
    });
}

size_t vc_run_rows(const vc_run* run) { return run ? run->result.rows.size() : 0; }

int vc_run_clean(const vc_run* run) { return run && run->result.clean ? 1 : 0; }

vc_status vc_run_termination(const vc_run* run, char* buf, size_t buflen) {
    if (!run || !copy_out(run->result.termination, buf, buflen))
        return fail(VC_ERR_INVALID, "bad handle or buffer");
    return VC_OK;
}

vc_status vc_run_csv_path(const vc_run* run, char* buf, size_t buflen) {
    if (!run || !copy_out(run->csv_path, buf, buflen))
        return fail(VC_ERR_INVALID, "bad handle or buffer");
    return VC_OK;
}

void vc_run_free(vc_run* run) { delete run; }

vc_status vc_check(const char* suite, uint64_t seed, const char* report_path,
                   int* all_passed) {
    if (!suite) return fail(VC_ERR_INVALID, "null suite");
    return guarded([&]() -> vc_status {
        vaceuler::CheckReport rep = vaceuler::run_check_suite(suite, seed);
        if (report_path)
            vaceuler::write_text_file(report_path, vaceuler::check_report_json(rep));
        if (all_passed) *all_passed = rep.all_passed() ? 1 : 0;
        return VC_OK;
    });
}

vc_status vc_plot(const char* csv_path, const char* out_dir, int* n_written,
                  int* bound_violated) {
    if (!csv_path || !out_dir) return fail(VC_ERR_INVALID, "null argument");
    return guarded([&]() -> vc_status {
        auto res = vaceuler::plot_run_record(csv_path, out_dir);
        if (n_written) *n_written = int(res.paths.size());
        if (bound_violated) *bound_violated = res.bound_violated ? 1 : 0;
        return VC_OK;
    });
}

} // extern "C"
