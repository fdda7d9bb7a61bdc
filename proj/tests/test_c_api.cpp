#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "vaceuler.h"

namespace {

const char* kTinyConfig = R"(schema = 1
grid.dim = 1
grid.n_vertical = 24
time.t_final = 0.001
time.dt = 1e-4
stack.depth = 2
diagnostics.cadence = 5
health.eta_norm = off
health.v_norms = off
output.prefix = capi
)";

std::string tmpdir(const char* leaf) {
    auto p = std::filesystem::temp_directory_path() / leaf;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("version and error text") {
    CHECK(std::string(vc_version()).find("vaceuler") != std::string::npos);
    CHECK(std::string(vc_last_error()).empty());
}

TEST_CASE("config handles") {
    vc_config* cfg = nullptr;
    CHECK(vc_config_parse(kTinyConfig, &cfg) == VC_OK);
    REQUIRE(cfg != nullptr);
    CHECK(vc_config_set(cfg, "diagnostics.cadence", "2") == VC_OK);
    CHECK(vc_config_set(cfg, "bogus", "1") == VC_ERR_CONFIG);
    CHECK(std::string(vc_last_error()).find("unknown key") != std::string::npos);
    vc_config_free(cfg);

    vc_config* bad = nullptr;
    CHECK(vc_config_parse("schema = 1\n", &bad) == VC_ERR_CONFIG);
    CHECK(bad == nullptr);

    CHECK(vc_config_load("/no/such/file.cfg", &bad) == VC_ERR_IO);
    CHECK(std::string(vc_last_error()).find("/no/such/file.cfg") != std::string::npos);
}

TEST_CASE("simulate through the C surface writes CSV and summary") {
    const std::string dir = tmpdir("vaceuler_capi_sim");
    vc_config* cfg = nullptr;
    REQUIRE(vc_config_parse(kTinyConfig, &cfg) == VC_OK);
    vc_run* run = nullptr;
    CHECK(vc_simulate(cfg, dir.c_str(), &run) == VC_OK);
    REQUIRE(run != nullptr);
    CHECK(vc_run_clean(run) == 1);
    CHECK(vc_run_rows(run) >= 3);

    char buf[4096];
    REQUIRE(vc_run_csv_path(run, buf, sizeof(buf)) == VC_OK);
    const std::string csv = slurp(buf);
    CHECK(csv.rfind("t,dt,j_min", 0) == 0);
    REQUIRE(vc_run_termination(run, buf, sizeof(buf)) == VC_OK);
    CHECK(std::string(buf) == "completed");
    const std::string summary = slurp(dir + "/capi_summary.json");
    CHECK(summary.find("\"termination\": \"completed\"") != std::string::npos);
    CHECK(summary.find("\"two_m0\"") != std::string::npos);

    // final-state dump: header plus one row per node (24 in this config)
    const std::string fin = slurp(dir + "/capi_final.csv");
    CHECK(fin.rfind("x_0,eta_0,v_0", 0) == 0);
    int rows = 0;
    for (char ch : fin)
        if (ch == '\n') ++rows;
    CHECK(rows == 25);

    vc_run_free(run);
    vc_config_free(cfg);
}

TEST_CASE("health-terminated runs still produce outputs and rows") {
    const std::string dir = tmpdir("vaceuler_capi_cfl");
    vc_config* cfg = nullptr;
    REQUIRE(vc_config_parse(kTinyConfig, &cfg) == VC_OK);
    REQUIRE(vc_config_set(cfg, "time.t_final", "0.01") == VC_OK);
    REQUIRE(vc_config_set(cfg, "time.dt", "0.05") == VC_OK); // violates CFL
    vc_run* run = nullptr;
    CHECK(vc_simulate(cfg, dir.c_str(), &run) == VC_ERR_HEALTH);
    REQUIRE(run != nullptr);
    CHECK(vc_run_clean(run) == 0);
    char term[128];
    vc_run_termination(run, term, sizeof(term));
    CHECK(std::string(term) == "health:cfl_violation");
    CHECK(std::filesystem::exists(dir + "/capi_series.csv"));
    vc_run_free(run);
    vc_config_free(cfg);
}

TEST_CASE("determinism: identical configs give byte-identical CSVs") {
    const std::string d1 = tmpdir("vaceuler_capi_det1");
    const std::string d2 = tmpdir("vaceuler_capi_det2");
    for (const auto& dir : {d1, d2}) {
        vc_config* cfg = nullptr;
        REQUIRE(vc_config_parse(kTinyConfig, &cfg) == VC_OK);
        vc_run* run = nullptr;
        REQUIRE(vc_simulate(cfg, dir.c_str(), &run) == VC_OK);
        vc_run_free(run);
        vc_config_free(cfg);
    }
    CHECK(slurp(d1 + "/capi_series.csv") == slurp(d2 + "/capi_series.csv"));
}

TEST_CASE("check suites through the C surface") {
    const std::string dir = tmpdir("vaceuler_capi_check");
    int passed = -1;
    const std::string report = dir + "/norms.json";
    CHECK(vc_check("norms", 0, report.c_str(), &passed) == VC_OK);
    CHECK(passed == 1);
    CHECK(slurp(report).find("\"suite\": \"norms\"") != std::string::npos);

    CHECK(vc_check("nonsense", 0, nullptr, &passed) == VC_ERR_CONFIG);
}

TEST_CASE("plot through the C surface") {
    const std::string dir = tmpdir("vaceuler_capi_plot");
    vc_config* cfg = nullptr;
    REQUIRE(vc_config_parse(kTinyConfig, &cfg) == VC_OK);
    vc_run* run = nullptr;
    REQUIRE(vc_simulate(cfg, dir.c_str(), &run) == VC_OK);
    char csv[4096];
    vc_run_csv_path(run, csv, sizeof(csv));
    int files = 0, violated = -1;
    CHECK(vc_plot(csv, dir.c_str(), &files, &violated) == VC_OK);
    CHECK(files == 4);
    vc_run_free(run);
    vc_config_free(cfg);

    CHECK(vc_plot("/no/such.csv", dir.c_str(), nullptr, nullptr) == VC_ERR_IO);
}

TEST_CASE("argument validation") {
    CHECK(vc_config_load(nullptr, nullptr) == VC_ERR_INVALID);
    CHECK(vc_simulate(nullptr, "x", nullptr) == VC_ERR_INVALID);
    CHECK(vc_check(nullptr, 0, nullptr, nullptr) == VC_ERR_INVALID);
    CHECK(vc_run_rows(nullptr) == 0);
}
