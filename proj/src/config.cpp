#include "vaceuler/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace vaceuler {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

bool to_flag(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected on/off, got '" + v + "'");
}

} // namespace

void Config::set(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
    if (key == "schema") {
        if (to_int(key, value) != 1) throw ConfigError("unsupported schema version '" + value + "'");
    } else if (key == "grid.dim") {
        sim.slab.dim = to_int(key, value);
    } else if (key == "grid.n_horizontal") {
        sim.slab.n_horizontal = to_int(key, value);
    } else if (key == "grid.n_vertical") {
        sim.slab.n_vertical = to_int(key, value);
    } else if (key == "grid.vertical_scheme") {
        sim.slab.vertical_scheme = vertical_scheme_from_string(value);
    } else if (key == "initial.rho0") {
        sim.rho0_profile = value;
    } else if (key == "initial.u0") {
        sim.u0_profile = value;
    } else if (key == "initial.u0_amplitude") {
        sim.u0_amplitude = to_real(key, value);
    } else if (key == "initial.vacuum_slope_tol") {
        sim.vacuum_slope_tol = to_real(key, value);
    } else if (key == "time.t_final") {
        sim.t_final = to_real(key, value);
    } else if (key == "time.dt") {
        sim.dt = to_real(key, value);
    } else if (key == "time.cfl") {
        sim.cfl = to_real(key, value);
    } else if (key == "time.integrator") {
        if (value != "rk4") throw ConfigError("only the rk4 integrator is supported");
    } else if (key == "stack.depth") {
        sim.stack_depth = to_int(key, value);
    } else if (key == "diagnostics.cadence") {
        sim.cadence = to_int(key, value);
    } else if (key == "diagnostics.energy") {
        sim.energy_diagnostics = to_flag(key, value);
    } else if (key == "diagnostics.identities") {
        sim.identity_diagnostics = to_flag(key, value);
    } else if (key == "health.eta_norm") {
        sim.health_eta_norm = to_flag(key, value);
    } else if (key == "health.v_norms") {
        sim.health_v_norms = to_flag(key, value);
    } else if (key == "health.terminate") {
        sim.terminate_on_health = to_flag(key, value);
    } else if (key == "filter.spectral") {
        sim.spectral_filter = to_flag(key, value);
    } else if (key == "output.prefix") {
        output_prefix = value;
    } else if (key == "seed") {
        seed = std::uint64_t(to_int(key, value));
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void Config::finalize() const {
    bool have_schema = false, have_dim = false, have_nv = false, have_t = false;
    for (const auto& [k, v] : entries) {
        if (k == "schema") have_schema = true;
        if (k == "grid.dim") have_dim = true;
        if (k == "grid.n_vertical") have_nv = true;
        if (k == "time.t_final") have_t = true;
    }
    if (!have_schema) throw ConfigError("missing required key 'schema'");
    if (!have_dim) throw ConfigError("missing required key 'grid.dim'");
    if (!have_nv) throw ConfigError("missing required key 'grid.n_vertical'");
    if (!have_t) throw ConfigError("missing required key 'time.t_final'");
    sim.slab.validate();
    if (sim.slab.dim > 1 && sim.slab.n_horizontal < 4)
        throw ConfigError("grid.n_horizontal required (>= 4) for dim > 1");
    if (sim.t_final < 0.0) throw ConfigError("time.t_final must be >= 0");
    if (sim.dt < 0.0) throw ConfigError("time.dt must be > 0 when given");
    if (sim.dt == 0.0 && sim.cfl <= 0.0)
        throw ConfigError("either time.dt or a positive time.cfl is required");
    if (sim.stack_depth < 0 || sim.stack_depth > kMaxStackDepth)
        throw ConfigError("stack.depth must be in 0..8");
    if (sim.cadence < 1) throw ConfigError("diagnostics.cadence must be >= 1");
}

Config Config::parse(const std::string& text) {
    Config cfg;
    // simulation configs default to the energy-conserving vertical pair
    cfg.sim.slab.vertical_scheme = VerticalScheme::Sbp63;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        try {
            cfg.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.finalize();
    return cfg;
}

Config Config::load(const std::string& path) {
    return parse(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace vaceuler
