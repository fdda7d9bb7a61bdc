#include "vaceuler/run_record.hpp"

#include <cstdio>
#include <cstring>
#include <sstream>

#include "vaceuler/errors.hpp"
#include "vaceuler/slab.hpp"

namespace vaceuler {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const std::vector<std::string>& run_row_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {"t", "dt", "j_min", "j_max", "physical_energy",
                                      "pe_drift_rel", "e_total"};
        for (int a = 0; a <= 4; ++a) c.push_back("e_sobolev_" + std::to_string(a));
        for (int a = 0; a <= 4; ++a) c.push_back("e_weighted_deta_" + std::to_string(a));
        for (int a = 0; a <= 4; ++a) c.push_back("e_weighted_v_" + std::to_string(a));
        for (int a = 0; a <= 3; ++a) c.push_back("e_jacobian_" + std::to_string(a));
        c.insert(c.end(), {"e_curl", "e_weighted_curl", "mass_residual",
                           "stack_fd_residual", "curl_transport_residual",
                           "cauchy_residual", "eta_norm35_sq", "v_norm_ratio_max",
                           "eta_top_mean", "eta_top_min", "eta_top_max", "health_ok"});
        return c;
    }();
    return cols;
}

std::string run_row_to_csv(const RunRow& r) {
    std::vector<double> vals = {r.t, r.dt, r.j_min, r.j_max, r.physical_energy,
                                r.pe_drift_rel, r.e_total};
    for (double v : r.e_sobolev) vals.push_back(v);
    for (double v : r.e_weighted_deta) vals.push_back(v);
    for (double v : r.e_weighted_v) vals.push_back(v);
    for (double v : r.e_jacobian) vals.push_back(v);
    vals.insert(vals.end(), {r.e_curl, r.e_weighted_curl, r.mass_residual,
                             r.stack_fd_residual, r.curl_transport_residual,
                             r.cauchy_residual, r.eta_norm35_sq, r.v_norm_ratio_max,
                             r.eta_top_mean, r.eta_top_min, r.eta_top_max});
    std::string out;
    for (double v : vals) {
        out += format_g17(v);
        out += ',';
    }
    out += std::to_string(r.health_ok);
    return out;
}

std::string run_record_csv(const std::vector<RunRow>& rows) {
    std::string out;
    const auto& cols = run_row_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += cols[i];
        out += i + 1 < cols.size() ? ',' : '\n';
    }
    for (const auto& r : rows) {
        out += run_row_to_csv(r);
        out += '\n';
    }
    return out;
}

std::vector<RunRow> parse_run_record_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty run record CSV");
    {
        std::string expected;
        const auto& cols = run_row_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) {
            expected += cols[i];
            if (i + 1 < cols.size()) expected += ',';
        }
        if (line != expected) throw IoError("run record CSV header does not match schema");
    }
    std::vector<RunRow> rows;
    const std::size_t ncols = run_row_columns().size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string tok = line.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str()) throw IoError("malformed CSV value '" + tok + "'");
            vals.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (vals.size() != ncols) throw IoError("malformed CSV row (wrong column count)");
        RunRow r;
        std::size_t k = 0;
        r.t = vals[k++];
        r.dt = vals[k++];
        r.j_min = vals[k++];
        r.j_max = vals[k++];
        r.physical_energy = vals[k++];
        r.pe_drift_rel = vals[k++];
        r.e_total = vals[k++];
        for (auto& v : r.e_sobolev) v = vals[k++];
        for (auto& v : r.e_weighted_deta) v = vals[k++];
        for (auto& v : r.e_weighted_v) v = vals[k++];
        for (auto& v : r.e_jacobian) v = vals[k++];
        r.e_curl = vals[k++];
        r.e_weighted_curl = vals[k++];
        r.mass_residual = vals[k++];
        r.stack_fd_residual = vals[k++];
        r.curl_transport_residual = vals[k++];
        r.cauchy_residual = vals[k++];
        r.eta_norm35_sq = vals[k++];
        r.v_norm_ratio_max = vals[k++];
        r.eta_top_mean = vals[k++];
        r.eta_top_min = vals[k++];
        r.eta_top_max = vals[k++];
        r.health_ok = int(vals[k++]);
        rows.push_back(r);
    }
    return rows;
}

std::string final_state_csv(const VectorField& eta, const VectorField& v) {
    const auto& g = eta.grid();
    const int d = g->dim();
    std::string out;
    for (int c = 0; c < d; ++c) out += "x_" + std::to_string(c) + ",";
    for (int c = 0; c < d; ++c) out += "eta_" + std::to_string(c) + ",";
    for (int c = 0; c < d; ++c) {
        out += "v_" + std::to_string(c);
        out += c + 1 < d ? ',' : '\n';
    }
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        for (int c = 0; c < d; ++c) out += format_g17(g->coord_of(i, c)) + ",";
        for (int c = 0; c < d; ++c) out += format_g17(eta.comp(c)[i]) + ",";
        for (int c = 0; c < d; ++c) {
            out += format_g17(v.comp(c)[i]);
            out += c + 1 < d ? ',' : '\n';
        }
    }
    return out;
}

} // namespace vaceuler
