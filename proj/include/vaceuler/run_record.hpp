#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace vaceuler {

// One diagnostic cadence row. Quantities that are not computed (stack depth,
// dimension) are NaN and serialize as "nan".
struct RunRow {
    double t = 0.0;
    double dt = 0.0;
    double j_min = 1.0, j_max = 1.0;
    double physical_energy = 0.0;
    double pe_drift_rel = 0.0;
    double e_total = NAN;
    std::array<double, 5> e_sobolev{NAN, NAN, NAN, NAN, NAN};
    std::array<double, 5> e_weighted_deta{NAN, NAN, NAN, NAN, NAN};
    std::array<double, 5> e_weighted_v{NAN, NAN, NAN, NAN, NAN};
    std::array<double, 4> e_jacobian{NAN, NAN, NAN, NAN};
    double e_curl = NAN;
    double e_weighted_curl = NAN;
    double mass_residual = NAN;
    double stack_fd_residual = NAN;
    double curl_transport_residual = NAN;
    double cauchy_residual = NAN;
    double eta_norm35_sq = NAN;
    double v_norm_ratio_max = NAN;
    double eta_top_mean = NAN, eta_top_min = NAN, eta_top_max = NAN;
    int health_ok = 1;
};

// Fixed CSV column order; header names map one-to-one onto RunRow fields.
const std::vector<std::string>& run_row_columns();
std::string run_row_to_csv(const RunRow& row);
std::string run_record_csv(const std::vector<RunRow>& rows);
std::vector<RunRow> parse_run_record_csv(const std::string& text);

// 17-significant-digit formatting used everywhere a double is serialized
// (round-trip exact for IEEE doubles).
std::string format_g17(double x);

// Final-state dump: one node per row, "x_0..x_{d-1}, eta_0.., v_0.." columns.
class VectorField;
std::string final_state_csv(const VectorField& eta, const VectorField& v);

} // namespace vaceuler
