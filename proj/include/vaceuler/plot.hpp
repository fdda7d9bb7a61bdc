#pragma once

#include <string>
#include <vector>

#include "vaceuler/run_record.hpp"

namespace vaceuler {

struct PlotResult {
    std::vector<std::string> paths;
    bool bound_violated = false; // E(t) exceeded 2 M0 somewhere in the series
};

// Renders four static SVG plots from a run-record CSV:
//   <prefix>_energy.svg    E(t) against the 2 M0 line (violations shaded)
//   <prefix>_pe_drift.svg  relative physical-energy drift
//   <prefix>_jacobian.svg  J_min / J_max against the [1/2, 3/2] band
//   <prefix>_boundary.svg  vacuum-boundary trajectory eta(Gamma, t)
PlotResult plot_run_record(const std::string& csv_path, const std::string& out_dir);

} // namespace vaceuler
