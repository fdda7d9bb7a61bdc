#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vaceuler/slab.hpp"

namespace vaceuler {

struct CheckEntry {
    std::string name;
    std::string kind;   // residual | order | ratio | value
    double value = 0.0;
    double threshold = 0.0; // meaning depends on kind (see cpp)
    double threshold_lo = 0.0; // for two-sided order checks
    bool pass = false;
};

struct CheckReport {
    std::string suite;
    std::vector<CheckEntry> entries;
    std::vector<std::pair<std::string, double>> constants; // battery maxima etc.
    bool all_passed() const;
};

// Analytic-map battery for the differentiation identities (Piola, J1/J2,
// a1/a2, normal/cofactor geometry) plus vertical-order convergence studies.
CheckReport check_identities(std::uint64_t seed);

// Norm oracles: exact values for simple fields, monotonicity, duality,
// boundary multiplier checks.
CheckReport check_norms(std::uint64_t seed);

// Random-field batteries for the weighted embedding, normal/tangential trace
// and Hodge inequalities, with refinement stability of the empirical
// constants.
CheckReport check_estimates(std::uint64_t seed);

CheckReport run_check_suite(const std::string& suite, std::uint64_t seed);
std::string check_report_json(const CheckReport& r);

// Deterministic band-limited smooth fields used by the batteries (and tests).
// The same seed and index produce the same analytic field on any grid.
ScalarField random_band_limited_scalar(const GridPtr& g, std::uint64_t seed, int index);
VectorField random_band_limited_vector(const GridPtr& g, std::uint64_t seed, int index);
// Random smooth map eta = x + small band-limited displacement (J > 0).
VectorField random_band_limited_map(const GridPtr& g, std::uint64_t seed, int index);

} // namespace vaceuler
