#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vaceuler/dynamics.hpp"

namespace vaceuler {

// Every summand of the higher-order energy function, individually. A term can
// be: computed (value set), not computed (stack too shallow -> NaN, listed in
// `missing`), or not applicable in this dimension (curl terms in 1D -> NaN,
// not counted). The total sums the computed terms only.
struct EnergyBreakdown {
    std::array<double, 5> sobolev_terms{};       // ||d_t^{2a} eta||_{4-a}^2
    std::array<double, 5> weighted_deta_terms{}; // ||rho0 dbar^{4-a} d_t^{2a} D eta||_0^2
    std::array<double, 5> weighted_v_terms{};    // ||sqrt(rho0) dbar^{4-a} d_t^{2a} v||_0^2
    std::array<double, 4> jacobian_terms{};      // ||rho0 d_t^{2a} J^-2||_{4-a}^2
    double curl_term = NAN;                      // ||curl_eta v||_3^2
    double weighted_curl_term = NAN;             // ||rho0 dbar^4 curl_eta v||_0^2
    double total = 0.0;
    int computed = 0;
    int applicable = 0;
    std::vector<std::string> missing; // names of applicable-but-not-computed terms
};

// Conserved physical energy: int ( rho0 |v|^2 / 2 + rho0^2 J^-1 ).
double physical_energy(const State& s, const InitialData& data);

// Evaluates every term the state's stack depth allows. weighted_v_terms[4]
// needs d_t^8 v = d_t^9 eta, one level above the maximum stack depth, so it is
// always reported as not computed.
EnergyBreakdown energy(const State& s, const InitialData& data);

// sup norm of curl_eta(d_t v) computed from stack level 2 (the Lagrangian
// vorticity equation says this vanishes). Needs dim >= 2 and stack >= 2.
double curl_transport_residual(const State& s);

// sup norm of curl_eta v - (curl u0) J^-1 (the planar transport identity;
// 2D only).
double cauchy_invariant_residual(const State& s, const ScalarField& curl_u0);

struct PolynomialSpec {
    std::vector<double> coeffs; // c0 + c1 f + c2 f^2 + ...
    double eval(double f) const;
    static PolynomialSpec square() { return {{0.0, 0.0, 1.0}}; }
};

struct BoundMonitorReport {
    double m0 = 0.0;
    double c = 1.0;
    double t_star = INFINITY;        // M0 / (C P(2 M0))
    bool bound_holds = true;         // E(t_i) <= 2 M0 for all t_i <= t_star
    double first_violation_t = NAN;
    double max_ratio = 0.0;          // max over t_i <= t_star of E/(2 M0)
    double algebraic_residual = 0.0; // |M0 + C t* P(2M0) - 2 M0|
};

// M0 := E(t_0) (the first series entry). Violations are report content.
BoundMonitorReport bound_monitor(const std::vector<double>& times,
                                 const std::vector<double>& energies, double C,
                                 const PolynomialSpec& P);

// Stable closed-form solution of f = m0 + c t f^2 (the smaller root), used to
// check sharpness of the 2 M0 bound at t = T*.
double polynomial_fixed_point(double m0, double c, double t);

} // namespace vaceuler
