#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vaceuler/kinematics.hpp"
#include "vaceuler/run_record.hpp"
#include "vaceuler/slab.hpp"

namespace vaceuler {

// ---------------------------------------------------------------------------
// initial data

struct InitialData {
    ScalarField rho0;
    VectorField u0;
    double vacuum_slope_tol = 1e-8; // required margin for d rho0/dN < 0 on Gamma
};

// Built-in density profiles (functions of the vertical coordinate):
//   linear           1 - x                 (the default normalization)
//   compatible_cubic 1 - 2x^2 + x^3        (zero wall slope at x = 0)
//   wall_flat8       1 - x^8 (2 - x)       (flat to order 7 at the wall; data
//                                           compatible with the fixed-bottom
//                                           condition through d_t^8)
//   quadratic        (1 - x)^2             (violates physical vacuum; tests)
//   constant         1                     (violates rho0 = 0 on Gamma; tests)
ScalarField make_rho0_profile(const GridPtr& g, const std::string& name);

// Built-in velocity profiles:
//   zero
//   rotational8  div-free field from the stream function
//                psi = A sin(2 pi x1) xv^8 (2D only; rotational, wall-flat)
//   gradient     A D[sin(2 pi x1) xv^2 (3 - 2 xv)]  (curl-free, dim >= 2)
VectorField make_u0_profile(const GridPtr& g, const std::string& name, double amplitude);

struct ValidationReport {
    bool valid = true;
    std::string failure;      // name of the first failed invariant, or empty
    std::string detail;
    double boundary_density = 0.0; // sup |rho0| on Gamma
    double slope_at_gamma = 0.0;   // max over Gamma of d rho0 / dN
    double degen_constant = 0.0;   // empirical C with rho0 >= C dist near Gamma
    double min_interior = 0.0;     // min rho0 over interior nodes
};

ValidationReport validate_initial_data(const InitialData& data);
// Same checks; throws NotPhysicalVacuum / InteriorVacuum / BottomBCViolation.
void require_valid_initial_data(const InitialData& data);

// ---------------------------------------------------------------------------
// state

struct State {
    double t = 0.0;
    VectorField eta;
    VectorField v;
    // dt_stack[k] = d_t^k eta, k = 0..K. dt_stack[0] = eta, dt_stack[1] = v.
    std::vector<VectorField> dt_stack;
    mutable std::shared_ptr<const KinematicBundle> bundle; // built on demand

    int stack_depth() const { return int(dt_stack.size()) - 1; }
};

State make_initial_state(const GridPtr& g, const InitialData& data);
const KinematicBundle& bundle_of(const State& s);

inline constexpr int kMaxStackDepth = 8;

// Fills d_t^k eta for k <= K by Leibniz (truncated-Taylor) differentiation of
// v_t^i = -2 A^k_i (rho0 J^-1),_k, each level using only lower ones. The
// bottom-wall constraint is not applied inside the recursion; the constraint
// force acts only in the time stepper. StackOverflowOrder for K > 8.
State build_dt_stack(const State& s, const InitialData& data, int K);

// d_t^{2a} of J^-2 for 2a <= max_order, by the same recursion; entry [k] is
// d_t^k (J^-2) (unscaled derivative). Used by the energy module.
std::vector<ScalarField> jacobian_inv2_time_derivatives(const State& s, int max_order);

// ---------------------------------------------------------------------------
// the three equivalent forms of the gamma = 2 system

// Nondegenerate form (used for evolution): v_t = -2 A^k_i (rho0 J^-1),_k.
VectorField acceleration(const State& s, const InitialData& data);
// Conservative form: v_t = -a^k_i (rho0^2 J^-2),_k / rho0. Meaningful at
// interior nodes; where rho0 vanishes (the vacuum boundary) the nondegenerate
// value is substituted so the field stays finite.
VectorField acceleration_conservative(const State& s, const InitialData& data);
// Elliptic form: v_t = -rho0 a^k_i (J^-2),_k - 2 a^k_i rho0,_k J^-2.
VectorField acceleration_elliptic(const State& s, const InitialData& data);

// ---------------------------------------------------------------------------
// time integration

struct StepOptions {
    double cfl = 0.25;          // dt must satisfy dt <= cfl h_min / max c
    bool enforce_cfl = true;
    bool spectral_filter = false; // damp top third of horizontal modes
};

// Sound-speed proxy sqrt(2 rho0 J^-1), max over nodes.
double max_sound_speed(const State& s, const InitialData& data);
double cfl_dt_limit(const State& s, const InitialData& data, double cfl);

// One classical RK4 step on (eta, v); enforces v.n = 0 on the bottom plane
// after each stage and rebuilds the bundle (which validates J > 0).
State step(const State& s, const InitialData& data, double dt, const StepOptions& opts = {});

// ---------------------------------------------------------------------------
// simulation driver

struct SimulationSpec {
    Slab slab;
    std::string rho0_profile = "linear";
    std::string u0_profile = "zero";
    double u0_amplitude = 0.0;
    double t_final = 0.0;
    double dt = 0.0;   // fixed step if > 0, else derived from cfl each step
    double cfl = 0.25;
    int stack_depth = 4;
    int cadence = 1;   // record every this many steps
    bool spectral_filter = false;
    bool energy_diagnostics = true;
    bool identity_diagnostics = true;
    bool health_eta_norm = true;   // ||eta||_3.5^2 <= 2|Omega|^2 + 1 (|Omega| = 1)
    bool health_v_norms = true;
    bool terminate_on_health = true;
    double vacuum_slope_tol = 1e-8;
};

struct SimulationResult {
    std::vector<RunRow> rows;
    State final_state;
    std::string termination; // "completed", "health:<which>", ...
    bool clean = false;
    double initial_energy = NAN; // E(0) over the computed mask
    double physical_energy0 = NAN;
    std::vector<std::string> energy_terms_missing; // applicable but not computed
};

// Advances to t_final or the first health-check failure; a partial trajectory
// is still returned with the failure reason.
SimulationResult simulate(const SimulationSpec& spec);

} // namespace vaceuler
