#pragma once

#include <array>
#include <optional>

#include "vaceuler/slab.hpp"

namespace vaceuler {

// dim x dim matrix of nodal fields; entry (r, c) is a scalar-field block.
class MatrixField {
public:
    MatrixField() = default;
    MatrixField(GridPtr g, int d);

    const GridPtr& grid() const { return grid_; }
    int dim() const { return d_; }
    double* entry(int r, int c);
    const double* entry(int r, int c) const;
    ScalarField entry_field(int r, int c) const;
    void set_entry(int r, int c, const ScalarField& f);
    std::size_t nodes() const { return grid_ ? grid_->nodes() : 0; }

private:
    GridPtr grid_;
    int d_ = 0;
    std::vector<double> v_;
};

// Full deformation calculus for one Lagrangian map:
//   deta(r,s) = eta^r,_s        (deformation gradient, affine part included)
//   jac       = det(deta)
//   cof(k,i)  = a^k_i = J A^k_i (adjugate; exact polynomial of deta entries)
//   ainv(k,i) = A^k_i = cof/J   (so a = J A holds exactly by construction)
// and on the top boundary Gamma (dim >= 2) the surface metric sqrt(g) and the
// outward unit normal n = a^{dim}_i / sqrt(g).
struct KinematicBundle {
    GridPtr grid;
    MatrixField deta;
    ScalarField jac;
    MatrixField cof;
    MatrixField ainv;
    std::vector<double> sqrt_g; // hsize (empty in 1D)
    std::vector<double> normal; // dim * hsize, component-major (empty in 1D)

    const double* normal_comp(int c) const { return normal.data() + std::size_t(c) * grid->hsize(); }
};

// J <= this is treated as singular: the standing assumption is 1/2 <= J <= 3/2,
// so anything near zero is already a diagnostic failure.
inline constexpr double kSingularJacobianThreshold = 1e-10;

// Gradient of a Lagrangian map eta = L x + phi with phi horizontally periodic.
// The periodic displacement is differentiated and the constant linear part L
// added back, so the identity map has an exact gradient. linear = nullopt
// means L = I. The matrix L is row-major dim x dim.
MatrixField map_gradient(const VectorField& eta,
                         const std::optional<std::array<double, 9>>& linear = std::nullopt);

// Plain gradient of a horizontally periodic vector field: out(r,s) = v^r,_s.
MatrixField field_gradient(const VectorField& v);

// Gradient of a horizontally periodic scalar field (dim components).
VectorField scalar_gradient(const ScalarField& f);

KinematicBundle build_bundle(const VectorField& eta,
                             const std::optional<std::array<double, 9>>& linear = std::nullopt);

// max_i sup_k |a^k_i,_k| : the Piola identity residual, a discretization
// health metric (O(h^p) on analytic maps).
double piola_residual(const KinematicBundle& b);

struct TimeIdentityReport {
    double j_residual;  // |(J(t+d)-J(t))/d - a^s_r v^r,_s|_sup / scale
    double a_residual;  // cofactor analogue
    double j_scale;
    double a_scale;
};

// Compares forward differences in time of J and a across a state pair
// (eta, eta + ... at t + delta) against the exact differentiation identities
// evaluated at t. Residuals are O(delta) for a trajectory pair.
TimeIdentityReport check_time_identities(
    const VectorField& eta_t, const VectorField& eta_tpd, const VectorField& v,
    double delta, const std::optional<std::array<double, 9>>& linear = std::nullopt);

struct HorizontalIdentityReport {
    double jacobian_residual; // sup |d_bar J - a^s_r d_bar eta^r,_s| / scale
    double cofactor_residual; // cofactor analogue
    double jacobian_scale;
    double cofactor_scale;
};

HorizontalIdentityReport check_horizontal_identities(
    const VectorField& eta,
    const std::optional<std::array<double, 9>>& linear = std::nullopt);

// Lagrangian curl: (curl_eta v)_i = eps_ijk A^s_j v^k,_s. Three components in
// 3D, the single in-plane component in 2D. DimensionError in 1D.
VectorField lagrangian_curl(const VectorField& v, const KinematicBundle& b);

// Lagrangian divergence: div_eta F = A^j_i F^i,_j.
ScalarField lagrangian_div(const VectorField& F, const KinematicBundle& b);

// sup over Gamma of |n - (eta,1 x eta,2)/|eta,1 x eta,2|| : cross-checks the
// cofactor route for the normal against the geometric definition.
double normal_identity_residual(const KinematicBundle& b);

// sup over Gamma of |n . eta,_alpha| for alpha = 1..dim-1 (tangency).
double normal_tangency_residual(const KinematicBundle& b);

} // namespace vaceuler
