#pragma once

#include "vaceuler/slab.hpp"

namespace vaceuler {

// Integer interior Sobolev norm ||f||_k (k <= 4): sum over all mixed
// derivatives of order <= k, spectral horizontally and the slab's vertical
// scheme. Fields must be horizontally periodic.
double interior_norm(const ScalarField& f, int k);
double interior_norm(const VectorField& f, int k);

// Fractional orders by the two-norm geometric interpolation
// ||f||_{m+th} = ||f||_m^{1-th} ||f||_{m+1}^th between integer orders
// (a K-functional surrogate: within a constant of the interpolation norm,
// which is all the inequality checks need).
double interior_norm_frac(const ScalarField& f, double s);
double interior_norm_frac(const VectorField& f, double s);

// Norms of a Lagrangian map eta = x + periodic displacement: the identity
// part is differentiated exactly.
double sobolev_norm_of_map(const VectorField& eta, int k);
double sobolev_norm_of_map_frac(const VectorField& eta, double s);

// Boundary norm |f|_s on Gamma = T^(dim-1) for any real s, as the Fourier
// multiplier ( sum_xi (1 + |2 pi xi|^2)^s |fhat(xi)|^2 )^(1/2). Realizes the
// interpolation definition and the duality definition of H^{-s}(Gamma)
// simultaneously.
double boundary_norm(const BoundaryField& f, double s);

// H^1(Omega)' norm: ||u||_1 where (I - Lap) u = f with periodic horizontal
// and homogeneous Neumann vertical conditions (direct Fourier x banded solve).
double dual_interior_norm(const ScalarField& f);
double dual_interior_norm(const VectorField& f);

// Weighted norm with the distance weight d = 1 - x_v (the normalized default
// density): sqrt( int d^p (|f|^2 [+ |Df|^2]) ), p in {1, 2}.
double weighted_norm(const ScalarField& f, int p, bool with_gradient);

// Eulerian curl/div at the reference configuration.
VectorField eulerian_curl(const VectorField& w); // 3 comps in 3D, 1 in 2D
ScalarField eulerian_div(const VectorField& w);

struct EmbeddingReport {
    double lhs = 0.0;  // ||F||_{1 - p/2}
    double rhs = 0.0;  // weighted norm with gradient
    double ratio = 0.0; // lhs/rhs, 0 when rhs = 0
};
EmbeddingReport embedding_check(const ScalarField& F, int p);

struct TraceReport {
    double lhs_normal_sq = 0.0;     // |w.N|_{-1/2}^2 on Gamma
    double rhs_normal_sq = 0.0;     // ||w||_0^2 + ||div w||_{H^1'}^2
    double ratio_normal = 0.0;
    double lhs_tangential_sq = 0.0; // sum_a |w.T_a|_{-1/2}^2
    double rhs_tangential_sq = 0.0; // ||w||_0^2 + ||curl w||_{H^1'}^2
    double ratio_tangential = 0.0;
};
TraceReport trace_check(const VectorField& w); // 3D only

struct HodgeReport {
    double lhs = 0.0;          // ||F||_s
    double f_l2 = 0.0;
    double curl_piece = 0.0;   // ||curl F||_{s-1}
    double div_piece = 0.0;    // ||div F||_{s-1}
    double normal_bnd = 0.0;   // |dbar F . N|_{s-3/2}
    double tangential_bnd = 0.0;
    double rhs_normal = 0.0;
    double rhs_tangential = 0.0;
    double ratio_normal = 0.0;
    double ratio_tangential = 0.0;
};
HodgeReport hodge_check(const VectorField& F, int s); // 3D, s in 1..4

} // namespace vaceuler
