#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "vaceuler/errors.hpp"

namespace vaceuler {

// Vertical discretization on [0,1], uniform nodes including both boundaries.
//
//  OneSided6: order-6 finite differences everywhere, one-sided 7-point
//             stencils at the boundaries, paired with an interpolatory
//             quadrature that integrates the degree-6 interpolant exactly.
//  Sbp63:     diagonal-norm summation-by-parts pair (interior order 6,
//             boundary rows order 3); its norm is the quadrature. The pair
//             satisfies w_i D_ij + w_j D_ji = B_ij to rounding, so the
//             semi-discrete wall-bounded dynamics conserve the physical
//             energy up to the (grid-convergent, dt-independent) defect
//             between the evolved nondegenerate momentum form and the
//             conservative one. Used by the simulator.
enum class VerticalScheme { OneSided6, Sbp63 };

VerticalScheme vertical_scheme_from_string(const std::string& s);
std::string to_string(VerticalScheme s);

// The reference slab T^(dim-1) x (0,1). Horizontal directions are periodic,
// the vertical direction runs from the fixed bottom x=0 to the vacuum
// boundary x=1.
struct Slab {
    int dim = 1;                 // 1, 2 or 3
    int n_horizontal = 0;        // nodes per periodic direction (dim-1 of them)
    int n_vertical = 0;          // nodes on [0,1], both boundaries included
    VerticalScheme vertical_scheme = VerticalScheme::OneSided6;

    void validate() const;       // dim in 1..3, n_vertical >= 8, n_horizontal >= 4
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0);
    ScalarField(GridPtr g, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    const std::vector<double>& values() const { return v_; }

private:
    GridPtr grid_;
    std::vector<double> v_;
};

// Component-major vector field (ncomp contiguous scalar blocks).
class VectorField {
public:
    VectorField() = default;
    VectorField(GridPtr g, int ncomp, double fill = 0.0);

    const GridPtr& grid() const { return grid_; }
    int ncomp() const { return nc_; }
    std::size_t nodes() const;
    double* comp(int c);
    const double* comp(int c) const;
    ScalarField component(int c) const; // copy
    void set_component(int c, const ScalarField& f);
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }

private:
    GridPtr grid_;
    int nc_ = 0;
    std::vector<double> v_;
};

// Samples on the top boundary Gamma (dim >= 2): n_horizontal^(dim-1) values.
class BoundaryField {
public:
    BoundaryField() = default;
    explicit BoundaryField(GridPtr g, double fill = 0.0);
    BoundaryField(GridPtr g, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

private:
    GridPtr grid_;
    std::vector<double> v_;
};

// Immutable discretization: node placement plus cached operator matrices.
// All member operations are pure (snapshot in, snapshot out) and safe to call
// concurrently.
class Grid : public std::enable_shared_from_this<Grid> {
public:
    static GridPtr make(const Slab& spec);

    const Slab& slab() const { return spec_; }
    int dim() const { return spec_.dim; }
    int hdims() const { return spec_.dim - 1; }
    int nh() const { return spec_.n_horizontal; }
    int nv() const { return spec_.n_vertical; }
    std::size_t nodes() const { return nodes_; }
    std::size_t hsize() const { return hsize_; } // nodes on Gamma
    double hv() const { return 1.0 / (spec_.n_vertical - 1); }
    double hh() const { return 1.0 / spec_.n_horizontal; }
    double h_min() const;

    double xvert(int iv) const { return iv * hv(); }
    double xhor(int ih) const { return ih * hh(); }

    // Coordinate of node `idx` along `axis` (0..dim-1, vertical last).
    double coord_of(std::size_t idx, int axis) const;
    int vertical_index_of(std::size_t idx) const { return int(idx % spec_.n_vertical); }
    ScalarField coordinate_field(int axis) const;

    // --- derivative operators -------------------------------------------
    // Spectral derivative along horizontal axis haxis (0-based, < hdims()).
    ScalarField d_horizontal(const ScalarField& f, int haxis) const;
    // Vertical derivative by the slab's scheme.
    ScalarField d_vertical(const ScalarField& f) const;
    // axis in 0..dim-1: horizontal for axis < hdims(), vertical for the last.
    ScalarField d_axis(const ScalarField& f, int axis) const;

    // --- quadrature -------------------------------------------------------
    double integrate(const ScalarField& f) const;
    const std::vector<double>& vertical_weights() const { return wq_; }

    // --- vertical operator access (norms module solver) -------------------
    // Row-major nv x nv matrices. d2 is always the one-sided interpolatory
    // second-derivative operator regardless of scheme.
    const std::vector<double>& vertical_d1() const { return d1v_; }
    const std::vector<double>& vertical_d2() const { return d2v_; }

    // --- boundary traces (dim >= 2) ---------------------------------------
    BoundaryField trace_top(const ScalarField& f) const;
    BoundaryField trace_bottom(const ScalarField& f) const;

    // --- horizontal DFT ----------------------------------------------------
    // hat_re/hat_im sized like the boundary field; normalization such that
    // sum_k |hat_k|^2 = mean_j |f_j|^2 (Parseval with the L2(Gamma) mean).
    void dft_boundary(const BoundaryField& f, std::vector<double>& hat_re,
                      std::vector<double>& hat_im) const;
    // Integer frequency of index k on an n-point circle, in [-n/2, n/2).
    static int freq(int k, int n) { return k <= n / 2 ? k : k - n; }

    // Zero all horizontal modes with |freq| > nh/3 of each component
    // (spectral anti-aliasing filter; exact projection).
    void filter_horizontal(VectorField& f) const;

    // Surface quadrature on Gamma (exact Fourier mean).
    double integrate_boundary(const BoundaryField& f) const;

private:
    explicit Grid(const Slab& spec);
    void build_horizontal();
    void build_vertical();
    void apply_vertical(const double* in, double* out, const std::vector<double>& mat) const;
    void apply_horizontal(const double* in, double* out, int haxis,
                          const std::vector<double>& mat) const;

    Slab spec_;
    std::size_t nodes_ = 0;
    std::size_t hsize_ = 1;
    std::vector<double> dh_;        // nh x nh spectral differentiation
    std::vector<double> d1v_, d2v_; // nv x nv vertical operators
    std::vector<double> wq_;        // nv quadrature weights
    std::vector<double> dft_cos_, dft_sin_; // nh x nh, 1/n normalized
    mutable std::vector<double> filt_;      // lazily built filter matrix
};

// --- element-wise helpers and reductions ----------------------------------
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField mul(const ScalarField& a, const ScalarField& b);
ScalarField reciprocal(const ScalarField& a);
void axpy(double s, const ScalarField& x, ScalarField& y); // y += s*x

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
void axpy(double s, const VectorField& x, VectorField& y);

double sup_norm(const ScalarField& f);
double sup_norm(const VectorField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);
void require_finite(const ScalarField& f, const std::string& what);
void require_finite(const VectorField& f, const std::string& what);

// Spec-facing horizontal derivative: direction is 1-based (1 or 2).
// Errors when the slab has fewer than two dimensions or the direction is out
// of range for the slab dimension.
ScalarField d_bar(const ScalarField& f, int direction);

// Fornberg finite-difference weights for the m-th derivative at x0 from the
// given nodes (exposed for tests and the norms solver).
std::vector<double> fornberg_weights(double x0, const std::vector<double>& xs, int m);

} // namespace vaceuler
