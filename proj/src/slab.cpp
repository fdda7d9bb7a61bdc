#include "vaceuler/slab.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "vaceuler/parallel.hpp"

namespace vaceuler {

namespace {

// 4-point Gauss-Legendre rule on [-1,1]; exact for degree <= 7.
constexpr double kGlx[4] = {-0.8611363115940526, -0.3399810435848563,
                            0.3399810435848563, 0.8611363115940526};
constexpr double kGlw[4] = {0.3478548451374538, 0.6521451548625461,
                            0.6521451548625461, 0.3478548451374538};

// Diagonal-norm SBP(6,3) pair on the unit-spaced grid. The norm is the
// classical one; the free parameter of the family is pinned by least-squares
// minimizing the degree-4 boundary truncation error (t = 7/10).
constexpr double kSbpSigma[6] = {
    13649.0 / 43200.0, 12013.0 / 8640.0, 2711.0 / 4320.0,
    5359.0 / 4320.0, 7877.0 / 8640.0, 43801.0 / 43200.0};

constexpr double kSbpBlock[6][9] = {
    {-21600.0 / 13649.0, 83096.0 / 40947.0, -10271.0 / 81894.0,
     -6477.0 / 13649.0, 9875.0 / 81894.0, 1333.0 / 40947.0, 0, 0, 0},
    {-83096.0 / 180195.0, 0, 3341.0 / 12013.0, 19973.0 / 72078.0,
     -995.0 / 12013.0, -1351.0 / 120130.0, 0, 0, 0},
    {10271.0 / 162660.0, -3341.0 / 5422.0, 0, 4601.0 / 8133.0,
     191.0 / 10844.0, -821.0 / 27110.0, 0, 0, 0},
    {6477.0 / 53590.0, -19973.0 / 64308.0, -4601.0 / 16077.0, 0,
     713.0 / 1398.0, -15287.0 / 321540.0, 72.0 / 5359.0, 0, 0},
    {-1975.0 / 47262.0, 995.0 / 7877.0, -191.0 / 15754.0, -16399.0 / 23631.0,
     0, 6048.0 / 7877.0, -1296.0 / 7877.0, 144.0 / 7877.0, 0},
    {-1333.0 / 131403.0, 1351.0 / 87602.0, 821.0 / 43801.0, 15287.0 / 262806.0,
     -30240.0 / 43801.0, 0, 32400.0 / 43801.0, -6480.0 / 43801.0,
     720.0 / 43801.0}};

constexpr double kCentral6[7] = {-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0,
                                 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};

constexpr int kStencil = 7; // order-6 window

} // namespace

VerticalScheme vertical_scheme_from_string(const std::string& s) {
    if (s == "onesided6") return VerticalScheme::OneSided6;
    if (s == "sbp63") return VerticalScheme::Sbp63;
    throw ConfigError("unknown vertical_scheme '" + s + "' (onesided6|sbp63)");
}

std::string to_string(VerticalScheme s) {
    return s == VerticalScheme::OneSided6 ? "onesided6" : "sbp63";
}

void Slab::validate() const {
    if (dim < 1 || dim > 3) throw ConfigError("slab dim must be 1, 2 or 3");
    if (n_vertical < 8) throw ConfigError("n_vertical must be >= 8");
    if (dim > 1 && n_horizontal < 4) throw ConfigError("n_horizontal must be >= 4");
}

std::vector<double> fornberg_weights(double x0, const std::vector<double>& xs, int m) {
    const int n = int(xs.size());
    std::vector<double> c(std::size_t(n) * (m + 1), 0.0);
    auto C = [&](int i, int k) -> double& { return c[std::size_t(i) * (m + 1) + k]; };
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = C(i, m);
    return w;
}

// ---------------------------------------------------------------------------
// fields

ScalarField::ScalarField(GridPtr g, double fill)
    : grid_(std::move(g)), v_(grid_->nodes(), fill) {}

ScalarField::ScalarField(GridPtr g, std::vector<double> values)
    : grid_(std::move(g)), v_(std::move(values)) {
    if (v_.size() != grid_->nodes()) throw Error("ScalarField size mismatch");
}

VectorField::VectorField(GridPtr g, int ncomp, double fill)
    : grid_(std::move(g)), nc_(ncomp), v_(grid_->nodes() * std::size_t(ncomp), fill) {}

std::size_t VectorField::nodes() const { return grid_ ? grid_->nodes() : 0; }
double* VectorField::comp(int c) { return v_.data() + std::size_t(c) * nodes(); }
const double* VectorField::comp(int c) const { return v_.data() + std::size_t(c) * nodes(); }

ScalarField VectorField::component(int c) const {
    std::vector<double> out(comp(c), comp(c) + nodes());
    return ScalarField(grid_, std::move(out));
}

void VectorField::set_component(int c, const ScalarField& f) {
    std::memcpy(comp(c), f.data(), nodes() * sizeof(double));
}

BoundaryField::BoundaryField(GridPtr g, double fill)
    : grid_(std::move(g)), v_(grid_->hsize(), fill) {}

BoundaryField::BoundaryField(GridPtr g, std::vector<double> values)
    : grid_(std::move(g)), v_(std::move(values)) {
    if (v_.size() != grid_->hsize()) throw Error("BoundaryField size mismatch");
}

// ---------------------------------------------------------------------------
// grid construction

GridPtr Grid::make(const Slab& spec) {
    spec.validate();
    return GridPtr(new Grid(spec));
}

Grid::Grid(const Slab& spec) : spec_(spec) {
    hsize_ = 1;
    for (int d = 0; d < hdims(); ++d) hsize_ *= std::size_t(spec_.n_horizontal);
    nodes_ = hsize_ * std::size_t(spec_.n_vertical);
    build_horizontal();
    build_vertical();
}

void Grid::build_horizontal() {
    if (hdims() == 0) return;
    const int n = nh();
    dh_.assign(std::size_t(n) * n, 0.0);
    const bool even = n % 2 == 0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const double sgn = ((j - k) % 2 == 0) ? 1.0 : -1.0;
            const double arg = M_PI * double(j - k) / n;
            dh_[std::size_t(j) * n + k] =
                even ? M_PI * sgn / std::tan(arg) : M_PI * sgn / std::sin(arg);
        }
    }
    dft_cos_.assign(std::size_t(n) * n, 0.0);
    dft_sin_.assign(std::size_t(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double ang = 2.0 * M_PI * double(j) * double(k) / n;
            dft_cos_[std::size_t(k) * n + j] = std::cos(ang) / n;
            dft_sin_[std::size_t(k) * n + j] = std::sin(ang) / n;
        }
    }
}

void Grid::build_vertical() {
    const int n = nv();
    const double h = hv();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = i * h;

    // d2: one-sided interpolatory second derivative (used by the H1' solver
    // whatever the scheme).
    d2v_.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - kStencil / 2, 0, n - kStencil);
        std::vector<double> xs(x.begin() + lo, x.begin() + lo + kStencil);
        auto w2 = fornberg_weights(x[i], xs, 2);
        for (int j = 0; j < kStencil; ++j) d2v_[std::size_t(i) * n + lo + j] = w2[j];
    }

    if (spec_.vertical_scheme == VerticalScheme::OneSided6) {
        d1v_.assign(std::size_t(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            int lo = std::clamp(i - kStencil / 2, 0, n - kStencil);
            std::vector<double> xs(x.begin() + lo, x.begin() + lo + kStencil);
            auto w1 = fornberg_weights(x[i], xs, 1);
            for (int j = 0; j < kStencil; ++j) d1v_[std::size_t(i) * n + lo + j] = w1[j];
        }
        // integrate the degree-6 interpolant on each interval with GL4
        wq_.assign(n, 0.0);
        for (int i = 0; i < n - 1; ++i) {
            const double a = x[i], b = x[i + 1];
            int lo = std::clamp(i - 2, 0, n - kStencil);
            std::vector<double> xs(x.begin() + lo, x.begin() + lo + kStencil);
            for (int q = 0; q < 4; ++q) {
                const double xq = 0.5 * (a + b) + 0.5 * (b - a) * kGlx[q];
                auto lw = fornberg_weights(xq, xs, 0);
                for (int j = 0; j < kStencil; ++j)
                    wq_[lo + j] += 0.5 * (b - a) * kGlw[q] * lw[j];
            }
        }
    } else { // Sbp63
        if (n < 12) throw ConfigError("sbp63 scheme needs n_vertical >= 12");
        d1v_.assign(std::size_t(n) * n, 0.0);
        wq_.assign(n, h);
        for (int r = 0; r < 6; ++r) {
            wq_[r] = kSbpSigma[r] * h;
            wq_[n - 1 - r] = kSbpSigma[r] * h;
            for (int c = 0; c < 9; ++c) {
                d1v_[std::size_t(r) * n + c] = kSbpBlock[r][c] / h;
                d1v_[std::size_t(n - 1 - r) * n + (n - 1 - c)] = -kSbpBlock[r][c] / h;
            }
        }
        for (int i = 6; i < n - 6; ++i)
            for (int j = 0; j < 7; ++j)
                d1v_[std::size_t(i) * n + (i - 3 + j)] = kCentral6[j] / h;
    }
}

double Grid::h_min() const {
    return hdims() > 0 ? std::min(hh(), hv()) : hv();
}

double Grid::coord_of(std::size_t idx, int axis) const {
    const int n_v = nv();
    if (axis == dim() - 1) return xvert(int(idx % n_v));
    std::size_t hnode = idx / n_v;
    if (dim() == 2) return xhor(int(hnode));
    // dim == 3: hnode = i0*nh + i1
    return axis == 0 ? xhor(int(hnode) / nh()) : xhor(int(hnode) % nh());
}

ScalarField Grid::coordinate_field(int axis) const {
    ScalarField f(shared_from_this());
    for (std::size_t i = 0; i < nodes_; ++i) f[i] = coord_of(i, axis);
    return f;
}

// ---------------------------------------------------------------------------
// operator application

void Grid::apply_vertical(const double* in, double* out,
                          const std::vector<double>& mat) const {
    const int n = nv();
    par::parallel_for(hsize_, [&](std::size_t c0, std::size_t c1) {
        for (std::size_t c = c0; c < c1; ++c) {
            const double* src = in + c * n;
            double* dst = out + c * n;
            for (int i = 0; i < n; ++i) {
                const double* row = mat.data() + std::size_t(i) * n;
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += row[j] * src[j];
                dst[i] = s;
            }
        }
    });
}

void Grid::apply_horizontal(const double* in, double* out, int haxis,
                            const std::vector<double>& mat) const {
    const int n = nh();
    const int n_v = nv();
    if (dim() == 2) {
        // lines indexed by iv, stride nv
        par::parallel_for(std::size_t(n_v), [&](std::size_t v0, std::size_t v1) {
            for (std::size_t iv = v0; iv < v1; ++iv) {
                for (int i = 0; i < n; ++i) {
                    const double* row = mat.data() + std::size_t(i) * n;
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += row[j] * in[std::size_t(j) * n_v + iv];
                    out[std::size_t(i) * n_v + iv] = s;
                }
            }
        });
        return;
    }
    // dim == 3
    if (haxis == 0) {
        // stride nh*nv; lines indexed by (i1, iv) pairs
        const std::size_t stride = std::size_t(n) * n_v;
        par::parallel_for(stride, [&](std::size_t b0, std::size_t b1) {
            for (std::size_t b = b0; b < b1; ++b) {
                for (int i = 0; i < n; ++i) {
                    const double* row = mat.data() + std::size_t(i) * n;
                    double s = 0.0;
                    for (int j = 0; j < n; ++j) s += row[j] * in[std::size_t(j) * stride + b];
                    out[std::size_t(i) * stride + b] = s;
                }
            }
        });
    } else {
        // stride nv; lines indexed by (i0, iv)
        par::parallel_for(std::size_t(n), [&](std::size_t a0, std::size_t a1) {
            for (std::size_t i0 = a0; i0 < a1; ++i0) {
                const std::size_t base0 = i0 * std::size_t(n) * n_v;
                for (int iv = 0; iv < n_v; ++iv) {
                    for (int i = 0; i < n; ++i) {
                        const double* row = mat.data() + std::size_t(i) * n;
                        double s = 0.0;
                        for (int j = 0; j < n; ++j)
                            s += row[j] * in[base0 + std::size_t(j) * n_v + iv];
                        out[base0 + std::size_t(i) * n_v + iv] = s;
                    }
                }
            }
        });
    }
}

ScalarField Grid::d_horizontal(const ScalarField& f, int haxis) const {
    if (haxis < 0 || haxis >= hdims())
        throw DimensionError("horizontal axis out of range for slab dimension");
    ScalarField out(shared_from_this());
    apply_horizontal(f.data(), out.data(), haxis, dh_);
    return out;
}

ScalarField Grid::d_vertical(const ScalarField& f) const {
    ScalarField out(shared_from_this());
    apply_vertical(f.data(), out.data(), d1v_);
    return out;
}

ScalarField Grid::d_axis(const ScalarField& f, int axis) const {
    return axis == dim() - 1 ? d_vertical(f) : d_horizontal(f, axis);
}

double Grid::integrate(const ScalarField& f) const {
    const int n_v = nv();
    const double harea = 1.0 / double(hsize_); // exact Fourier mean
    const double* w = wq_.data();
    const double* v = f.data();
    return harea * par::parallel_sum(hsize_, [&](std::size_t c) {
        const double* src = v + c * n_v;
        double s = 0.0;
        for (int i = 0; i < n_v; ++i) s += w[i] * src[i];
        return s;
    });
}

BoundaryField Grid::trace_top(const ScalarField& f) const {
    if (dim() < 2) throw DimensionError("boundary trace requires dim >= 2");
    BoundaryField out(shared_from_this());
    const int n_v = nv();
    for (std::size_t c = 0; c < hsize_; ++c) out[c] = f[c * n_v + (n_v - 1)];
    return out;
}

BoundaryField Grid::trace_bottom(const ScalarField& f) const {
    if (dim() < 2) throw DimensionError("boundary trace requires dim >= 2");
    BoundaryField out(shared_from_this());
    const int n_v = nv();
    for (std::size_t c = 0; c < hsize_; ++c) out[c] = f[c * n_v];
    return out;
}

void Grid::dft_boundary(const BoundaryField& f, std::vector<double>& hat_re,
                        std::vector<double>& hat_im) const {
    const int n = nh();
    hat_re.assign(hsize_, 0.0);
    hat_im.assign(hsize_, 0.0);
    if (dim() == 2) {
        for (int k = 0; k < n; ++k) {
            const double* cr = dft_cos_.data() + std::size_t(k) * n;
            const double* sr = dft_sin_.data() + std::size_t(k) * n;
            double re = 0.0, im = 0.0;
            for (int j = 0; j < n; ++j) {
                re += cr[j] * f[j];
                im -= sr[j] * f[j];
            }
            hat_re[k] = re;
            hat_im[k] = im;
        }
        return;
    }
    // dim == 3: transform axis 1 then axis 0
    std::vector<double> tr(hsize_), ti(hsize_);
    for (int i0 = 0; i0 < n; ++i0) {
        for (int k = 0; k < n; ++k) {
            const double* cr = dft_cos_.data() + std::size_t(k) * n;
            const double* sr = dft_sin_.data() + std::size_t(k) * n;
            double re = 0.0, im = 0.0;
            for (int j = 0; j < n; ++j) {
                const double v = f[std::size_t(i0) * n + j];
                re += cr[j] * v;
                im -= sr[j] * v;
            }
            tr[std::size_t(i0) * n + k] = re;
            ti[std::size_t(i0) * n + k] = im;
        }
    }
    for (int k1 = 0; k1 < n; ++k1) {
        for (int k0 = 0; k0 < n; ++k0) {
            const double* cr = dft_cos_.data() + std::size_t(k0) * n;
            const double* sr = dft_sin_.data() + std::size_t(k0) * n;
            double re = 0.0, im = 0.0;
            for (int j = 0; j < n; ++j) {
                const double a = tr[std::size_t(j) * n + k1];
                const double b = ti[std::size_t(j) * n + k1];
                re += cr[j] * a + sr[j] * b;
                im += cr[j] * b - sr[j] * a;
            }
            hat_re[std::size_t(k0) * n + k1] = re;
            hat_im[std::size_t(k0) * n + k1] = im;
        }
    }
}

double Grid::integrate_boundary(const BoundaryField& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < hsize_; ++i) s += f[i];
    return s / double(hsize_);
}

void Grid::filter_horizontal(VectorField& f) const {
    if (hdims() == 0) return;
    const int n = nh();
    if (filt_.empty()) {
        // real circulant projector zeroing |freq| > n/3
        filt_.assign(std::size_t(n) * n, 0.0);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (std::abs(freq(k, n)) > n / 3) continue;
                    s += std::cos(2.0 * M_PI * double(k) * double(j - l) / n) / n;
                }
                filt_[std::size_t(j) * n + l] = s;
            }
    }
    std::vector<double> tmp(nodes_);
    for (int c = 0; c < f.ncomp(); ++c) {
        for (int a = 0; a < hdims(); ++a) {
            apply_horizontal(f.comp(c), tmp.data(), a, filt_);
            std::memcpy(f.comp(c), tmp.data(), nodes_ * sizeof(double));
        }
    }
}

// ---------------------------------------------------------------------------
// element-wise helpers

namespace {
void check_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get()) throw Error("fields live on different grids");
}
} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

ScalarField mul(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

ScalarField reciprocal(const ScalarField& a) {
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 1.0 / a[i];
    return out;
}

void axpy(double s, const ScalarField& x, ScalarField& y) {
    check_same_grid(x.grid(), y.grid());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    check_same_grid(a.grid(), b.grid());
    VectorField out(a.grid(), a.ncomp());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

VectorField operator*(double s, const VectorField& a) {
    VectorField out(a.grid(), a.ncomp());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
    return out;
}

void axpy(double s, const VectorField& x, VectorField& y) {
    check_same_grid(x.grid(), y.grid());
    for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] += s * x.data()[i];
}

double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

double sup_norm(const VectorField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.data()[i]));
    return m;
}

double min_value(const ScalarField& f) {
    double m = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) m = std::min(m, f[i]);
    return m;
}

double max_value(const ScalarField& f) {
    double m = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) m = std::max(m, f[i]);
    return m;
}

bool all_finite(const ScalarField& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i])) return false;
    return true;
}

bool all_finite(const VectorField& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f.data()[i])) return false;
    return true;
}

void require_finite(const ScalarField& f, const std::string& what) {
    if (!all_finite(f)) throw FieldNotFinite(what + " contains NaN or Inf");
}

void require_finite(const VectorField& f, const std::string& what) {
    if (!all_finite(f)) throw FieldNotFinite(what + " contains NaN or Inf");
}

ScalarField d_bar(const ScalarField& f, int direction) {
    const auto& g = f.grid();
    if (g->dim() < 2) throw DimensionError("d_bar requires a slab with >= 2 dimensions");
    if (direction < 1 || direction > g->hdims())
        throw DimensionError("d_bar direction out of range for slab dimension");
    return g->d_horizontal(f, direction - 1);
}

} // namespace vaceuler
