#include "vaceuler/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace vaceuler {

namespace {

// all multi-indices over `dim` axes with |alpha| <= k, graded order
std::vector<std::array<int, 3>> multi_indices(int dim, int k) {
    std::vector<std::array<int, 3>> out;
    for (int total = 0; total <= k; ++total) {
        std::array<int, 3> a{0, 0, 0};
        // iterate compositions of `total` into dim parts
        std::function<void(int, int)> rec = [&](int axis, int left) {
            if (axis == dim - 1) {
                a[axis] = left;
                out.push_back(a);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                a[axis] = v;
                rec(axis + 1, left - v);
            }
        };
        rec(0, total);
    }
    return out;
}

// derivative cache keyed by multi-index
class DerivativeTable {
public:
    explicit DerivativeTable(const ScalarField& f) { cache_[{0, 0, 0}] = f; }

    const ScalarField& get(const std::array<int, 3>& a) {
        auto it = cache_.find(a);
        if (it != cache_.end()) return it->second;
        // find an axis to step down
        std::array<int, 3> parent = a;
        int axis = 0;
        for (int d = 0; d < 3; ++d)
            if (a[d] > 0) { axis = d; break; }
        parent[axis] -= 1;
        const ScalarField& pf = get(parent);
        ScalarField df = pf.grid()->d_axis(pf, axis);
        auto [jt, ok] = cache_.emplace(a, std::move(df));
        (void)ok;
        return jt->second;
    }

private:
    std::map<std::array<int, 3>, ScalarField> cache_;
};

double l2_sq(const ScalarField& f) {
    return f.grid()->integrate(mul(f, f));
}

double interior_norm_sq(const ScalarField& f, int k) {
    const int dim = f.grid()->dim();
    DerivativeTable tab(f);
    double total = 0.0;
    for (const auto& a : multi_indices(dim, k)) total += l2_sq(tab.get(a));
    return total;
}

ScalarField distance_weight(const GridPtr& g, int p) {
    ScalarField w(g);
    const int nv = g->nv();
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        const double d = 1.0 - g->xvert(int(i % nv));
        w[i] = p == 1 ? d : d * d;
    }
    return w;
}

} // namespace

double interior_norm(const ScalarField& f, int k) {
    return std::sqrt(interior_norm_sq(f, k));
}

double interior_norm(const VectorField& f, int k) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += interior_norm_sq(f.component(c), k);
    return std::sqrt(s);
}

namespace {
template <typename F>
double frac_interp(const F& f, double s, double (*norm_fn)(const F&, int)) {
    if (s < 0.0) throw Error("fractional interior norms require s >= 0");
    const int m = int(std::floor(s));
    const double th = s - m;
    if (th == 0.0) return norm_fn(f, m);
    const double a = norm_fn(f, m), b = norm_fn(f, m + 1);
    if (a == 0.0 || b == 0.0) return 0.0;
    return std::pow(a, 1.0 - th) * std::pow(b, th);
}
} // namespace

double interior_norm_frac(const ScalarField& f, double s) {
    return frac_interp<ScalarField>(f, s, interior_norm);
}
double interior_norm_frac(const VectorField& f, double s) {
    return frac_interp<VectorField>(f, s, interior_norm);
}

double sobolev_norm_of_map(const VectorField& eta, int k) {
    const auto& g = eta.grid();
    const int dim = g->dim();
    // displacement = eta - x
    VectorField disp = eta;
    for (int r = 0; r < dim; ++r) {
        double* p = disp.comp(r);
        for (std::size_t i = 0; i < g->nodes(); ++i) p[i] -= g->coord_of(i, r);
    }
    double total = 0.0;
    for (int r = 0; r < dim; ++r) {
        DerivativeTable tab(disp.component(r));
        for (const auto& a : multi_indices(dim, k)) {
            const int order = a[0] + a[1] + a[2];
            ScalarField df = tab.get(a);
            if (order == 0) {
                df = eta.component(r); // values of the map itself
            } else if (order == 1) {
                int axis = 0;
                for (int d = 0; d < 3; ++d)
                    if (a[d] == 1) axis = d;
                if (axis == r) {
                    ScalarField shifted = df;
                    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += 1.0;
                    df = shifted;
                }
            }
            total += l2_sq(df);
        }
    }
    return std::sqrt(total);
}

double sobolev_norm_of_map_frac(const VectorField& eta, double s) {
    const int m = int(std::floor(s));
    const double th = s - m;
    if (th == 0.0) return sobolev_norm_of_map(eta, m);
    const double a = sobolev_norm_of_map(eta, m);
    const double b = sobolev_norm_of_map(eta, m + 1);
    if (a == 0.0 || b == 0.0) return 0.0;
    return std::pow(a, 1.0 - th) * std::pow(b, th);
}

double boundary_norm(const BoundaryField& f, double s) {
    const auto& g = f.grid();
    if (g->dim() < 2) throw DimensionError("boundary norms require dim >= 2");
    std::vector<double> re, im;
    g->dft_boundary(f, re, im);
    const int n = g->nh();
    double total = 0.0;
    if (g->dim() == 2) {
        for (int k = 0; k < n; ++k) {
            const double xi = Grid::freq(k, n);
            const double mult = std::pow(1.0 + 4.0 * M_PI * M_PI * xi * xi, s);
            total += mult * (re[k] * re[k] + im[k] * im[k]);
        }
    } else {
        for (int k0 = 0; k0 < n; ++k0)
            for (int k1 = 0; k1 < n; ++k1) {
                const double x0 = Grid::freq(k0, n), x1 = Grid::freq(k1, n);
                const double mult =
                    std::pow(1.0 + 4.0 * M_PI * M_PI * (x0 * x0 + x1 * x1), s);
                const std::size_t idx = std::size_t(k0) * n + k1;
                total += mult * (re[idx] * re[idx] + im[idx] * im[idx]);
            }
    }
    return std::sqrt(total);
}

// ---------------------------------------------------------------------------
// (I - Lap) Riesz solve for the H^1(Omega)' norm

namespace {

// dense LU with partial pivoting
struct Lu {
    int n = 0;
    std::vector<double> a;   // factored, row-major
    std::vector<int> piv;

    void factor(std::vector<double> m, int nn) {
        n = nn;
        a = std::move(m);
        piv.resize(n);
        for (int i = 0; i < n; ++i) piv[i] = i;
        for (int col = 0; col < n; ++col) {
            int best = col;
            double bv = std::abs(a[std::size_t(col) * n + col]);
            for (int r = col + 1; r < n; ++r) {
                const double v = std::abs(a[std::size_t(r) * n + col]);
                if (v > bv) { bv = v; best = r; }
            }
            if (bv == 0.0) throw Error("singular discretization in dual-norm solve");
            if (best != col) {
                for (int c = 0; c < n; ++c)
                    std::swap(a[std::size_t(best) * n + c], a[std::size_t(col) * n + c]);
                std::swap(piv[best], piv[col]);
            }
            const double d = a[std::size_t(col) * n + col];
            for (int r = col + 1; r < n; ++r) {
                const double f = a[std::size_t(r) * n + col] / d;
                a[std::size_t(r) * n + col] = f;
                for (int c = col + 1; c < n; ++c)
                    a[std::size_t(r) * n + c] -= f * a[std::size_t(col) * n + c];
            }
        }
    }

    void solve(const double* b, double* x) const {
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = b[piv[i]];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) y[i] -= a[std::size_t(i) * n + j] * y[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) y[i] -= a[std::size_t(i) * n + j] * y[j];
            y[i] /= a[std::size_t(i) * n + i];
        }
        for (int i = 0; i < n; ++i) x[i] = y[i];
    }
};

// vertical operator for one horizontal mode: (1 + lambda) I - D2, with the
// first and last rows replaced by one-sided first-derivative rows (u' = 0).
std::vector<double> neumann_matrix(const GridPtr& g, double lambda) {
    const int n = g->nv();
    const auto& d2 = g->vertical_d2();
    std::vector<double> m(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[std::size_t(i) * n + j] = (i == j ? 1.0 + lambda : 0.0) - d2[std::size_t(i) * n + j];
    // Neumann closure rows (order-6 one-sided first derivative)
    const double h = g->hv();
    std::vector<double> xs(7);
    for (int j = 0; j < 7; ++j) xs[j] = j * h;
    auto w_lo = fornberg_weights(0.0, xs, 1);
    for (int j = 0; j < n; ++j) m[j] = 0.0;
    for (int j = 0; j < 7; ++j) m[j] = w_lo[j];
    for (int j = 0; j < 7; ++j) xs[j] = (n - 7 + j) * h;
    auto w_hi = fornberg_weights((n - 1) * h, xs, 1);
    for (int j = 0; j < n; ++j) m[std::size_t(n - 1) * n + j] = 0.0;
    for (int j = 0; j < 7; ++j)
        m[std::size_t(n - 1) * n + (n - 7 + j)] = w_hi[j];
    return m;
}

// in-place horizontal DFT of a complex field pair; no-op in 1D. Forward maps
// nodal values to modal coefficients with the 1/n normalization; inverse maps
// back exactly.
void horizontal_dft_inplace(const GridPtr& g, std::vector<double>& re,
                            std::vector<double>& im, bool inverse) {
    if (g->hdims() == 0) return;
    const std::size_t n = g->nodes();
    const int nh = g->nh();
    const int nv = g->nv();

    auto pass = [&](int haxis) {
        std::vector<double> nre(n), nim(n);
        auto line = [&](std::size_t base, std::size_t stride) {
            for (int k = 0; k < nh; ++k) {
                double sr = 0.0, si = 0.0;
                for (int j = 0; j < nh; ++j) {
                    const double ang = 2.0 * M_PI * double(j) * double(k) / nh;
                    const double c = std::cos(ang), s = std::sin(ang);
                    const double ar = re[base + j * stride], ai = im[base + j * stride];
                    if (!inverse) {
                        sr += (c * ar + s * ai) / nh;
                        si += (c * ai - s * ar) / nh;
                    } else {
                        sr += c * ar - s * ai;
                        si += c * ai + s * ar;
                    }
                }
                nre[base + k * stride] = sr;
                nim[base + k * stride] = si;
            }
        };
        if (g->dim() == 2) {
            for (int iv = 0; iv < nv; ++iv) line(iv, std::size_t(nv));
        } else if (haxis == 0) {
            const std::size_t stride = std::size_t(nh) * nv;
            for (std::size_t b = 0; b < stride; ++b) line(b, stride);
        } else {
            for (int i0 = 0; i0 < nh; ++i0)
                for (int iv = 0; iv < nv; ++iv)
                    line(std::size_t(i0) * nh * nv + iv, std::size_t(nv));
        }
        re.swap(nre);
        im.swap(nim);
    };
    for (int a = 0; a < g->hdims(); ++a) pass(a);
}

} // namespace

double dual_interior_norm(const ScalarField& f) {
    const auto& g = f.grid();
    const int nv = g->nv();
    std::vector<double> re(f.data(), f.data() + g->nodes());
    std::vector<double> im(g->nodes(), 0.0);
    horizontal_dft_inplace(g, re, im, false);

    std::map<long, Lu> factor_cache;
    auto solve_mode = [&](double lam2, double* rev, double* imv) {
        const long key = std::lround(lam2); // lam2 = |xi|^2 is integral
        auto it = factor_cache.find(key);
        if (it == factor_cache.end()) {
            Lu lu;
            lu.factor(neumann_matrix(g, 4.0 * M_PI * M_PI * double(lam2)), nv);
            it = factor_cache.emplace(key, std::move(lu)).first;
        }
        std::vector<double> rhs(nv), sol(nv);
        for (int pass = 0; pass < 2; ++pass) {
            double* v = pass == 0 ? rev : imv;
            for (int i = 0; i < nv; ++i) rhs[i] = v[i];
            rhs[0] = 0.0;
            rhs[nv - 1] = 0.0; // Neumann rows
            it->second.solve(rhs.data(), sol.data());
            for (int i = 0; i < nv; ++i) v[i] = sol[i];
        }
    };

    if (g->hdims() == 0) {
        solve_mode(0, re.data(), im.data());
    } else if (g->dim() == 2) {
        const int nh = g->nh();
        for (int k = 0; k < nh; ++k) {
            const double xi = Grid::freq(k, nh);
            solve_mode(long(xi * xi), re.data() + std::size_t(k) * nv,
                       im.data() + std::size_t(k) * nv);
        }
    } else {
        const int nh = g->nh();
        for (int k0 = 0; k0 < nh; ++k0)
            for (int k1 = 0; k1 < nh; ++k1) {
                const double x0 = Grid::freq(k0, nh), x1 = Grid::freq(k1, nh);
                const std::size_t base = (std::size_t(k0) * nh + k1) * nv;
                solve_mode(long(x0 * x0 + x1 * x1), re.data() + base, im.data() + base);
            }
    }

    // back to nodal values; the solution of a real problem is real
    horizontal_dft_inplace(g, re, im, true);
    ScalarField u(g, std::move(re));
    return interior_norm(u, 1);
}

double dual_interior_norm(const VectorField& f) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
        const double d = dual_interior_norm(f.component(c));
        s += d * d;
    }
    return std::sqrt(s);
}

double weighted_norm(const ScalarField& f, int p, bool with_gradient) {
    if (p != 1 && p != 2) throw Error("weighted_norm requires p in {1,2}");
    const auto& g = f.grid();
    ScalarField w = distance_weight(g, p);
    ScalarField integrand = mul(w, mul(f, f));
    if (with_gradient) {
        for (int axis = 0; axis < g->dim(); ++axis) {
            ScalarField df = g->d_axis(f, axis);
            integrand = integrand + mul(w, mul(df, df));
        }
    }
    return std::sqrt(g->integrate(integrand));
}

VectorField eulerian_curl(const VectorField& w) {
    const auto& g = w.grid();
    const int d = g->dim();
    if (d < 2) throw DimensionError("curl requires dim >= 2");
    if (d == 2) {
        VectorField out(g, 1);
        ScalarField c = g->d_axis(w.component(1), 0) - g->d_axis(w.component(0), 1);
        out.set_component(0, c);
        return out;
    }
    VectorField out(g, 3);
    out.set_component(0, g->d_axis(w.component(2), 1) - g->d_axis(w.component(1), 2));
    out.set_component(1, g->d_axis(w.component(0), 2) - g->d_axis(w.component(2), 0));
    out.set_component(2, g->d_axis(w.component(1), 0) - g->d_axis(w.component(0), 1));
    return out;
}

ScalarField eulerian_div(const VectorField& w) {
    const auto& g = w.grid();
    ScalarField out(g);
    for (int c = 0; c < g->dim(); ++c) axpy(1.0, g->d_axis(w.component(c), c), out);
    return out;
}

EmbeddingReport embedding_check(const ScalarField& F, int p) {
    EmbeddingReport r;
    r.lhs = interior_norm_frac(F, 1.0 - 0.5 * p);
    r.rhs = weighted_norm(F, p, true);
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    return r;
}

TraceReport trace_check(const VectorField& w) {
    const auto& g = w.grid();
    if (g->dim() != 3) throw DimensionError("trace_check is defined on the 3D slab");
    TraceReport r;
    const double w0 = interior_norm(w, 0);

    const double lhsn = boundary_norm(g->trace_top(w.component(2)), -0.5);
    const double divdual = dual_interior_norm(eulerian_div(w));
    r.lhs_normal_sq = lhsn * lhsn;
    r.rhs_normal_sq = w0 * w0 + divdual * divdual;
    r.ratio_normal = r.rhs_normal_sq > 0.0 ? r.lhs_normal_sq / r.rhs_normal_sq : 0.0;

    double lt = 0.0;
    for (int alpha = 0; alpha < 2; ++alpha) {
        const double b = boundary_norm(g->trace_top(w.component(alpha)), -0.5);
        lt += b * b;
    }
    const double curldual = dual_interior_norm(eulerian_curl(w));
    r.lhs_tangential_sq = lt;
    r.rhs_tangential_sq = w0 * w0 + curldual * curldual;
    r.ratio_tangential =
        r.rhs_tangential_sq > 0.0 ? r.lhs_tangential_sq / r.rhs_tangential_sq : 0.0;
    return r;
}

HodgeReport hodge_check(const VectorField& F, int s) {
    const auto& g = F.grid();
    if (g->dim() != 3) throw DimensionError("hodge_check is defined on the 3D slab");
    if (s < 1 || s > 4) throw Error("hodge_check requires s in 1..4");
    HodgeReport r;
    r.lhs = interior_norm(F, s);
    r.f_l2 = interior_norm(F, 0);
    r.curl_piece = interior_norm(eulerian_curl(F), s - 1);
    r.div_piece = interior_norm(eulerian_div(F), s - 1);

    const double bs = s - 1.5;
    double nb = 0.0;
    for (int alpha = 0; alpha < 2; ++alpha) {
        const double b = boundary_norm(g->trace_top(g->d_horizontal(F.component(2), alpha)), bs);
        nb += b * b;
    }
    r.normal_bnd = std::sqrt(nb);
    double tb = 0.0;
    for (int beta = 0; beta < 2; ++beta)
        for (int alpha = 0; alpha < 2; ++alpha) {
            const double b =
                boundary_norm(g->trace_top(g->d_horizontal(F.component(beta), alpha)), bs);
            tb += b * b;
        }
    r.tangential_bnd = std::sqrt(tb);

    r.rhs_normal = r.f_l2 + r.curl_piece + r.div_piece + r.normal_bnd;
    r.rhs_tangential = r.f_l2 + r.curl_piece + r.div_piece + r.tangential_bnd;
    r.ratio_normal = r.rhs_normal > 0.0 ? r.lhs / r.rhs_normal : 0.0;
    r.ratio_tangential = r.rhs_tangential > 0.0 ? r.lhs / r.rhs_tangential : 0.0;
    return r;
}

} // namespace vaceuler
