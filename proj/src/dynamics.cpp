#include "vaceuler/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "vaceuler/energy.hpp"
#include "vaceuler/norms.hpp"

namespace vaceuler {

// ---------------------------------------------------------------------------
// initial data

ScalarField make_rho0_profile(const GridPtr& g, const std::string& name) {
    ScalarField f(g);
    const int nv = g->nv();
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        const double x = g->xvert(int(i % nv));
        if (name == "linear") {
            f[i] = 1.0 - x;
        } else if (name == "compatible_cubic") {
            f[i] = 1.0 - 2.0 * x * x + x * x * x;
        } else if (name == "wall_flat8") {
            const double x8 = x * x * x * x * x * x * x * x;
            f[i] = 1.0 - x8 * (2.0 - x);
        } else if (name == "quadratic") {
            f[i] = (1.0 - x) * (1.0 - x);
        } else if (name == "constant") {
            f[i] = 1.0;
        } else {
            throw ConfigError("unknown rho0 profile '" + name + "'");
        }
    }
    return f;
}

VectorField make_u0_profile(const GridPtr& g, const std::string& name, double amplitude) {
    const int d = g->dim();
    VectorField u(g, d);
    if (name == "zero") return u;
    const int nv = g->nv();
    if (name == "rotational8") {
        if (d != 2) throw ConfigError("u0 profile 'rotational8' is 2D only");
        // psi = A sin(2 pi x1) xv^8 ; u = (psi,_v, -psi,_1) is divergence-free
        for (std::size_t i = 0; i < g->nodes(); ++i) {
            const double x1 = g->coord_of(i, 0);
            const double xv = g->xvert(int(i % nv));
            const double x7 = std::pow(xv, 7);
            u.comp(0)[i] = amplitude * 8.0 * std::sin(2.0 * M_PI * x1) * x7;
            u.comp(1)[i] = -amplitude * 2.0 * M_PI * std::cos(2.0 * M_PI * x1) * x7 * xv;
        }
        return u;
    }
    if (name == "gradient") {
        if (d < 2) throw ConfigError("u0 profile 'gradient' needs dim >= 2");
        // u = A D[sin(2 pi x1) xv^2 (3 - 2 xv)]  (curl-free; u.n = 0 on both
        // horizontal planes)
        for (std::size_t i = 0; i < g->nodes(); ++i) {
            const double x1 = g->coord_of(i, 0);
            const double xv = g->xvert(int(i % nv));
            const double q = xv * xv * (3.0 - 2.0 * xv);
            const double dq = 6.0 * xv * (1.0 - xv);
            u.comp(0)[i] = amplitude * 2.0 * M_PI * std::cos(2.0 * M_PI * x1) * q;
            u.comp(d - 1)[i] = amplitude * std::sin(2.0 * M_PI * x1) * dq;
        }
        return u;
    }
    throw ConfigError("unknown u0 profile '" + name + "'");
}

ValidationReport validate_initial_data(const InitialData& data) {
    ValidationReport r;
    const auto& g = data.rho0.grid();
    if (g.get() != data.u0.grid().get()) throw Error("rho0 and u0 live on different grids");
    require_finite(data.rho0, "rho0");
    require_finite(data.u0, "u0");

    const int nv = g->nv();
    const std::size_t hs = g->hsize();

    // rho0 = 0 on Gamma
    double bdry = 0.0;
    for (std::size_t c = 0; c < hs; ++c)
        bdry = std::max(bdry, std::abs(data.rho0[c * nv + (nv - 1)]));
    r.boundary_density = bdry;

    // d rho0 / dN < 0 on Gamma (N is the outward normal, +x_v)
    ScalarField drho = g->d_vertical(data.rho0);
    double slope = -INFINITY;
    for (std::size_t c = 0; c < hs; ++c)
        slope = std::max(slope, drho[c * nv + (nv - 1)]);
    r.slope_at_gamma = slope;

    // interior positivity
    double mininter = INFINITY;
    for (std::size_t c = 0; c < hs; ++c)
        for (int iv = 0; iv + 1 < nv; ++iv)
            mininter = std::min(mininter, data.rho0[c * nv + iv]);
    r.min_interior = mininter;

    // empirical degeneracy constant over the near-boundary band x_v >= 0.8
    double cmin = INFINITY;
    for (std::size_t c = 0; c < hs; ++c)
        for (int iv = 0; iv + 1 < nv; ++iv) {
            const double x = g->xvert(iv);
            if (x < 0.8) continue;
            cmin = std::min(cmin, data.rho0[c * nv + iv] / (1.0 - x));
        }
    r.degen_constant = cmin;

    // bottom boundary condition on u0
    double u3b = 0.0;
    for (std::size_t c = 0; c < hs; ++c)
        u3b = std::max(u3b, std::abs(data.u0.comp(g->dim() - 1)[c * nv]));

    if (bdry > 1e-12) {
        r.valid = false;
        r.failure = "NotPhysicalVacuum";
        r.detail = "rho0 does not vanish on Gamma (sup = " + std::to_string(bdry) + ")";
    } else if (!(slope < -data.vacuum_slope_tol)) {
        r.valid = false;
        r.failure = "NotPhysicalVacuum";
        r.detail = "d rho0/dN = " + std::to_string(slope) + " on Gamma is not negative";
    } else if (!(mininter > 0.0)) {
        r.valid = false;
        r.failure = "InteriorVacuum";
        r.detail = "rho0 <= 0 at an interior node (min = " + std::to_string(mininter) + ")";
    } else if (u3b > 1e-12) {
        r.valid = false;
        r.failure = "BottomBCViolation";
        r.detail = "u0 normal component at the fixed bottom = " + std::to_string(u3b);
    }
    return r;
}

void require_valid_initial_data(const InitialData& data) {
    ValidationReport r = validate_initial_data(data);
    if (r.valid) return;
    if (r.failure == "InteriorVacuum") throw InteriorVacuum(r.detail);
    if (r.failure == "BottomBCViolation") throw BottomBCViolation(r.detail);
    throw NotPhysicalVacuum(r.detail);
}

// ---------------------------------------------------------------------------
// state

State make_initial_state(const GridPtr& g, const InitialData& data) {
    State s;
    s.t = 0.0;
    s.eta = VectorField(g, g->dim());
    for (int c = 0; c < g->dim(); ++c) s.eta.set_component(c, g->coordinate_field(c));
    s.v = data.u0;
    return s;
}

const KinematicBundle& bundle_of(const State& s) {
    if (!s.bundle) s.bundle = std::make_shared<KinematicBundle>(build_bundle(s.eta));
    return *s.bundle;
}

// ---------------------------------------------------------------------------
// Taylor jets: c[k] = d_t^k f / k!, so products are plain Cauchy convolutions.

namespace {

using ScalarJet = std::vector<ScalarField>;

ScalarField jet_conv(const ScalarJet& a, const ScalarJet& b, int m) {
    const auto& g = a[0].grid();
    ScalarField out(g);
    for (int j = 0; j <= m; ++j) {
        const ScalarField& x = a[j];
        const ScalarField& y = b[m - j];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[i] * y[i];
    }
    return out;
}

// Workspace that extends, order by order, the jets of every quantity in the
// acceleration -2 (adj J^-1)^k_i (rho0 J^-1),_k built from the eta jet.
struct JetWorkspace {
    GridPtr g;
    int d;
    const ScalarField* rho0;
    std::vector<VectorField> eta; // scaled coefficients of eta

    std::vector<ScalarJet> deta;  // d*d entries, index r*d+s
    std::vector<ScalarJet> adj;   // d*d entries, index k*d+i
    ScalarJet jac, jinv, w;
    std::vector<ScalarJet> dw;    // d components
    std::vector<ScalarJet> ainvj; // d*d: adj * jinv
    std::vector<VectorField> acc; // scaled coefficients of eta_tt

    JetWorkspace(GridPtr grid, const ScalarField& rho, VectorField eta0, VectorField eta1)
        : g(std::move(grid)), d(g->dim()), rho0(&rho) {
        eta.push_back(std::move(eta0));
        eta.push_back(std::move(eta1));
        deta.resize(std::size_t(d) * d);
        adj.resize(std::size_t(d) * d);
        dw.resize(d);
        ainvj.resize(std::size_t(d) * d);
    }

    // append coefficient m of everything; requires eta coefficients 0..m
    void extend(int m) {
        // deta[m]
        {
            MatrixField grad = m == 0 ? map_gradient(eta[0]) : field_gradient(eta[m]);
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s)
                    deta[std::size_t(r) * d + s].push_back(grad.entry_field(r, s));
        }
        auto M = [&](int r, int s) -> const ScalarJet& { return deta[std::size_t(r) * d + s]; };

        // adj[m] and jac[m]
        if (d == 1) {
            adj[0].push_back(ScalarField(g, m == 0 ? 1.0 : 0.0));
            jac.push_back(M(0, 0)[m]);
        } else if (d == 2) {
            adj[0 * d + 0].push_back(M(1, 1)[m]);
            adj[0 * d + 1].push_back(-1.0 * M(0, 1)[m]);
            adj[1 * d + 0].push_back(-1.0 * M(1, 0)[m]);
            adj[1 * d + 1].push_back(M(0, 0)[m]);
            jac.push_back(jet_conv(M(0, 0), M(1, 1), m) - jet_conv(M(0, 1), M(1, 0), m));
        } else {
            // adj[k][i] = C[i][k], cofactors of the jet matrix
            auto co = [&](int a0, int b0, int a1, int b1, double sgn) {
                ScalarField out = jet_conv(M(a0, b0), M(a1, b1), m) -
                                  jet_conv(M(a0, b1), M(a1, b0), m);
                return sgn * out;
            };
            // C[i][k] with (i,k) row/col deleted from M
            ScalarField C00 = co(1, 1, 2, 2, 1.0);
            ScalarField C01 = co(1, 0, 2, 2, -1.0);
            ScalarField C02 = co(1, 0, 2, 1, 1.0);
            ScalarField C10 = co(0, 1, 2, 2, -1.0);
            ScalarField C11 = co(0, 0, 2, 2, 1.0);
            ScalarField C12 = co(0, 0, 2, 1, -1.0);
            ScalarField C20 = co(0, 1, 1, 2, 1.0);
            ScalarField C21 = co(0, 0, 1, 2, -1.0);
            ScalarField C22 = co(0, 0, 1, 1, 1.0);
            adj[0 * d + 0].push_back(C00);
            adj[0 * d + 1].push_back(C10);
            adj[0 * d + 2].push_back(C20);
            adj[1 * d + 0].push_back(C01);
            adj[1 * d + 1].push_back(C11);
            adj[1 * d + 2].push_back(C21);
            adj[2 * d + 0].push_back(C02);
            adj[2 * d + 1].push_back(C12);
            adj[2 * d + 2].push_back(C22);
            ScalarField det = jet_conv(M(0, 0), adj[0 * d + 0], m);
            det = det + jet_conv(M(0, 1), adj[1 * d + 0], m);
            det = det + jet_conv(M(0, 2), adj[2 * d + 0], m);
            jac.push_back(det);
        }

        // jinv[m]
        if (m == 0) {
            for (std::size_t i = 0; i < g->nodes(); ++i)
                if (!(jac[0][i] > kSingularJacobianThreshold))
                    throw SingularJacobian(i, jac[0][i]);
            jinv.push_back(reciprocal(jac[0]));
        } else {
            ScalarField s(g);
            for (int j = 1; j <= m; ++j) {
                const ScalarField& a = jac[j];
                const ScalarField& b = jinv[m - j];
                for (std::size_t i = 0; i < g->nodes(); ++i) s[i] += a[i] * b[i];
            }
            ScalarField out(g);
            for (std::size_t i = 0; i < g->nodes(); ++i) out[i] = -jinv[0][i] * s[i];
            jinv.push_back(out);
        }

        // w = rho0 * jinv, dw, ainvj, acc
        w.push_back(mul(*rho0, jinv[m]));
        for (int k = 0; k < d; ++k) dw[k].push_back(g->d_axis(w[m], k));
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                ainvj[std::size_t(k) * d + i].push_back(
                    jet_conv(adj[std::size_t(k) * d + i], jinv, m));

        VectorField am(g, d);
        for (int i = 0; i < d; ++i) {
            ScalarField s(g);
            for (int k = 0; k < d; ++k)
                s = s + jet_conv(ainvj[std::size_t(k) * d + i], dw[k], m);
            ScalarField neg = -2.0 * s;
            am.set_component(i, neg);
        }
        acc.push_back(am);
    }
};

void zero_bottom_vertical(VectorField& f) {
    const auto& g = f.grid();
    const int nv = g->nv();
    double* vert = f.comp(g->dim() - 1);
    for (std::size_t c = 0; c < g->hsize(); ++c) vert[c * std::size_t(nv)] = 0.0;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

State build_dt_stack(const State& s, const InitialData& data, int K) {
    if (K > kMaxStackDepth) throw StackOverflowOrder(K);
    if (K < 0) throw Error("stack depth must be >= 0");
    State out = s;
    out.dt_stack.clear();
    out.dt_stack.push_back(s.eta);
    if (K == 0) return out;
    out.dt_stack.push_back(s.v);
    if (K == 1) return out;

    JetWorkspace ws(s.eta.grid(), data.rho0, s.eta, s.v);
    for (int m = 0; m + 2 <= K; ++m) {
        ws.extend(m);
        VectorField next = (1.0 / double((m + 1) * (m + 2))) * ws.acc[m];
        ws.eta.push_back(next);
    }
    for (int k = 2; k <= K; ++k) out.dt_stack.push_back(factorial(k) * ws.eta[k]);
    return out;
}

std::vector<ScalarField> jacobian_inv2_time_derivatives(const State& s, int max_order) {
    if (s.stack_depth() < max_order)
        throw Error("jacobian_inv2_time_derivatives needs stack depth >= max_order");
    const auto& g = s.eta.grid();
    const int d = g->dim();

    // scaled eta jet from the stack
    std::vector<ScalarJet> deta(std::size_t(d) * d);
    ScalarJet jac, jinv;
    ScalarJet c00j, c01j, c02j; // first-row cofactor jets (3D)
    for (int m = 0; m <= max_order; ++m) {
        VectorField etam = (1.0 / factorial(m)) * s.dt_stack[m];
        MatrixField grad = m == 0 ? map_gradient(s.dt_stack[0]) : field_gradient(etam);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                deta[std::size_t(r) * d + c].push_back(grad.entry_field(r, c));
        auto M = [&](int r, int c) -> const ScalarJet& { return deta[std::size_t(r) * d + c]; };
        if (d == 1) {
            jac.push_back(M(0, 0)[m]);
        } else if (d == 2) {
            jac.push_back(jet_conv(M(0, 0), M(1, 1), m) - jet_conv(M(0, 1), M(1, 0), m));
        } else {
            // expansion along the first row: det = sum_k M(0,k) C[0][k]
            c00j.push_back(jet_conv(M(1, 1), M(2, 2), m) - jet_conv(M(1, 2), M(2, 1), m));
            c01j.push_back(jet_conv(M(1, 2), M(2, 0), m) - jet_conv(M(1, 0), M(2, 2), m));
            c02j.push_back(jet_conv(M(1, 0), M(2, 1), m) - jet_conv(M(1, 1), M(2, 0), m));
            ScalarField det = jet_conv(M(0, 0), c00j, m);
            det = det + jet_conv(M(0, 1), c01j, m);
            det = det + jet_conv(M(0, 2), c02j, m);
            jac.push_back(det);
        }
        if (m == 0) {
            jinv.push_back(reciprocal(jac[0]));
        } else {
            ScalarField acc(g);
            for (int j = 1; j <= m; ++j) {
                const ScalarField& a = jac[j];
                const ScalarField& b = jinv[m - j];
                for (std::size_t i = 0; i < g->nodes(); ++i) acc[i] += a[i] * b[i];
            }
            ScalarField out(g);
            for (std::size_t i = 0; i < g->nodes(); ++i) out[i] = -jinv[0][i] * acc[i];
            jinv.push_back(out);
        }
    }

    // jinv2 = jinv * jinv, unscale to raw time derivatives
    std::vector<ScalarField> out;
    ScalarJet jinv2;
    for (int m = 0; m <= max_order; ++m) jinv2.push_back(jet_conv(jinv, jinv, m));
    for (int m = 0; m <= max_order; ++m) out.push_back(factorial(m) * jinv2[m]);
    return out;
}

// ---------------------------------------------------------------------------
// accelerations

namespace {
VectorField acceleration_from_bundle(const KinematicBundle& b, const InitialData& data) {
    const auto& g = b.grid;
    const int d = g->dim();
    ScalarField w = mul(data.rho0, reciprocal(b.jac));
    VectorField dw = scalar_gradient(w);
    VectorField acc(g, d);
    for (int i = 0; i < d; ++i) {
        double* out = acc.comp(i);
        for (std::size_t idx = 0; idx < g->nodes(); ++idx) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += b.ainv.entry(k, i)[idx] * dw.comp(k)[idx];
            out[idx] = -2.0 * s;
        }
    }
    return acc;
}
} // namespace

VectorField acceleration(const State& s, const InitialData& data) {
    return acceleration_from_bundle(bundle_of(s), data);
}

VectorField acceleration_conservative(const State& s, const InitialData& data) {
    const auto& b = bundle_of(s);
    const auto& g = b.grid;
    const int d = g->dim();
    ScalarField jinv = reciprocal(b.jac);
    ScalarField q(g); // rho0^2 J^-2
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        const double r = data.rho0[i];
        q[i] = r * r * jinv[i] * jinv[i];
    }
    VectorField dq = scalar_gradient(q);
    VectorField fallback = acceleration_from_bundle(b, data);
    VectorField acc(g, d);
    constexpr double rho_floor = 1e-12;
    for (int i = 0; i < d; ++i) {
        double* out = acc.comp(i);
        for (std::size_t idx = 0; idx < g->nodes(); ++idx) {
            if (data.rho0[idx] <= rho_floor) {
                out[idx] = fallback.comp(i)[idx];
                continue;
            }
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += b.cof.entry(k, i)[idx] * dq.comp(k)[idx];
            out[idx] = -s / data.rho0[idx];
        }
    }
    return acc;
}

VectorField acceleration_elliptic(const State& s, const InitialData& data) {
    const auto& b = bundle_of(s);
    const auto& g = b.grid;
    const int d = g->dim();
    ScalarField jinv = reciprocal(b.jac);
    ScalarField jinv2 = mul(jinv, jinv);
    VectorField djinv2 = scalar_gradient(jinv2);
    VectorField drho = scalar_gradient(data.rho0);
    VectorField acc(g, d);
    for (int i = 0; i < d; ++i) {
        double* out = acc.comp(i);
        for (std::size_t idx = 0; idx < g->nodes(); ++idx) {
            double s = 0.0;
            for (int k = 0; k < d; ++k)
                s += b.cof.entry(k, i)[idx] *
                     (data.rho0[idx] * djinv2.comp(k)[idx] +
                      2.0 * drho.comp(k)[idx] * jinv2[idx]);
            out[idx] = -s;
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// time integration

double max_sound_speed(const State& s, const InitialData& data) {
    const auto& b = bundle_of(s);
    double m = 0.0;
    for (std::size_t i = 0; i < data.rho0.size(); ++i)
        m = std::max(m, 2.0 * data.rho0[i] / b.jac[i]);
    return std::sqrt(std::max(m, 0.0));
}

double cfl_dt_limit(const State& s, const InitialData& data, double cfl) {
    const double c = max_sound_speed(s, data);
    if (c <= 0.0) return INFINITY;
    return cfl * s.eta.grid()->h_min() / c;
}

State step(const State& s, const InitialData& data, double dt, const StepOptions& opts) {
    if (!(dt > 0.0)) throw Error("step requires dt > 0");
    if (opts.enforce_cfl) {
        const double lim = cfl_dt_limit(s, data, opts.cfl);
        if (dt > lim * (1.0 + 1e-12)) throw CflViolation(dt, lim);
    }
    const auto& g = s.eta.grid();

    auto rhs = [&](const VectorField& eta, const VectorField& v, VectorField& detadt,
                   VectorField& dvdt) {
        detadt = v;
        zero_bottom_vertical(detadt);
        KinematicBundle b = build_bundle(eta);
        dvdt = acceleration_from_bundle(b, data);
        zero_bottom_vertical(dvdt);
    };

    VectorField k1e, k1v, k2e, k2v, k3e, k3v, k4e, k4v;
    rhs(s.eta, s.v, k1e, k1v);
    VectorField e2 = s.eta, v2 = s.v;
    axpy(0.5 * dt, k1e, e2);
    axpy(0.5 * dt, k1v, v2);
    rhs(e2, v2, k2e, k2v);
    VectorField e3 = s.eta, v3 = s.v;
    axpy(0.5 * dt, k2e, e3);
    axpy(0.5 * dt, k2v, v3);
    rhs(e3, v3, k3e, k3v);
    VectorField e4 = s.eta, v4 = s.v;
    axpy(dt, k3e, e4);
    axpy(dt, k3v, v4);
    rhs(e4, v4, k4e, k4v);

    State out;
    out.t = s.t + dt;
    out.eta = s.eta;
    out.v = s.v;
    axpy(dt / 6.0, k1e, out.eta);
    axpy(dt / 3.0, k2e, out.eta);
    axpy(dt / 3.0, k3e, out.eta);
    axpy(dt / 6.0, k4e, out.eta);
    axpy(dt / 6.0, k1v, out.v);
    axpy(dt / 3.0, k2v, out.v);
    axpy(dt / 3.0, k3v, out.v);
    axpy(dt / 6.0, k4v, out.v);
    zero_bottom_vertical(out.v);

    if (opts.spectral_filter && g->hdims() > 0) {
        // filter the periodic displacement, not the map itself
        VectorField disp = out.eta;
        for (int c = 0; c < g->dim(); ++c) {
            double* p = disp.comp(c);
            for (std::size_t i = 0; i < g->nodes(); ++i) p[i] -= g->coord_of(i, c);
        }
        g->filter_horizontal(disp);
        g->filter_horizontal(out.v);
        for (int c = 0; c < g->dim(); ++c) {
            double* p = disp.comp(c);
            for (std::size_t i = 0; i < g->nodes(); ++i) p[i] += g->coord_of(i, c);
        }
        out.eta = disp;
        zero_bottom_vertical(out.v);
    }

    require_finite(out.eta, "eta after step");
    require_finite(out.v, "v after step");
    bundle_of(out); // rebuild; throws SingularJacobian on tangling
    return out;
}

// ---------------------------------------------------------------------------
// simulation driver

namespace {

struct StepLight {
    double t = 0.0;
    ScalarField f; // rho0 J^-1
    VectorField v;
};

struct PendingPatch {
    std::size_t row;
    long step_n;
    ScalarField mass_rhs;  // f div_eta v at the row state
    VectorField ddt2;      // stack level 2 (empty if unavailable)
    double stack_scale = 1.0;
};

double fd_sup_mass(const std::array<const StepLight*, 3>& pts, double t0,
                   const ScalarField& mass_rhs) {
    std::vector<double> ts = {pts[0]->t, pts[1]->t, pts[2]->t};
    auto w = fornberg_weights(t0, ts, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < mass_rhs.size(); ++i) {
        const double dfdt =
            w[0] * pts[0]->f[i] + w[1] * pts[1]->f[i] + w[2] * pts[2]->f[i];
        worst = std::max(worst, std::abs(dfdt + mass_rhs[i]));
    }
    return worst;
}

double fd_sup_stack(const std::array<const StepLight*, 3>& pts, double t0,
                    const VectorField& ddt2) {
    std::vector<double> ts = {pts[0]->t, pts[1]->t, pts[2]->t};
    auto w = fornberg_weights(t0, ts, 1);
    const auto& g = ddt2.grid();
    const int nv = g->nv();
    const int d = g->dim();
    double worst = 0.0;
    for (int c = 0; c < d; ++c) {
        const double* a0 = pts[0]->v.comp(c);
        const double* a1 = pts[1]->v.comp(c);
        const double* a2 = pts[2]->v.comp(c);
        const double* ref = ddt2.comp(c);
        for (std::size_t i = 0; i < g->nodes(); ++i) {
            // exclude the bottom plane of the vertical component: the wall
            // constraint force acts there and the stack is unconstrained
            if (c == d - 1 && int(i % nv) == 0) continue;
            const double dvdt = w[0] * a0[i] + w[1] * a1[i] + w[2] * a2[i];
            worst = std::max(worst, std::abs(dvdt - ref[i]));
        }
    }
    return worst;
}

} // namespace

SimulationResult simulate(const SimulationSpec& spec) {
    GridPtr g = Grid::make(spec.slab);
    InitialData data{make_rho0_profile(g, spec.rho0_profile),
                     make_u0_profile(g, spec.u0_profile, spec.u0_amplitude),
                     spec.vacuum_slope_tol};
    require_valid_initial_data(data);
    if (spec.t_final < 0.0) throw ConfigError("T_final must be >= 0");
    if (spec.dt == 0.0 && spec.cfl <= 0.0) throw ConfigError("need dt > 0 or cfl > 0");
    if (spec.stack_depth > kMaxStackDepth) throw StackOverflowOrder(spec.stack_depth);
    const int K = spec.stack_depth;

    SimulationResult res;
    State cur = make_initial_state(g, data);
    cur = build_dt_stack(cur, data, K);

    // reference quantities at t = 0
    res.physical_energy0 = physical_energy(cur, data);
    if (spec.energy_diagnostics) {
        EnergyBreakdown e0 = energy(cur, data);
        res.initial_energy = e0.total;
        res.energy_terms_missing = e0.missing;
    }
    std::vector<double> vnorm_denom;
    for (int a = 0; a <= std::min(6, K - 1); ++a) {
        const double n0 = interior_norm_frac(cur.dt_stack[a + 1], 3.0 - 0.5 * a);
        vnorm_denom.push_back(2.0 * n0 * n0 + 1.0);
    }
    ScalarField curl_u0;
    if (g->dim() == 2) curl_u0 = lagrangian_curl(data.u0, bundle_of(cur)).component(0);

    StepOptions sopts;
    sopts.cfl = spec.cfl;
    sopts.enforce_cfl = true;
    sopts.spectral_filter = spec.spectral_filter;

    std::deque<StepLight> window; // last three steps
    std::vector<PendingPatch> pending;

    auto light_of = [&](const State& s) {
        StepLight l;
        l.t = s.t;
        l.f = mul(data.rho0, reciprocal(bundle_of(s).jac));
        l.v = s.v;
        return l;
    };

    auto make_row = [&](const State& s, double dt_used) {
        RunRow row;
        row.t = s.t;
        row.dt = dt_used;
        const auto& b = bundle_of(s);
        row.j_min = min_value(b.jac);
        row.j_max = max_value(b.jac);
        row.physical_energy = physical_energy(s, data);
        row.pe_drift_rel = std::abs(row.physical_energy - res.physical_energy0) /
                           std::abs(res.physical_energy0);
        if (spec.energy_diagnostics) {
            EnergyBreakdown e = energy(s, data);
            row.e_total = e.total;
            row.e_sobolev = e.sobolev_terms;
            row.e_weighted_deta = e.weighted_deta_terms;
            row.e_weighted_v = e.weighted_v_terms;
            row.e_jacobian = e.jacobian_terms;
            row.e_curl = e.curl_term;
            row.e_weighted_curl = e.weighted_curl_term;
        }
        if (spec.identity_diagnostics) {
            if (g->dim() >= 2 && s.stack_depth() >= 2)
                row.curl_transport_residual = curl_transport_residual(s);
            if (g->dim() == 2) row.cauchy_residual = cauchy_invariant_residual(s, curl_u0);
        }
        const double n35 = sobolev_norm_of_map_frac(s.eta, 3.5);
        row.eta_norm35_sq = n35 * n35;
        double vmax = 0.0;
        for (std::size_t a = 0; a < vnorm_denom.size(); ++a) {
            const double n = interior_norm_frac(s.dt_stack[a + 1], 3.0 - 0.5 * double(a));
            vmax = std::max(vmax, n * n / vnorm_denom[a]);
        }
        row.v_norm_ratio_max = vnorm_denom.empty() ? NAN : vmax;

        // boundary trajectory
        const int nv = g->nv();
        const double* vert = s.eta.comp(g->dim() - 1);
        double mn = INFINITY, mx = -INFINITY, mean = 0.0;
        for (std::size_t c = 0; c < g->hsize(); ++c) {
            const double val = vert[c * std::size_t(nv) + std::size_t(nv - 1)];
            mn = std::min(mn, val);
            mx = std::max(mx, val);
            mean += val;
        }
        row.eta_top_mean = mean / double(g->hsize());
        row.eta_top_min = mn;
        row.eta_top_max = mx;

        // health checks (assumptions of the a priori estimate)
        bool ok = row.j_min >= 0.5 && row.j_max <= 1.5;
        std::string why = ok ? "" : "jacobian_band";
        if (ok && spec.health_eta_norm && row.eta_norm35_sq > 3.0) {
            ok = false;
            why = "eta_norm_cap"; // 2 |Omega|^2 + 1 with |Omega| = 1
        }
        if (ok && spec.health_v_norms && !vnorm_denom.empty() && vmax > 1.0) {
            ok = false;
            why = "v_norm_cap";
        }
        row.health_ok = ok ? 1 : 0;
        return std::pair<RunRow, std::string>(row, why);
    };

    auto push_pending = [&](std::size_t row_idx, long n, const State& s) {
        PendingPatch p;
        p.row = row_idx;
        p.step_n = n;
        ScalarField divv = lagrangian_div(s.v, bundle_of(s));
        ScalarField f = mul(data.rho0, reciprocal(bundle_of(s).jac));
        p.mass_rhs = mul(f, divv);
        if (s.stack_depth() >= 2) {
            p.ddt2 = s.dt_stack[2];
            const int lvl = std::min(4, s.stack_depth());
            p.stack_scale = 1.0 + sup_norm(s.dt_stack[lvl]);
        }
        pending.push_back(std::move(p));
    };

    // triple of lights covering steps first..first+2 in `window` patches any
    // pending row whose step index sits in that triple appropriately
    long window_first = 0;
    auto try_patch = [&](bool final_flush) {
        if (window.size() < 3) {
            if (!final_flush || window.size() < 2) return;
            // short runs: first-order difference
            for (auto& p : pending) {
                if (!std::isnan(res.rows[p.row].mass_residual)) continue;
                std::vector<double> ts = {window[0].t, window[1].t};
                auto w = fornberg_weights(res.rows[p.row].t, ts, 1);
                double worst = 0.0;
                for (std::size_t i = 0; i < p.mass_rhs.size(); ++i) {
                    const double dfdt = w[0] * window[0].f[i] + w[1] * window[1].f[i];
                    worst = std::max(worst, std::abs(dfdt + p.mass_rhs[i]));
                }
                res.rows[p.row].mass_residual = worst;
            }
            return;
        }
        std::array<const StepLight*, 3> pts{&window[0], &window[1], &window[2]};
        for (auto& p : pending) {
            if (!std::isnan(res.rows[p.row].mass_residual)) continue;
            const bool central = p.step_n == window_first + 1;
            const bool fwd = p.step_n == window_first && window_first == 0;
            const bool bwd = final_flush && p.step_n == window_first + 2;
            if (!central && !fwd && !bwd) continue;
            res.rows[p.row].mass_residual = fd_sup_mass(pts, res.rows[p.row].t, p.mass_rhs);
            if (p.ddt2.grid())
                res.rows[p.row].stack_fd_residual =
                    fd_sup_stack(pts, res.rows[p.row].t, p.ddt2) / p.stack_scale;
        }
    };

    // --- main loop ---------------------------------------------------------
    res.termination = "completed";
    res.clean = true;
    long n = 0;
    double dt_used = spec.dt;
    window.push_back(light_of(cur));

    auto record = [&](const State& s, double dtu) -> bool {
        auto [row, why] = make_row(s, dtu);
        res.rows.push_back(row);
        push_pending(res.rows.size() - 1, n, s);
        if (!row.health_ok && spec.terminate_on_health) {
            res.termination = "health:" + why;
            res.clean = false;
            return false;
        }
        return true;
    };

    if (!record(cur, 0.0)) {
        try_patch(true);
        res.final_state = cur;
        return res;
    }

    const double t_end = spec.t_final;
    while (cur.t < t_end - 1e-14) {
        double dt = spec.dt > 0.0 ? spec.dt : cfl_dt_limit(cur, data, spec.cfl);
        dt = std::min(dt, t_end - cur.t);
        try {
            cur = step(cur, data, dt, sopts);
        } catch (const CflViolation&) {
            res.termination = "health:cfl_violation";
            res.clean = false;
            break;
        } catch (const SingularJacobian&) {
            res.termination = "health:singular_jacobian";
            res.clean = false;
            break;
        } catch (const FieldNotFinite&) {
            res.termination = "health:not_finite";
            res.clean = false;
            break;
        }
        ++n;
        dt_used = dt;
        window.push_back(light_of(cur));
        while (window.size() > 3) {
            window.pop_front();
            ++window_first;
        }
        try_patch(false);

        const bool last = !(cur.t < t_end - 1e-14);
        if (n % spec.cadence == 0 || last) {
            cur = build_dt_stack(cur, data, K); // jets only where rows need them
            if (!record(cur, dt_used)) break;
        }
    }
    try_patch(true);
    res.final_state = cur;
    return res;
}

} // namespace vaceuler
