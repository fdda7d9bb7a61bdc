#include "vaceuler/energy.hpp"

#include <cmath>

#include "vaceuler/norms.hpp"

namespace vaceuler {

namespace {

// weighted L2^2: int rho0^w_pow |f|^2
double weighted_l2_sq(const ScalarField& rho0, const ScalarField& f, int w_pow) {
    const auto& g = f.grid();
    ScalarField integrand(g);
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        const double w = w_pow == 1 ? rho0[i] : rho0[i] * rho0[i];
        integrand[i] = w * f[i] * f[i];
    }
    return g->integrate(integrand);
}

// sum over horizontal multi-indices |beta| = m (with multinomial weights) of
// int rho0^w_pow |d^beta f|^2. With no horizontal directions (1D) the sum is
// empty for m > 0 and the term is zero; m = 0 is the plain weighted L2^2.
double dbar_weighted_l2_sq(const ScalarField& rho0, const ScalarField& f, int m, int w_pow) {
    const auto& g = f.grid();
    if (m == 0) return weighted_l2_sq(rho0, f, w_pow);
    if (g->hdims() == 0) return 0.0;
    if (g->hdims() == 1) {
        ScalarField d = f;
        for (int i = 0; i < m; ++i) d = g->d_horizontal(d, 0);
        return weighted_l2_sq(rho0, d, w_pow);
    }
    // two horizontal directions: multinomial sum over b1 + b2 = m
    double total = 0.0;
    double binom = 1.0; // C(m, b1)
    for (int b1 = 0; b1 <= m; ++b1) {
        ScalarField d = f;
        for (int i = 0; i < b1; ++i) d = g->d_horizontal(d, 0);
        for (int i = 0; i < m - b1; ++i) d = g->d_horizontal(d, 1);
        total += binom * weighted_l2_sq(rho0, d, w_pow);
        binom = binom * double(m - b1) / double(b1 + 1);
    }
    return total;
}

double dbar_weighted_l2_sq(const ScalarField& rho0, const VectorField& f, int m, int w_pow) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
        s += dbar_weighted_l2_sq(rho0, f.component(c), m, w_pow);
    return s;
}

double dbar_weighted_l2_sq(const ScalarField& rho0, const MatrixField& f, int m, int w_pow) {
    double s = 0.0;
    for (int r = 0; r < f.dim(); ++r)
        for (int c = 0; c < f.dim(); ++c)
            s += dbar_weighted_l2_sq(rho0, f.entry_field(r, c), m, w_pow);
    return s;
}

} // namespace

double physical_energy(const State& s, const InitialData& data) {
    const auto& g = s.eta.grid();
    const auto& b = bundle_of(s);
    ScalarField integrand(g);
    const int d = g->dim();
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        double v2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double vc = s.v.comp(c)[i];
            v2 += vc * vc;
        }
        const double r = data.rho0[i];
        integrand[i] = 0.5 * r * v2 + r * r / b.jac[i];
    }
    return g->integrate(integrand);
}

EnergyBreakdown energy(const State& s, const InitialData& data) {
    const auto& g = s.eta.grid();
    const int K = s.stack_depth();
    const int dim = g->dim();
    EnergyBreakdown e;
    e.sobolev_terms.fill(NAN);
    e.weighted_deta_terms.fill(NAN);
    e.weighted_v_terms.fill(NAN);
    e.jacobian_terms.fill(NAN);

    auto tally = [&](double& slot, bool computable, double value, const std::string& name) {
        ++e.applicable;
        if (computable) {
            slot = value;
            e.total += value;
            ++e.computed;
        } else {
            e.missing.push_back(name);
        }
    };

    // || d_t^{2a} eta ||_{4-a}^2
    for (int a = 0; a <= 4; ++a) {
        const bool ok = 2 * a <= K;
        double val = NAN;
        if (ok) {
            val = a == 0 ? sobolev_norm_of_map(s.eta, 4)
                         : interior_norm(s.dt_stack[2 * a], 4 - a);
            val *= val;
        }
        tally(e.sobolev_terms[a], ok, val, "sobolev[" + std::to_string(a) + "]");
    }

    // || rho0 dbar^{4-a} d_t^{2a} D eta ||_0^2
    for (int a = 0; a <= 4; ++a) {
        const bool ok = 2 * a <= K;
        double val = NAN;
        if (ok) {
            MatrixField grad = a == 0 ? bundle_of(s).deta : field_gradient(s.dt_stack[2 * a]);
            val = dbar_weighted_l2_sq(data.rho0, grad, 4 - a, 2);
        }
        tally(e.weighted_deta_terms[a], ok, val, "weighted_deta[" + std::to_string(a) + "]");
    }

    // || sqrt(rho0) dbar^{4-a} d_t^{2a} v ||_0^2   (d_t^{2a} v = stack level 2a+1)
    for (int a = 0; a <= 4; ++a) {
        const bool ok = 2 * a + 1 <= K;
        double val = NAN;
        if (ok) val = dbar_weighted_l2_sq(data.rho0, s.dt_stack[2 * a + 1], 4 - a, 1);
        tally(e.weighted_v_terms[a], ok, val, "weighted_v[" + std::to_string(a) + "]");
    }

    // || rho0 d_t^{2a} J^-2 ||_{4-a}^2
    {
        const int maxo = std::min(K, 6);
        auto jderivs = jacobian_inv2_time_derivatives(s, maxo);
        for (int a = 0; a <= 3; ++a) {
            const bool ok = 2 * a <= K;
            double val = NAN;
            if (ok) {
                ScalarField w = mul(data.rho0, jderivs[2 * a]);
                const double nrm = interior_norm(w, 4 - a);
                val = nrm * nrm;
            }
            tally(e.jacobian_terms[a], ok, val, "jacobian[" + std::to_string(a) + "]");
        }
    }

    if (dim >= 2) {
        VectorField cv = lagrangian_curl(s.v, bundle_of(s));
        double n3 = interior_norm(cv, 3);
        tally(e.curl_term, true, n3 * n3, "curl");
        tally(e.weighted_curl_term, true, dbar_weighted_l2_sq(data.rho0, cv, 4, 2),
              "weighted_curl");
    }
    return e;
}

double curl_transport_residual(const State& s) {
    const auto& g = s.eta.grid();
    if (g->dim() < 2) throw DimensionError("curl transport residual needs dim >= 2");
    if (s.stack_depth() < 2) throw Error("curl transport residual needs stack depth >= 2");
    VectorField c = lagrangian_curl(s.dt_stack[2], bundle_of(s));
    return sup_norm(c);
}

double cauchy_invariant_residual(const State& s, const ScalarField& curl_u0) {
    const auto& g = s.eta.grid();
    if (g->dim() != 2) throw DimensionError("the planar transport identity is 2D only");
    VectorField cv = lagrangian_curl(s.v, bundle_of(s));
    const auto& b = bundle_of(s);
    double worst = 0.0;
    for (std::size_t i = 0; i < g->nodes(); ++i)
        worst = std::max(worst, std::abs(cv.comp(0)[i] - curl_u0[i] / b.jac[i]));
    return worst;
}

double PolynomialSpec::eval(double f) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * f + coeffs[k];
    return acc;
}

BoundMonitorReport bound_monitor(const std::vector<double>& times,
                                 const std::vector<double>& energies, double C,
                                 const PolynomialSpec& P) {
    if (times.empty() || times.size() != energies.size())
        throw Error("bound_monitor needs a nonempty (t, E) series");
    BoundMonitorReport r;
    r.m0 = energies.front();
    r.c = C;
    const double p2m0 = P.eval(2.0 * r.m0);
    const double denom = C * p2m0;
    r.t_star = denom > 0.0 ? r.m0 / denom : INFINITY;
    if (std::isfinite(r.t_star))
        r.algebraic_residual = std::abs(r.m0 + C * r.t_star * p2m0 - 2.0 * r.m0);
    const double cap = 2.0 * r.m0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i] - times.front();
        if (t > r.t_star) break;
        const double ratio = cap != 0.0 ? energies[i] / cap : (energies[i] == 0.0 ? 0.0 : INFINITY);
        r.max_ratio = std::max(r.max_ratio, ratio);
        if (energies[i] > cap && r.bound_holds) {
            r.bound_holds = false;
            r.first_violation_t = times[i];
        }
    }
    return r;
}

double polynomial_fixed_point(double m0, double c, double t) {
    const double ct = c * t;
    if (ct == 0.0) return m0;
    const double disc = 1.0 - 4.0 * ct * m0;
    if (disc < 0.0) throw Error("no real fixed point: 4 c t m0 > 1");
    // smaller root of ct f^2 - f + m0 = 0, in the cancellation-free form
    return 2.0 * m0 / (1.0 + std::sqrt(disc));
}

} // namespace vaceuler
