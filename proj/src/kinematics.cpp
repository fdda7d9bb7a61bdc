#include "vaceuler/kinematics.hpp"

#include <cmath>
#include <cstring>

namespace vaceuler {

MatrixField::MatrixField(GridPtr g, int d)
    : grid_(std::move(g)), d_(d), v_(grid_->nodes() * std::size_t(d) * d, 0.0) {}

double* MatrixField::entry(int r, int c) {
    return v_.data() + (std::size_t(r) * d_ + c) * nodes();
}
const double* MatrixField::entry(int r, int c) const {
    return v_.data() + (std::size_t(r) * d_ + c) * nodes();
}
ScalarField MatrixField::entry_field(int r, int c) const {
    std::vector<double> out(entry(r, c), entry(r, c) + nodes());
    return ScalarField(grid_, std::move(out));
}
void MatrixField::set_entry(int r, int c, const ScalarField& f) {
    std::memcpy(entry(r, c), f.data(), nodes() * sizeof(double));
}

MatrixField map_gradient(const VectorField& eta,
                         const std::optional<std::array<double, 9>>& linear) {
    const auto& g = eta.grid();
    const int d = g->dim();
    std::array<double, 9> L{};
    if (linear) {
        L = *linear;
    } else {
        for (int r = 0; r < d; ++r) L[std::size_t(r) * d + r] = 1.0;
    }
    // periodic displacement phi = eta - L x
    VectorField phi = eta;
    for (int r = 0; r < d; ++r) {
        double* p = phi.comp(r);
        for (int c = 0; c < d; ++c) {
            const double l = L[std::size_t(r) * d + c];
            if (l == 0.0) continue;
            for (std::size_t i = 0; i < g->nodes(); ++i)
                p[i] -= l * g->coord_of(i, c);
        }
    }
    MatrixField out(g, d);
    for (int r = 0; r < d; ++r) {
        ScalarField pr = phi.component(r);
        for (int s = 0; s < d; ++s) {
            ScalarField dphis = g->d_axis(pr, s);
            const double l = L[std::size_t(r) * d + s];
            double* e = out.entry(r, s);
            for (std::size_t i = 0; i < g->nodes(); ++i) e[i] = dphis[i] + l;
        }
    }
    return out;
}

MatrixField field_gradient(const VectorField& v) {
    const auto& g = v.grid();
    const int d = g->dim();
    MatrixField out(g, d);
    for (int r = 0; r < v.ncomp(); ++r) {
        ScalarField vr = v.component(r);
        for (int s = 0; s < d; ++s)
            out.set_entry(r, s, g->d_axis(vr, s));
    }
    return out;
}

VectorField scalar_gradient(const ScalarField& f) {
    const auto& g = f.grid();
    VectorField out(g, g->dim());
    for (int s = 0; s < g->dim(); ++s)
        out.set_component(s, g->d_axis(f, s));
    return out;
}

namespace {

// adjugate and determinant of the dim x dim node-local matrix m (row-major):
// adj[k][i] = a^k_i such that (m^-1)[k][i] = adj[k][i]/det.
inline void adj_det(int d, const double* m, double* adj, double& det) {
    if (d == 1) {
        adj[0] = 1.0;
        det = m[0];
    } else if (d == 2) {
        adj[0] = m[3];  // a^1_1 =  m11
        adj[1] = -m[1]; // a^1_2 = -m01
        adj[2] = -m[2]; // a^2_1 = -m10
        adj[3] = m[0];  // a^2_2 =  m00
        det = m[0] * m[3] - m[1] * m[2];
    } else {
        const double c00 = m[4] * m[8] - m[5] * m[7];
        const double c01 = -(m[3] * m[8] - m[5] * m[6]);
        const double c02 = m[3] * m[7] - m[4] * m[6];
        const double c10 = -(m[1] * m[8] - m[2] * m[7]);
        const double c11 = m[0] * m[8] - m[2] * m[6];
        const double c12 = -(m[0] * m[7] - m[1] * m[6]);
        const double c20 = m[1] * m[5] - m[2] * m[4];
        const double c21 = -(m[0] * m[5] - m[2] * m[3]);
        const double c22 = m[0] * m[4] - m[1] * m[3];
        // adj[k][i] = C[i][k]
        adj[0] = c00; adj[1] = c10; adj[2] = c20;
        adj[3] = c01; adj[4] = c11; adj[5] = c21;
        adj[6] = c02; adj[7] = c12; adj[8] = c22;
        det = m[0] * c00 + m[1] * c01 + m[2] * c02;
    }
}

} // namespace

KinematicBundle build_bundle(const VectorField& eta,
                             const std::optional<std::array<double, 9>>& linear) {
    const auto& g = eta.grid();
    const int d = g->dim();
    require_finite(eta, "eta");

    KinematicBundle b;
    b.grid = g;
    b.deta = map_gradient(eta, linear);
    b.jac = ScalarField(g);
    b.cof = MatrixField(g, d);
    b.ainv = MatrixField(g, d);

    const std::size_t n = g->nodes();
    double m[9], adj[9];
    for (std::size_t i = 0; i < n; ++i) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m[r * d + c] = b.deta.entry(r, c)[i];
        double det;
        adj_det(d, m, adj, det);
        if (!(det > kSingularJacobianThreshold)) throw SingularJacobian(i, det);
        b.jac[i] = det;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                b.cof.entry(r, c)[i] = adj[r * d + c];
                b.ainv.entry(r, c)[i] = adj[r * d + c] / det;
            }
    }

    if (d >= 2) {
        const std::size_t hs = g->hsize();
        const int nv = g->nv();
        b.sqrt_g.assign(hs, 0.0);
        b.normal.assign(std::size_t(d) * hs, 0.0);
        for (std::size_t c = 0; c < hs; ++c) {
            const std::size_t top = c * nv + (nv - 1);
            double nrm2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double ai = b.cof.entry(d - 1, i)[top];
                b.normal[std::size_t(i) * hs + c] = ai;
                nrm2 += ai * ai;
            }
            const double sg = std::sqrt(nrm2);
            b.sqrt_g[c] = sg;
            for (int i = 0; i < d; ++i) b.normal[std::size_t(i) * hs + c] /= sg;
        }
    }
    return b;
}

double piola_residual(const KinematicBundle& b) {
    const auto& g = b.grid;
    const int d = g->dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        ScalarField divcol(g);
        for (int k = 0; k < d; ++k) {
            ScalarField dk = g->d_axis(b.cof.entry_field(k, i), k);
            axpy(1.0, dk, divcol);
        }
        worst = std::max(worst, sup_norm(divcol));
    }
    return worst;
}

TimeIdentityReport check_time_identities(
    const VectorField& eta_t, const VectorField& eta_tpd, const VectorField& v,
    double delta, const std::optional<std::array<double, 9>>& linear) {
    auto b0 = build_bundle(eta_t, linear);
    auto b1 = build_bundle(eta_tpd, linear);
    MatrixField dv = field_gradient(v);
    const auto& g = eta_t.grid();
    const int d = g->dim();
    const std::size_t n = g->nodes();

    // time identity: dJ/dt = a^s_r v^r,_s
    double jres = 0.0, jscale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rhs = 0.0;
        for (int s = 0; s < d; ++s)
            for (int r = 0; r < d; ++r) rhs += b0.cof.entry(s, r)[i] * dv.entry(r, s)[i];
        const double lhs = (b1.jac[i] - b0.jac[i]) / delta;
        jres = std::max(jres, std::abs(lhs - rhs));
        jscale = std::max(jscale, std::abs(rhs));
    }

    // cofactor analogue: da^k_i/dt = v^r,_s J^-1 [a^s_r a^k_i - a^s_i a^k_r]
    double ares = 0.0, ascale = 0.0;
    for (int k = 0; k < d; ++k)
        for (int ii = 0; ii < d; ++ii)
            for (std::size_t i = 0; i < n; ++i) {
                double rhs = 0.0;
                for (int r = 0; r < d; ++r)
                    for (int s = 0; s < d; ++s)
                        rhs += dv.entry(r, s)[i] *
                               (b0.cof.entry(s, r)[i] * b0.cof.entry(k, ii)[i] -
                                b0.cof.entry(s, ii)[i] * b0.cof.entry(k, r)[i]);
                rhs /= b0.jac[i];
                const double lhs = (b1.cof.entry(k, ii)[i] - b0.cof.entry(k, ii)[i]) / delta;
                ares = std::max(ares, std::abs(lhs - rhs));
                ascale = std::max(ascale, std::abs(rhs));
            }

    return {jres / std::max(1.0, jscale), ares / std::max(1.0, ascale), jscale, ascale};
}

HorizontalIdentityReport check_horizontal_identities(
    const VectorField& eta, const std::optional<std::array<double, 9>>& linear) {
    const auto& g = eta.grid();
    if (g->dim() < 2) throw DimensionError("horizontal identities need dim >= 2");
    auto b = build_bundle(eta, linear);
    const int d = g->dim();
    const std::size_t n = g->nodes();

    double j1res = 0.0, j1scale = 0.0, a1res = 0.0, a1scale = 0.0;
    for (int dir = 1; dir <= g->hdims(); ++dir) {
        ScalarField lhsJ = d_bar(b.jac, dir);
        // d_bar of the deformation gradient entries (periodic fields)
        MatrixField dbar_deta(g, d);
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < d; ++s)
                dbar_deta.set_entry(r, s, d_bar(b.deta.entry_field(r, s), dir));

        for (std::size_t i = 0; i < n; ++i) {
            double rhs = 0.0;
            for (int s = 0; s < d; ++s)
                for (int r = 0; r < d; ++r)
                    rhs += b.cof.entry(s, r)[i] * dbar_deta.entry(r, s)[i];
            j1res = std::max(j1res, std::abs(lhsJ[i] - rhs));
            j1scale = std::max(j1scale, std::abs(rhs));
        }

        for (int k = 0; k < d; ++k)
            for (int ii = 0; ii < d; ++ii) {
                ScalarField lhsA = d_bar(b.cof.entry_field(k, ii), dir);
                for (std::size_t i = 0; i < n; ++i) {
                    double rhs = 0.0;
                    for (int r = 0; r < d; ++r)
                        for (int s = 0; s < d; ++s)
                            rhs += dbar_deta.entry(r, s)[i] *
                                   (b.cof.entry(s, r)[i] * b.cof.entry(k, ii)[i] -
                                    b.cof.entry(s, ii)[i] * b.cof.entry(k, r)[i]);
                    rhs /= b.jac[i];
                    a1res = std::max(a1res, std::abs(lhsA[i] - rhs));
                    a1scale = std::max(a1scale, std::abs(rhs));
                }
            }
    }
    return {j1res / std::max(1.0, j1scale), a1res / std::max(1.0, a1scale), j1scale, a1scale};
}

VectorField lagrangian_curl(const VectorField& v, const KinematicBundle& b) {
    const auto& g = b.grid;
    const int d = g->dim();
    if (d < 2) throw DimensionError("lagrangian_curl is undefined in 1D");
    MatrixField dv = field_gradient(v);
    const std::size_t n = g->nodes();

    if (d == 2) {
        VectorField out(g, 1);
        double* o = out.comp(0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int ss = 0; ss < 2; ++ss)
                s += b.ainv.entry(ss, 0)[i] * dv.entry(1, ss)[i] -
                     b.ainv.entry(ss, 1)[i] * dv.entry(0, ss)[i];
            o[i] = s;
        }
        return out;
    }

    VectorField out(g, 3);
    static constexpr int J[3] = {1, 2, 0};
    static constexpr int K[3] = {2, 0, 1};
    for (int i = 0; i < 3; ++i) {
        const int j = J[i], k = K[i];
        double* o = out.comp(i);
        for (std::size_t idx = 0; idx < n; ++idx) {
            double s = 0.0;
            for (int ss = 0; ss < 3; ++ss)
                s += b.ainv.entry(ss, j)[idx] * dv.entry(k, ss)[idx] -
                     b.ainv.entry(ss, k)[idx] * dv.entry(j, ss)[idx];
            o[idx] = s;
        }
    }
    return out;
}

ScalarField lagrangian_div(const VectorField& F, const KinematicBundle& b) {
    const auto& g = b.grid;
    const int d = g->dim();
    MatrixField dF = field_gradient(F);
    ScalarField out(g);
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        double s = 0.0;
        for (int ii = 0; ii < d; ++ii)
            for (int j = 0; j < d; ++j) s += b.ainv.entry(j, ii)[i] * dF.entry(ii, j)[i];
        out[i] = s;
    }
    return out;
}

double normal_identity_residual(const KinematicBundle& b) {
    const auto& g = b.grid;
    const int d = g->dim();
    if (d < 2) throw DimensionError("no boundary normal in 1D");
    const std::size_t hs = g->hsize();
    const int nv = g->nv();
    double worst = 0.0;
    for (std::size_t c = 0; c < hs; ++c) {
        const std::size_t top = c * nv + (nv - 1);
        double cross[3] = {0, 0, 0};
        if (d == 2) {
            // rotate the tangent eta,_1 by +90 degrees
            cross[0] = -b.deta.entry(1, 0)[top];
            cross[1] = b.deta.entry(0, 0)[top];
        } else {
            const double a1[3] = {b.deta.entry(0, 0)[top], b.deta.entry(1, 0)[top],
                                  b.deta.entry(2, 0)[top]};
            const double a2[3] = {b.deta.entry(0, 1)[top], b.deta.entry(1, 1)[top],
                                  b.deta.entry(2, 1)[top]};
            cross[0] = a1[1] * a2[2] - a1[2] * a2[1];
            cross[1] = a1[2] * a2[0] - a1[0] * a2[2];
            cross[2] = a1[0] * a2[1] - a1[1] * a2[0];
        }
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) nrm += cross[i] * cross[i];
        nrm = std::sqrt(nrm);
        for (int i = 0; i < d; ++i)
            worst = std::max(worst, std::abs(cross[i] / nrm - b.normal_comp(i)[c]));
    }
    return worst;
}

double normal_tangency_residual(const KinematicBundle& b) {
    const auto& g = b.grid;
    const int d = g->dim();
    if (d < 2) throw DimensionError("no boundary normal in 1D");
    const std::size_t hs = g->hsize();
    const int nv = g->nv();
    double worst = 0.0;
    for (int alpha = 0; alpha < d - 1; ++alpha) {
        for (std::size_t c = 0; c < hs; ++c) {
            const std::size_t top = c * nv + (nv - 1);
            double dot = 0.0;
            for (int i = 0; i < d; ++i)
                dot += b.normal_comp(i)[c] * b.deta.entry(i, alpha)[top];
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

} // namespace vaceuler
