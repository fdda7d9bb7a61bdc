#pragma once

#include <cmath>
#include <functional>

#include "vaceuler/slab.hpp"

namespace vaceuler::testing {

// sample f(x1, x2, xv) on the grid; missing horizontal coordinates are 0
inline ScalarField sample(const GridPtr& g,
                          const std::function<double(double, double, double)>& f) {
    ScalarField out(g);
    const int nv = g->nv();
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        const double x1 = g->hdims() >= 1 ? g->coord_of(i, 0) : 0.0;
        const double x2 = g->hdims() >= 2 ? g->coord_of(i, 1) : 0.0;
        out[i] = f(x1, x2, g->xvert(int(i % nv)));
    }
    return out;
}

inline VectorField sample_vec(
    const GridPtr& g,
    const std::function<void(double, double, double, double*)>& f) {
    VectorField out(g, g->dim());
    const int nv = g->nv();
    double buf[3];
    for (std::size_t i = 0; i < g->nodes(); ++i) {
        const double x1 = g->hdims() >= 1 ? g->coord_of(i, 0) : 0.0;
        const double x2 = g->hdims() >= 2 ? g->coord_of(i, 1) : 0.0;
        f(x1, x2, g->xvert(int(i % nv)), buf);
        for (int c = 0; c < g->dim(); ++c) out.comp(c)[i] = buf[c];
    }
    return out;
}

inline VectorField identity_map(const GridPtr& g) {
    VectorField out(g, g->dim());
    for (int c = 0; c < g->dim(); ++c) out.set_component(c, g->coordinate_field(c));
    return out;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace vaceuler::testing
