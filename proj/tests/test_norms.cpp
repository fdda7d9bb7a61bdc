#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "vaceuler/checks.hpp"
#include "vaceuler/kinematics.hpp"
#include "vaceuler/norms.hpp"

using namespace vaceuler;
using namespace vaceuler::testing;

TEST_CASE("interior norms of simple fields") {
    auto g = Grid::make({3, 16, 24});
    ScalarField one(g, 1.0);
    for (int k = 0; k <= 4; ++k)
        CHECK(interior_norm(one, k) == doctest::Approx(1.0).epsilon(1e-13));

    ScalarField s = sample(g, [](double a, double, double) { return std::sin(2 * M_PI * a); });
    CHECK(interior_norm(s, 1) ==
          doctest::Approx(std::sqrt(0.5 + 2.0 * M_PI * M_PI)).epsilon(1e-12));

    ScalarField xv = g->coordinate_field(2);
    CHECK(interior_norm(xv, 1) == doctest::Approx(std::sqrt(1.0 / 3.0 + 1.0)).epsilon(1e-13));
}

TEST_CASE("interior norms are monotone in the order") {
    auto g = Grid::make({3, 12, 16});
    for (int i = 0; i < 6; ++i) {
        ScalarField f = random_band_limited_scalar(g, 21, i);
        double prev = interior_norm(f, 0);
        for (int k = 1; k <= 4; ++k) {
            const double cur = interior_norm(f, k);
            CHECK(prev <= cur * (1.0 + 1e-12));
            prev = cur;
        }
    }
}

TEST_CASE("fractional interior norm interpolates between integer orders") {
    auto g = Grid::make({2, 12, 16});
    ScalarField f = random_band_limited_scalar(g, 4, 0);
    const double n1 = interior_norm(f, 1);
    const double n2 = interior_norm(f, 2);
    const double n15 = interior_norm_frac(f, 1.5);
    CHECK(n15 == doctest::Approx(std::sqrt(n1 * n2)).epsilon(1e-13));
    CHECK(interior_norm_frac(f, 2.0) == doctest::Approx(n2).epsilon(1e-13));
    CHECK(n15 >= n1 * (1 - 1e-12));
    CHECK(n15 <= n2 * (1 + 1e-12));
}

TEST_CASE("map norms differentiate the identity part exactly") {
    auto g = Grid::make({2, 16, 24});
    VectorField id = identity_map(g);
    // D(id) = I exactly, so the derivative contribution is exactly dim and
    // all orders above 1 coincide; the L2 piece integrates the nonperiodic
    // |x|^2 with the horizontal trapezoid rule (O(1/n) there, by design)
    const double l2sq = sobolev_norm_of_map(id, 0) * sobolev_norm_of_map(id, 0);
    CHECK(l2sq == doctest::Approx(2.0 / 3.0).epsilon(0.1));
    const double h1 = sobolev_norm_of_map(id, 1);
    CHECK(h1 * h1 - l2sq == doctest::Approx(2.0).epsilon(1e-12));
    for (int k = 2; k <= 4; ++k)
        CHECK(sobolev_norm_of_map(id, k) == doctest::Approx(h1).epsilon(1e-12));
    CHECK(sobolev_norm_of_map_frac(id, 3.5) == doctest::Approx(h1).epsilon(1e-12));

    // 1D has no horizontal directions: fully exact there
    auto g1 = Grid::make({1, 0, 32});
    VectorField id1(g1, 1);
    id1.set_component(0, g1->coordinate_field(0));
    CHECK(sobolev_norm_of_map(id1, 4) ==
          doctest::Approx(std::sqrt(1.0 / 3.0 + 1.0)).epsilon(1e-13));
}

TEST_CASE("boundary norms: multiplier values and duality") {
    auto g = Grid::make({3, 16, 12});
    BoundaryField c(g, -0.4);
    for (double s : {-1.5, -0.5, 0.0, 0.5, 2.0})
        CHECK(boundary_norm(c, s) == doctest::Approx(0.4).epsilon(1e-13));

    // single horizontal mode
    BoundaryField m(g);
    for (std::size_t i = 0; i < g->hsize(); ++i) {
        const double x1 = double(i / std::size_t(g->nh())) / g->nh();
        m[i] = std::sin(2 * M_PI * x1);
    }
    const double mult = 1.0 + 4.0 * M_PI * M_PI;
    CHECK(boundary_norm(m, 1.0) == doctest::Approx(std::sqrt(0.5 * mult)).epsilon(1e-12));
    CHECK(boundary_norm(m, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // single modes achieve equality in the duality bound
    CHECK(boundary_norm(m, -0.5) * boundary_norm(m, 0.5) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // general trace: |f|_{-s} |f|_s >= |f|_0^2
    ScalarField r = random_band_limited_scalar(g, 9, 2);
    BoundaryField tr = g->trace_top(r);
    const double l0 = boundary_norm(tr, 0.0);
    CHECK(boundary_norm(tr, -1.0) * boundary_norm(tr, 1.0) >= l0 * l0 * (1 - 1e-12));
}

TEST_CASE("dual interior norm: Riesz solve oracles") {
    auto g = Grid::make({3, 12, 16});
    CHECK(dual_interior_norm(ScalarField(g, 0.0)) <= 1e-14);
    CHECK(dual_interior_norm(ScalarField(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-10));

    ScalarField s = sample(g, [](double a, double, double) { return std::sin(2 * M_PI * a); });
    const double h1 = std::sqrt(0.5 * (1.0 + 4.0 * M_PI * M_PI));
    CHECK(dual_interior_norm(s) ==
          doctest::Approx(h1 / (1.0 + 4.0 * M_PI * M_PI)).epsilon(1e-8));

    // contraction: ||f||_{H^1'} <= ||f||_0
    for (int i = 0; i < 5; ++i) {
        ScalarField f = random_band_limited_scalar(g, 31, i);
        CHECK(dual_interior_norm(f) <= interior_norm(f, 0) * (1.0 + 1e-6));
    }
}

TEST_CASE("weighted norms with the distance weight") {
    auto g = Grid::make({1, 0, 64});
    CHECK(weighted_norm(ScalarField(g, 1.0), 2, false) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-13));
    CHECK(weighted_norm(ScalarField(g, 0.0), 1, true) == 0.0);

    // mildly singular field: finite weighted norm despite boundary blow-up
    const double eps = 1e-8;
    ScalarField f = sample(g, [eps](double, double, double xv) {
        return std::pow(1.0 - xv + eps, -0.25);
    });
    const double wn = weighted_norm(f, 1, false);
    CHECK(std::isfinite(wn));
    // analytic limit: int (1-x)^{1/2} = 2/3
    CHECK(wn == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(2e-2));
}

TEST_CASE("embedding check") {
    auto g = Grid::make({3, 12, 24});
    SUBCASE("constant field, p = 2") {
        auto e = embedding_check(ScalarField(g, 1.0), 2);
        CHECK(e.lhs == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.rhs == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
        CHECK(e.ratio == doctest::Approx(std::sqrt(3.0)).epsilon(1e-11));
    }
    SUBCASE("zero field ratio convention") {
        auto e = embedding_check(ScalarField(g, 0.0), 1);
        CHECK(e.ratio == 0.0);
    }
    SUBCASE("battery of random fields has a stable constant") {
        double cmax = 0.0;
        for (int i = 0; i < 10; ++i)
            cmax = std::max(cmax, embedding_check(random_band_limited_scalar(g, 13, i), 1).ratio);
        CHECK(cmax > 0.0);
        CHECK(std::isfinite(cmax));
    }
}

TEST_CASE("trace check") {
    auto g = Grid::make({3, 12, 16});
    SUBCASE("w = (0,0,1): normal trace 1, rhs 1") {
        VectorField w(g, 3);
        for (std::size_t i = 0; i < g->nodes(); ++i) w.comp(2)[i] = 1.0;
        auto t = trace_check(w);
        CHECK(t.lhs_normal_sq == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(t.rhs_normal_sq >= 1.0 - 1e-9);
        CHECK(t.ratio_normal <= 1.0 + 1e-9);
    }
    SUBCASE("w = 0") {
        auto t = trace_check(VectorField(g, 3));
        CHECK(t.lhs_normal_sq == 0.0);
        CHECK(t.lhs_tangential_sq == 0.0);
    }
    SUBCASE("2D fields are rejected") {
        auto g2 = Grid::make({2, 8, 16});
        CHECK_THROWS_AS(trace_check(VectorField(g2, 2)), DimensionError);
    }
}

TEST_CASE("hodge check") {
    auto g = Grid::make({3, 12, 16});
    SUBCASE("constant vector: ratio 1") {
        VectorField w(g, 3);
        for (std::size_t i = 0; i < g->nodes(); ++i) {
            w.comp(0)[i] = 1.0;
            w.comp(1)[i] = 2.0;
            w.comp(2)[i] = -1.0;
        }
        for (int s = 1; s <= 4; ++s) {
            // curl/div of a constant are ~1e-11 operator noise; the order s-1
            // norms amplify it, so the tolerance grows with s
            auto h = hodge_check(w, s);
            CHECK(h.ratio_normal == doctest::Approx(1.0).epsilon(1e-4));
            CHECK(h.ratio_tangential == doctest::Approx(1.0).epsilon(1e-4));
        }
    }
    SUBCASE("gradient field battery entry") {
        ScalarField phi = sample(g, [](double a, double, double xv) {
            return std::sin(2 * M_PI * a) * (1.0 + 0.5 * xv * xv);
        });
        auto h = hodge_check(scalar_gradient(phi), 1);
        CHECK(std::isfinite(h.ratio_normal));
        CHECK(h.curl_piece <= 1e-8); // curl of a gradient
    }
    SUBCASE("invalid order") {
        CHECK_THROWS_AS(hodge_check(VectorField(g, 3), 5), Error);
    }
}

TEST_CASE("eulerian curl and div basics") {
    auto g = Grid::make({3, 12, 16});
    VectorField w = random_band_limited_vector(g, 17, 0);
    // div curl w = 0 to rounding (operators along different axes commute)
    CHECK(sup_norm(eulerian_div(eulerian_curl(w))) <= 1e-8);
}
