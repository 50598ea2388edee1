#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/mollify.hpp"

using namespace spde;

namespace {

GridFunction1D make_step_function(int nodes) {
    GridFunction1D f(Domain1D{0.0, 1.0}, nodes);
    for (int i = 0; i < nodes; ++i) f[i] = f.node_x(i) < 0.5 ? 1.0 : 0.0;
    return f;
}

} // namespace

TEST_CASE("eta follows the cone geometry") {
    ConeSpec relaxed{1.5707963267948966, 3.0, {1.0, 0.0}}; // kappa_C ~ 1.757
    CHECK(eta(1.0, relaxed) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    ConeSpec sixty{1.0471975511965976, 0.5, {1.0, 0.0}}; // theta = pi/3
    CHECK(eta(0.1, sixty) == doctest::Approx(0.05).epsilon(1e-12));

    const ConeSpec cone = interval_cone();
    CHECK(cone.kappa_max() == doctest::Approx(0.5 / (1.0 + std::sin(0.25 * 3.14159265358979))));
    CHECK_THROWS_AS(eta(cone.kappa_max() + 0.01, cone), InvalidParameterError);
    CHECK_THROWS_AS(eta(0.0, cone), InvalidParameterError);
    // eta(kappa) < kappa and linear in kappa
    CHECK(eta(0.2, cone) < 0.2);
    CHECK(eta(0.1, cone) == doctest::Approx(0.5 * eta(0.2, cone)).epsilon(1e-12));
}

TEST_CASE("kernel mass is 1 to quadrature accuracy") {
    const ConeSpec cone = interval_cone();
    CHECK(kernel_mass(0.1, cone, 1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(kernel_mass(0.05, cone, 1) == doctest::Approx(1.0).epsilon(1e-8));
    const ConeSpec cone2 = square_cone();
    CHECK(kernel_mass(0.2, cone2, 2, 192) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("containment holds for the shipped domains with inward shifts") {
    const Domain1D interval{0.0, 1.0};
    const ConeSpec cone = interval_cone();
    for (double kappa : {0.05, 0.15, 0.28}) {
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            const double e = (x < 0.5) ? -1.0 : 1.0;
            CHECK(shift_contained(interval, x, kappa, e, cone));
        }
    }
    const Domain2D square{0.0, 1.0, 0.0, 1.0};
    const ConeSpec cone2 = square_cone();
    const double inv_sqrt2 = 0.7071067811865476;
    for (double kappa : {0.05, 0.2, 0.33}) {
        if (kappa >= cone2.kappa_max()) continue;
        for (int i = 0; i <= 20; ++i) {
            for (int j = 0; j <= 20; ++j) {
                const double x = i / 20.0, y = j / 20.0;
                const std::array<double, 2> e{(x < 0.5 ? -1.0 : 1.0) * inv_sqrt2,
                                              (y < 0.5 ? -1.0 : 1.0) * inv_sqrt2};
                CHECK(shift_contained(square, x, y, kappa, e, cone2));
            }
        }
    }
}

TEST_CASE("fixed-direction mollification errors out when the ball leaves D") {
    const ConeSpec cone = interval_cone();
    GridFunction1D f(Domain1D{0.0, 1.0}, 101);
    // shifting every node to the right fails near the right boundary
    CHECK_THROWS_AS(mollify_shifted(f, 0.1, -1.0, cone), GeometryError);
    try {
        mollify_shifted(f, 0.1, -1.0, cone);
    } catch (const GeometryError& e) {
        CHECK(std::string(e.what()).find("node") != std::string::npos);
        CHECK(e.node[0] > 0.8); // offending node sits near the right end
    }
}

TEST_CASE("constants are preserved and linears are shifted exactly") {
    const ConeSpec cone = interval_cone();
    GridFunction1D c(Domain1D{0.0, 1.0}, 201);
    for (int i = 0; i < c.nodes(); ++i) c[i] = 3.25;
    const auto cm = mollify_shifted_inward(c, 0.12, cone);
    for (int i = 0; i < cm.nodes(); ++i) {
        CHECK(cm[i] == doctest::Approx(3.25).epsilon(1e-8));
    }

    // linear f at interior nodes: the symmetric kernel annihilates the linear
    // moment, so f^kappa(x) = f(x - kappa e) exactly (e = -1 on the left half)
    GridFunction1D lin(Domain1D{0.0, 1.0}, 401);
    for (int i = 0; i < lin.nodes(); ++i) lin[i] = 2.0 * lin.node_x(i) - 0.3;
    const double kappa = 0.05;
    const auto lm = mollify_shifted_inward(lin, kappa, cone);
    for (int i = 40; i <= 160; ++i) { // x in [0.1, 0.4], direction fixed at -1
        const double x = lin.node_x(i);
        const double expected = 2.0 * (x + kappa) - 0.3;
        CHECK(lm[i] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("L1 and L2 errors shrink along kappa -> 0") {
    const ConeSpec cone = interval_cone();
    for (int p : {1, 2}) {
        // step, piecewise-linear (hat), oscillatory
        for (int shape = 0; shape < 3; ++shape) {
            GridFunction1D f(Domain1D{0.0, 1.0}, 801);
            for (int i = 0; i < f.nodes(); ++i) {
                const double x = f.node_x(i);
                if (shape == 0) f[i] = x < 0.5 ? 1.0 : 0.0;
                if (shape == 1) f[i] = std::max(0.0, 1.0 - 4.0 * std::abs(x - 0.5));
                if (shape == 2) f[i] = std::sin(12.566370614359172 * x);
            }
            double prev = 1e100;
            for (double kappa : {0.1, 0.05, 0.025}) {
                const auto fm = mollify_shifted_inward(f, kappa, cone);
                const double err = fm.lp_distance(f, p);
                CHECK(err < prev);
                prev = err;
            }
        }
    }
}

TEST_CASE("mollified fields have bounded second differences") {
    const ConeSpec cone = interval_cone();
    GridFunction1D f(Domain1D{0.0, 1.0}, 801);
    // step placed off-center so the discontinuity sits away from the point
    // where the inward shift direction switches (the composite rule is not
    // smooth across that interface)
    for (int i = 0; i < f.nodes(); ++i) f[i] = f.node_x(i) < 0.3 ? 1.0 : 0.0;
    const double kappa = 0.05;
    const double radius = eta(kappa, cone);
    const auto fm = mollify_shifted_inward(f, kappa, cone);
    double worst = 0.0;
    for (int i = 1; i + 1 < fm.nodes(); ++i) {
        const double x = fm.node_x(i);
        if (std::abs(x - 0.5) < 2.0 * kappa) continue; // skip the switch band
        worst = std::max(worst,
                         std::abs(fm[i - 1] - 2.0 * fm[i] + fm[i + 1]) /
                             (f.dx() * f.dx()));
    }
    // second differences bounded by C / eta^2 * ||f||_inf
    CHECK(worst <= 60.0 / (radius * radius));
}

TEST_CASE("2d rectangle smoke test: constants and convergence") {
    const ConeSpec cone = square_cone();
    GridFunction2D f(Domain2D{0.0, 1.0, 0.0, 1.0}, 101, 101);
    for (int j = 0; j < f.nodes_y(); ++j) {
        for (int i = 0; i < f.nodes_x(); ++i) f.at(i, j) = 1.5;
    }
    const auto fm = mollify_shifted_inward(f, 0.15, cone);
    for (int j = 0; j < f.nodes_y(); ++j) {
        for (int i = 0; i < f.nodes_x(); ++i) {
            CHECK(fm.at(i, j) == doctest::Approx(1.5).epsilon(1e-8));
        }
    }
}

TEST_CASE("grid function csv io round-trips") {
    GridFunction1D f = make_step_function(11);
    std::stringstream ss;
    save_grid_function(f, ss);
    const auto g = load_grid_function(ss);
    CHECK(g.nodes() == f.nodes());
    CHECK(g.domain().x0 == f.domain().x0);
    CHECK(g.domain().x1 == f.domain().x1);
    for (int i = 0; i < f.nodes(); ++i) CHECK(g[i] == f[i]);
}

TEST_CASE("2d mollification error shrinks along kappa -> 0") {
    const ConeSpec cone = square_cone();
    GridFunction2D f(Domain2D{0.0, 1.0, 0.0, 1.0}, 121, 121);
    for (int j = 0; j < f.nodes_y(); ++j) {
        for (int i = 0; i < f.nodes_x(); ++i) {
            f.at(i, j) = (f.node_x(i) < 0.45) != (f.node_y(j) < 0.55) ? 1.0 : 0.0;
        }
    }
    double prev = 1e100;
    for (double kappa : {0.2, 0.1, 0.05}) {
        const auto fm = mollify_shifted_inward(f, kappa, cone);
        double err = 0.0;
        for (int j = 0; j < f.nodes_y(); ++j) {
            for (int i = 0; i < f.nodes_x(); ++i) {
                err += std::abs(fm.at(i, j) - f.at(i, j)) * f.dx() * f.dy();
            }
        }
        CHECK(err < prev);
        prev = err;
    }
}
