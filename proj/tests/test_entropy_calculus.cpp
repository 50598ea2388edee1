#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spde/entropy_calculus.hpp"
#include "spde/errors.hpp"
#include "spde/models.hpp"
#include "spde/rng.hpp"

using namespace spde;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// Independent oracle: the paper's branchwise beta' formula, integrated with a
// plain composite Simpson written here, never the library quadrature.
double beta_prime_literal(double r, double xi) {
    if (r < 0.0) return 0.0;
    if (r > xi) return 1.0;
    return 0.5 * (1.0 + std::sin(kPi / (2.0 * xi) * (2.0 * r - xi)));
}

double integrate_beta_prime(double from, double to, double xi, int panels = 20000) {
    const double h = (to - from) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = from + i * h;
        acc += h / 6.0 *
               (beta_prime_literal(a, xi) + 4.0 * beta_prime_literal(a + 0.5 * h, xi) +
                beta_prime_literal(a + h, xi));
    }
    return acc;
}

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

} // namespace

TEST_CASE("beta matches the paper branch values") {
    const EntropyApprox beta(0.1);
    CHECK(beta_eval(beta, -1.0, 0) == 0.0);   // beta(x) = 0 for x <= 0
    CHECK(beta_eval(beta, 0.2, 1) == 1.0);    // beta' = 1 above xi
    CHECK(beta_eval(beta, -0.001, 1) == 0.0); // beta' = 0 below 0
    // midpoint value against an independent quadrature of the literal beta'
    const double oracle = integrate_beta_prime(0.0, 0.05, 0.1);
    CHECK(beta_eval(beta, 0.05, 0) == doctest::Approx(oracle).epsilon(1e-10));
    // closed form (1/4)(xi - 2 xi / pi), i.e. ~0.009085 for xi = 0.1
    CHECK(beta_eval(beta, 0.05, 0) ==
          doctest::Approx(0.25 * (0.1 - 0.2 / kPi)).epsilon(1e-13));
    CHECK(beta_eval(beta, 0.05, 0) == doctest::Approx(0.009084507).epsilon(1e-6));
}

TEST_CASE("beta derivative orders are consistent and bounded") {
    const EntropyApprox beta(0.02);
    const double xi = beta.xi();
    rng::Engine eng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        const double r = 0.1 * (2.0 * eng.uniform() - 1.0);
        CHECK(beta.deriv(r) >= 0.0);
        CHECK(beta.deriv(r) <= 1.0);
        CHECK(beta.second(r) >= 0.0);
        CHECK(beta.second(r) <= kPi / (2.0 * xi) + 1e-12);
        if (r < 0.0 || r > xi) CHECK(beta.second(r) == 0.0);
        CHECK(std::abs(beta.value(r) - pos(r)) <= xi);
    }
    // finite-difference consistency in the smooth interior
    const double h = 1e-7;
    for (double r : {0.004, 0.011, 0.017}) {
        const double fd1 = (beta.value(r + h) - beta.value(r - h)) / (2.0 * h);
        CHECK(fd1 == doctest::Approx(beta.deriv(r)).epsilon(1e-5));
        const double fd2 = (beta.deriv(r + h) - beta.deriv(r - h)) / (2.0 * h);
        CHECK(fd2 == doctest::Approx(beta.second(r)).epsilon(1e-4));
    }
}

TEST_CASE("the |beta - r+| constant is 1 for the explicit member") {
    // maximize r+ - beta(r) over [0, xi] numerically: the max is xi/2 <= xi
    const double xi = 0.37;
    const EntropyApprox beta(xi);
    double worst = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double r = xi * i / 100000.0;
        worst = std::max(worst, pos(r) - beta.value(r));
    }
    CHECK(worst <= xi + 1e-12);
    CHECK(worst == doctest::Approx(0.5 * xi).epsilon(1e-9));
}

TEST_CASE("minus orientation is the reflection with chain-rule derivatives") {
    const EntropyApprox plus(0.05);
    const EntropyApprox minus = plus.reflected();
    CHECK(minus.orientation() == Orientation::minus);
    for (double r : {-0.2, -0.03, 0.0, 0.01, 0.4}) {
        CHECK(minus.value(r) == plus.value(-r));
        CHECK(minus.deriv(r) == -plus.deriv(-r));
        CHECK(minus.second(r) == plus.second(-r));
    }
    CHECK(minus.value(-1.0) == doctest::Approx(1.0 - 0.025));
}

TEST_CASE("nonpositive xi is rejected") {
    CHECK_THROWS_AS(EntropyApprox(0.0), InvalidParameterError);
    CHECK_THROWS_AS(EntropyApprox(-1.0), InvalidParameterError);
    const EntropyApprox beta(0.1);
    CHECK_THROWS_AS(beta_eval(beta, 0.0, 3), InvalidParameterError);
}

TEST_CASE("sign brackets follow the paper literally") {
    CHECK(sign_bracket(0.0, SignMode::plus) == 0.0);
    CHECK(sign_bracket(3.5, SignMode::plus) == 1.0);
    CHECK(sign_bracket(-2.0, SignMode::minus) == 1.0);
    CHECK(sign_bracket(2.0, SignMode::minus) == 0.0);
    CHECK(sign_bracket(0.0, SignMode::full) == 0.0);
    CHECK(sign_bracket(-1.0, SignMode::full) == 1.0); // literal sgn+ + sgn-
    CHECK(signum(-1.0) == -1.0);                      // conventional bracket
    CHECK(signum(0.0) == 0.0);
}

TEST_CASE("kruzhkov flux examples") {
    const FluxModel burgers = make_burgers_flux(2.5);
    CHECK(kruzhkov_flux(burgers, 2.0, 1.0, SignMode::plus)[0] ==
          doctest::Approx(1.5)); // sgn+(1) (2 - 0.5)
    CHECK(kruzhkov_flux(burgers, 1.0, 2.0, SignMode::plus)[0] == 0.0);
    CHECK(kruzhkov_flux(burgers, 1.3, 1.3, SignMode::full)[0] == 0.0);
    const DiffusionModel identity = make_identity_diffusion();
    CHECK(kruzhkov_flux(identity, 0.7, 0.7, SignMode::minus) == 0.0);
    // vector-valued flux: one entry per component
    const FluxModel transport2 = make_linear_flux(2.0, 2);
    const auto v = kruzhkov_flux(transport2, 1.0, 0.0, SignMode::plus);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(2.0));
    CHECK(v[1] == doctest::Approx(2.0));
}

TEST_CASE("entropy flux: trivial, closed form and xi -> 0 consistency") {
    const EntropyApprox beta(0.1);
    const FluxModel lin = make_linear_flux(2.0);
    CHECK(entropy_flux(lin, beta, 0.7, 0.7, 1e-10)[0] == 0.0);
    // linear flux: F^beta(a,b) = c beta(a-b)
    for (double a : {0.35, 1.2}) {
        const double b = 0.3;
        CHECK(entropy_flux(lin, beta, a, b, 1e-11)[0] ==
              doctest::Approx(2.0 * beta.value(a - b)).epsilon(1e-9));
    }
    // oriented integral: swapping endpoints flips the sign
    const FluxModel burgers = make_burgers_flux(2.5);
    const double fwd = entropy_flux(burgers, beta, 1.4, 0.2, 1e-11)[0];
    // int_b^a with a < b is the negative oriented integral of the same integrand
    const double bwd = quad::adaptive_simpson_segmented(
        [&](double r) { return beta.deriv(r - 0.2) * burgers.component(0).deriv(r); },
        1.4, 0.2, {0.2, 0.3}, 1e-11);
    CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-10));

    // |F^beta_xi(a,b) - F+(a,b)| <= L_F xi, shrinking linearly with xi
    const double a = 1.7, b = 0.4;
    double prev_err = 1e9;
    for (double xi : {0.1, 0.01, 0.001}) {
        const EntropyApprox bx(xi);
        const double approx_val = entropy_flux(burgers, bx, a, b, 1e-12)[0];
        const double exact = kruzhkov_flux(burgers, a, b, SignMode::plus)[0];
        const double err = std::abs(approx_val - exact);
        CHECK(err <= burgers.lipschitz * xi + 1e-12);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("kirchhoff transform examples and chain inequality") {
    const DiffusionModel identity = make_identity_diffusion();
    CHECK(kirchhoff(identity, 1.3) == doctest::Approx(1.3).epsilon(1e-10));
    const DiffusionModel none = make_zero_diffusion();
    CHECK(kirchhoff(none, 2.0) == 0.0);

    DiffusionModel four; // Phi' = 4 constant -> G(x) = 2x
    four.kind = DiffusionModel::Kind::custom;
    four.value = [](double u) { return 4.0 * u; };
    four.deriv = [](double) { return 4.0; };
    four.lipschitz = 4.0;
    CHECK(kirchhoff(four, 0.9) == doctest::Approx(1.8).epsilon(1e-10));

    DiffusionModel bad;
    bad.kind = DiffusionModel::Kind::custom;
    bad.value = [](double u) { return -u; };
    bad.deriv = [](double) { return -1.0; };
    CHECK_THROWS_AS(kirchhoff(bad, 1.0), ModelViolationError);

    // (G(a) - G(b))^2 <= (a - b)(Phi(a) - Phi(b)) for the degenerate family
    const DiffusionModel power = make_power_diffusion(2.0, 2.0);
    rng::Engine eng(5);
    for (int t = 0; t < 300; ++t) {
        const double a = 5.0 * (2.0 * eng.uniform() - 1.0);
        const double b = 5.0 * (2.0 * eng.uniform() - 1.0);
        const double ga = kirchhoff(power, a, 1e-11);
        const double gb = kirchhoff(power, b, 1e-11);
        const double lhs = (ga - gb) * (ga - gb);
        const double rhs = (a - b) * (power.value(a) - power.value(b));
        CHECK(lhs <= rhs + 1e-8 * (1.0 + std::abs(rhs)));
    }
    // closed-form Kirchhoff agrees with the quadrature route
    for (double x : {-3.0, -0.4, 0.0, 0.7, 2.9}) {
        CHECK(power.kirchhoff_closed(x) ==
              doctest::Approx(kirchhoff(power, x, 1e-12)).epsilon(1e-9));
    }
}

TEST_CASE("small-xi concentration limits") {
    const std::vector<double> xis{0.5, 0.1, 0.02};
    // part i with b > a vanishes identically
    const auto zero_case = concentration_limit([](double) { return 1.0; }, 0.0, 1.0,
                                         xis, ConcentrationSide::at_a, 1e-11);
    for (double v : zero_case) CHECK(v == 0.0);

    // part i, l == 1, a=1, b=0: exact value -1 once xi <= a - b
    const auto const_case = concentration_limit([](double) { return 1.0; }, 1.0, 0.0,
                                          xis, ConcentrationSide::at_a, 1e-11);
    for (double v : const_case) CHECK(v == doctest::Approx(-1.0).epsilon(1e-8));

    // part ii, l = s^2, a=2, b=1: converges to sgn+(1) l(1) = 1 linearly in xi
    const auto quad_case = concentration_limit([](double s) { return s * s; }, 2.0, 1.0,
                                         xis, ConcentrationSide::at_b, 1e-11);
    double prev_err = 1e9;
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const double err = std::abs(quad_case[i] - 1.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    // exact error here is xi + xi^2 (1/2 - 2/pi^2), so just above xi itself
    CHECK(std::abs(quad_case.back() - 1.0) < 1.1 * xis.back());

    CHECK_THROWS_AS(concentration_limit([](double) { return 1.0; }, 0.0, 1.0, {0.1, 0.5},
                                  ConcentrationSide::at_a, 1e-10),
                    InvalidParameterError);
}

TEST_CASE("pointwise identities hold to roundoff on random pairs") {
    const FluxModel burgers = make_burgers_flux(2.5);
    const DiffusionModel power = make_power_diffusion(2.0, 2.0);
    const auto& F = burgers.component(0).value;
    const auto& Phi = power.value;
    auto sp = [](double x) { return x > 0.0 ? 1.0 : 0.0; };

    rng::Engine eng(99);
    for (int t = 0; t < 20000; ++t) {
        const double a = 5.0 * (2.0 * eng.uniform() - 1.0);
        const double b = 5.0 * (2.0 * eng.uniform() - 1.0);

        // (a-b)+ = (a+ - b+)+ + (b- - a-)+
        CHECK(std::abs(pos(a - b) - (pos(pos(a) - pos(b)) + pos(neg(b) - neg(a)))) <=
              1e-12);
        // (a+ - b)+ = (a+ - b+)+ - sgn+(b-) b
        CHECK(std::abs(pos(pos(a) - b) - (pos(pos(a) - pos(b)) - sp(neg(b)) * b)) <=
              1e-12);
        // flux and diffusion analogues
        CHECK(std::abs(sp(pos(a) - b) * (F(pos(a)) - F(b)) -
                       (sp(pos(a) - pos(b)) * (F(pos(a)) - F(pos(b))) -
                        sp(neg(b)) * F(b))) <= 1e-12);
        CHECK(std::abs(sp(pos(a) - b) * (Phi(pos(a)) - Phi(b)) -
                       (sp(pos(a) - pos(b)) * (Phi(pos(a)) - Phi(pos(b))) -
                        sp(neg(b)) * Phi(b))) <= 1e-12);
        // sgn+(a+ - b+)(F(a+) - F(b+)) = sgn+(a+ - b)(F(a+) - F(b+))
        CHECK(std::abs(sp(pos(a) - pos(b)) * (F(pos(a)) - F(pos(b))) -
                       sp(pos(a) - b) * (F(pos(a)) - F(pos(b)))) <= 1e-12);
        CHECK(std::abs(sp(pos(a) - pos(b)) * (Phi(pos(a)) - Phi(pos(b))) -
                       sp(pos(a) - b) * (Phi(pos(a)) - Phi(pos(b)))) <= 1e-12);
        // recombination into the one-sided Kruzhkov brackets
        const double fplus = sp(a - b) * (F(a) - F(b));
        CHECK(std::abs(-sp(pos(a) - pos(b)) * (F(pos(a)) - F(pos(b))) +
                       sp(neg(b) - neg(a)) * (F(-neg(b)) - F(-neg(a))) + fplus) <=
              1e-12);
        const double phiplus = sp(a - b) * (Phi(a) - Phi(b));
        CHECK(std::abs(sp(pos(a) - pos(b)) * (Phi(pos(a)) - Phi(pos(b))) -
                       sp(neg(b) - neg(a)) * (Phi(-neg(b)) - Phi(-neg(a))) -
                       phiplus) <= 1e-12);
    }
}

TEST_CASE("quadrature reports non-convergence with the achieved error") {
    // endpoint singularity: the adaptive refinement hits the depth cap
    CHECK_THROWS_AS(quad::adaptive_simpson(
                        [](double x) { return 1.0 / std::sqrt(x + 1e-300); }, 0.0,
                        1.0, 1e-13),
                    NumericalError);
    try {
        quad::adaptive_simpson([](double x) { return 1.0 / std::sqrt(x + 1e-300); },
                               0.0, 1.0, 1e-13);
    } catch (const NumericalError& e) {
        CHECK(e.achieved_tolerance > 1e-13);
    }
    CHECK_THROWS_AS(quad::adaptive_simpson([](double x) { return x; }, 0.0, 1.0, 0.0),
                    InvalidParameterError);
}

TEST_CASE("literal and conventional kruzhkov brackets differ only below the diagonal") {
    const DiffusionModel identity = make_identity_diffusion();
    // above the diagonal both agree; below, the literal sgn keeps the sign of
    // Phi(a) - Phi(b) while the conventional bracket flips it
    CHECK(kruzhkov_flux(identity, 2.0, 1.0, SignMode::full) ==
          kruzhkov_flux_signed(identity, 2.0, 1.0));
    CHECK(kruzhkov_flux(identity, 1.0, 2.0, SignMode::full) == -1.0);
    CHECK(kruzhkov_flux_signed(identity, 1.0, 2.0) == 1.0);
    CHECK(kruzhkov_flux_signed(identity, 1.0, 1.0) == 0.0);
    const FluxModel burgers = make_burgers_flux(2.5);
    CHECK(kruzhkov_flux_signed(burgers, 0.5, 1.5)[0] ==
          doctest::Approx(1.0)); // |F(0.5) - F(1.5)| = 1
}
