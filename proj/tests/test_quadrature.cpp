#include <doctest.h>

#include <cmath>
#include <vector>

#include "qpm/quadrature.hpp"

using namespace qpm;

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
    for (const int n : {2, 4, 8, 16}) {
        const QuadratureRule& rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        // Weights sum to the interval length.
        double weight_sum = 0.0;
        for (const double w : rule.weights) {
            weight_sum += w;
        }
        CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
        // Monomial moments on [-1,1]: integral of x^p is 0 (odd) or 2/(p+1).
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double quad = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                quad += rule.weights[i] * std::pow(rule.nodes[i], p);
            }
            const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1.0);
            CHECK(quad == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("fixed Gauss rule on a mapped interval") {
    // integral of exp(x) over [0, 2] = e^2 - 1.
    const double exact = std::exp(2.0) - 1.0;
    const double quad =
        fixed_gauss([](double x) { return std::exp(x); }, 0.0, 2.0, 16);
    CHECK(quad == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive Gauss reaches requested absolute accuracy") {
    // A sharply peaked integrand that defeats any single fixed rule over the
    // whole interval: integral of 1/(1e-4 + x^2) over [-1, 1].
    const double a = 1e-2;
    const double exact = 2.0 / a * std::atan(1.0 / a);
    const double quad = adaptive_gauss(
        [a](double x) { return 1.0 / (a * a + x * x); }, -1.0, 1.0, 1e-11);
    CHECK(std::abs(quad - exact) < 1e-9);
}

TEST_CASE("adaptive Gauss handles Gaussian tails and empty intervals") {
    const double pi_local = 3.14159265358979323846;
    const double quad = adaptive_gauss(
        [](double v) { return std::exp(-0.5 * v * v); }, -10.0, 10.0, 1e-13);
    CHECK(quad == doctest::Approx(std::sqrt(2.0 * pi_local)).epsilon(1e-13));
    CHECK(adaptive_gauss([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
}

TEST_CASE("adaptive Gauss supports nested integration") {
    // inner(y) = integral of exp(-x^2 - y^2) dx over [0,1];
    // integral of inner over [0,1] = (integral of exp(-t^2) over [0,1])^2.
    auto inner = [](double y) {
        return adaptive_gauss(
            [y](double x) { return std::exp(-x * x - y * y); }, 0.0, 1.0,
            1e-13);
    };
    const double nested = adaptive_gauss(inner, 0.0, 1.0, 1e-12);
    const double one_dim = adaptive_gauss(
        [](double t) { return std::exp(-t * t); }, 0.0, 1.0, 1e-13);
    CHECK(nested == doctest::Approx(one_dim * one_dim).epsilon(1e-11));
}

TEST_CASE("quadrature input validation") {
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(
        adaptive_gauss([](double) { return 1.0; }, 0.0, 1.0, 0.0),
        std::invalid_argument);
}
