#pragma once

// Gauss-Legendre quadrature: fixed-order rules (nodes computed by Newton
// iteration on the Legendre polynomials, so no hard-coded tables) and an
// adaptive integrator built from an embedded low/high-order pair.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace qpm {

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights; // sum to 2
};

// n-point Gauss-Legendre rule on [-1, 1].  Nodes are the roots of P_n found
// by Newton iteration from the Chebyshev initial guess; weights are
// 2 / ((1 - x^2) P_n'(x)^2).  Exact for polynomials of degree 2n - 1.
inline const QuadratureRule& gauss_legendre(int n) {
    static std::map<int, QuadratureRule> cache;
    const auto found = cache.find(n);
    if (found != cache.end()) {
        return found->second;
    }
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre: need n >= 1");
    }
    const double pi_local = 3.14159265358979323846;
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi_local * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n and P_n' by the three-term recurrence.
            double p0 = 1.0;
            double p1 = x;
            for (int m = 2; m <= n; ++m) {
                const double p2 =
                    ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// Integral of f over [a, b] with a fixed n-point Gauss-Legendre rule.
inline double fixed_gauss(const std::function<double(double)>& f, double a,
                          double b, int n) {
    const QuadratureRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

namespace detail {

inline double adaptive_gauss_panel(const std::function<double(double)>& f,
                                   double a, double b, double tol, int depth) {
    const double coarse = fixed_gauss(f, a, b, 10);
    const QuadratureRule& rule = gauss_legendre(21);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fine = 0.0;
    double fine_abs = 0.0; // L1 surrogate, sets the attainable rounding floor
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double term = rule.weights[i] * f(mid + half * rule.nodes[i]);
        fine += term;
        fine_abs += std::abs(term);
    }
    fine *= half;
    fine_abs *= std::abs(half);
    const double err = std::abs(fine - coarse);
    // Below ~32 eps of the panel's absolute mass further bisection only
    // chases rounding noise, so accept regardless of the local budget.
    const double rounding_floor =
        32.0 * std::numeric_limits<double>::epsilon() * fine_abs;
    if (err <= tol || err <= rounding_floor || depth >= 32) {
        return fine;
    }
    return adaptive_gauss_panel(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gauss_panel(f, mid, b, 0.5 * tol, depth + 1);
}

} // namespace detail

// Adaptive Gauss quadrature: each panel is accepted when the embedded
// 10/21-point estimates agree to the panel's share of the tolerance budget
// (or to the rounding floor of the panel's absolute mass), else the panel is
// bisected.  `tol` is an absolute target for the whole interval.
inline double adaptive_gauss(const std::function<double(double)>& f, double a,
                             double b, double tol = 1e-12) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("adaptive_gauss: tol must be > 0");
    }
    if (a == b) {
        return 0.0;
    }
    return detail::adaptive_gauss_panel(f, a, b, tol, 0);
}

} // namespace qpm
