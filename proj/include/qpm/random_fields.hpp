#pragma once

// Seeded generators for the smooth periodic fields used by the gauge test
// suite: band-limited random profiles, delocalized random wavefunctions,
// gauge fields and gauge transforms.
//
// The wavefunctions are deliberately delocalized, exp(g1 + i g2) with
// band-limited g1, g2, so the density is bounded away from zero everywhere.
// Localized envelopes would decay below machine precision at the periodic
// seam; the resulting broadband noise in the point-split product is
// amplified by the v^3 weight of third moments and would mask the
// gauge-invariance checks.  The field band is kept at |mode| <= 4 with a
// 1/j^2 amplitude roll-off so every downstream quadrature resolves the
// profiles to full precision.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qpm/spectral.hpp"

namespace qpm {

// Sum over modes j = 1..max_mode of (amplitude/j^2) (a_j cos + b_j sin)
// with independent standard normal draws a_j, b_j.
inline std::vector<double> smooth_periodic_field(const Grid1D& grid,
                                                 std::mt19937_64& rng,
                                                 double amplitude,
                                                 int max_mode = 4) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> field(grid.n, 0.0);
    for (int j = 1; j <= max_mode; ++j) {
        const double scale = amplitude / (static_cast<double>(j) * j);
        const double aj = scale * normal(rng);
        const double bj = scale * normal(rng);
        const double k = 2.0 * pi * j / grid.length;
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.node(i);
            field[i] += aj * std::cos(k * x) + bj * std::sin(k * x);
        }
    }
    return field;
}

// psi = exp(g1 + i g2), normalized so that the quadrature of |psi|^2 over
// the period equals one.
inline std::vector<cplx> random_delocalized_state(const Grid1D& grid,
                                                  std::mt19937_64& rng,
                                                  double amp_log = 0.3,
                                                  double amp_phase = 0.6) {
    const std::vector<double> g1 = smooth_periodic_field(grid, rng, amp_log);
    const std::vector<double> g2 = smooth_periodic_field(grid, rng, amp_phase);
    std::vector<cplx> psi(grid.n);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        psi[i] = std::exp(cplx(g1[i], g2[i]));
        norm_sq += std::norm(psi[i]) * grid.dx();
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& value : psi) {
        value *= scale;
    }
    return psi;
}

} // namespace qpm
