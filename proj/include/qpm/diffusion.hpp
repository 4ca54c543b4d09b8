#pragma once

// Quantum velocity diffusion operator
//
//     L = sinh(theta) / theta ,   theta = (hbar k / 2 m) d/dv_z .
//
// Acting on a function of v_z, L is exactly the moving average over the
// interval [v - delta, v + delta] with half-width delta = hbar k / 2m:
// particle velocities are reorganized over a window of width hbar k / m.
// Two realizations are provided:
//
//  * exact mode: the moving interval average, evaluated per point by
//    adaptive quadrature (callable input) or through the Fourier symbol
//    sin(kappa delta)/(kappa delta) (sampled input);
//  * truncated-series mode of order J: sum_{j<=J} (1/(2j+1)!) delta^{2j}
//    d^{2j}/dv^{2j}, applied spectrally to sampled input.  Its Fourier
//    symbol is the order-J Taylor partial sum of sin(z)/z.
//
// At k = 0 or hbar = 0, and for series order J = 0, the operator is the
// identity.  The average preserves the integral of the input and cannot
// raise its maximum.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qpm/quadrature.hpp"
#include "qpm/spectral.hpp"

namespace qpm {

struct DiffusionOperator {
    enum class Mode { exact, series };

    double k = 0.0;     // wavenumber entering theta
    double hbar = 1.0;  // reduced Planck constant
    double mass = 1.0;  // particle mass
    Mode mode = Mode::exact;
    int series_order = 0; // J, series mode only

    void validate() const {
        if (!(mass > 0.0)) {
            throw std::invalid_argument("DiffusionOperator: mass must be > 0");
        }
        if (hbar < 0.0 || k < 0.0) {
            throw std::invalid_argument(
                "DiffusionOperator: hbar and k must be >= 0");
        }
        if (series_order < 0) {
            throw std::invalid_argument(
                "DiffusionOperator: series order must be >= 0");
        }
    }

    // Averaging half-width delta = hbar k / 2m.
    double half_width() const { return 0.5 * hbar * k / mass; }

    bool is_identity() const {
        return half_width() == 0.0 ||
               (mode == Mode::series && series_order == 0);
    }
};

namespace detail {

// Fourier symbol of L on the mode exp(i kappa v).
inline double diffusion_symbol(const DiffusionOperator& op, double kappa) {
    const double z = kappa * op.half_width();
    if (op.mode == DiffusionOperator::Mode::exact) {
        return z == 0.0 ? 1.0 : std::sin(z) / z;
    }
    // Partial sum of sin(z)/z = sum_j (-1)^j z^{2j} / (2j+1)!.
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= op.series_order; ++j) {
        term *= -z * z / (2.0 * j * (2.0 * j + 1.0));
        sum += term;
    }
    return sum;
}

} // namespace detail

// Pointwise exact interval average of a callable:
// (L g)(v) = (m / hbar k) * integral of g over [v - delta, v + delta].
template <class Fn>
    requires std::invocable<Fn&, double>
double apply_L(const DiffusionOperator& op, Fn&& g, double v,
               double quad_tol = 1e-12) {
    op.validate();
    if (op.mode != DiffusionOperator::Mode::exact) {
        throw std::invalid_argument(
            "apply_L: series mode needs sampled input (spectral derivatives)");
    }
    const double delta = op.half_width();
    if (delta == 0.0) {
        return g(v);
    }
    const double integral =
        adaptive_gauss([&g](double w) { return g(w); }, v - delta, v + delta,
                       quad_tol);
    return integral / (2.0 * delta);
}

// Sampled form on a uniform grid of step dv, treated as periodic (callers
// pad the domain so that the tails are negligible).  Exact mode applies the
// sinc symbol, series mode its order-J partial sum, both via the FFT.
inline std::vector<double> apply_L(const DiffusionOperator& op,
                                   const std::vector<double>& samples,
                                   double dv) {
    op.validate();
    if (!(dv > 0.0)) {
        throw std::invalid_argument("apply_L: dv must be > 0");
    }
    const std::size_t n = samples.size();
    if (n < 2 || !is_power_of_two(n)) {
        throw std::invalid_argument(
            "apply_L: sample count must be a power of two >= 2");
    }
    const double period = static_cast<double>(n) * dv;
    if (2.0 * op.half_width() >= period) {
        throw std::domain_error(
            "apply_L: averaging window exceeds the sampled domain");
    }
    if (op.is_identity()) {
        return samples;
    }

    std::vector<cplx> spectrum(samples.begin(), samples.end());
    fft(spectrum);
    const double base = 2.0 * pi / period;
    for (std::size_t j = 0; j < n; ++j) {
        const long mode = j < n / 2 ? static_cast<long>(j)
                                    : static_cast<long>(j) -
                                          static_cast<long>(n);
        const double kappa = base * static_cast<double>(mode);
        spectrum[j] *= detail::diffusion_symbol(op, kappa);
    }
    ifft(spectrum);

    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = spectrum[j].real();
    }
    return out;
}

// Parallel-Gaussian equilibrium with separable perpendicular structure: the
// perpendicular second moment is folded into p_perp, the parallel profile is
// the unit-area Gaussian of width v0.
struct EquilibriumDistribution1D {
    double v0 = 1.0;     // parallel Gaussian width
    double p_perp = 1.0; // perpendicular pressure
    double n0 = 1.0;     // number density

    void validate() const {
        if (!(v0 > 0.0)) {
            throw std::invalid_argument(
                "EquilibriumDistribution1D: v0 must be > 0");
        }
        if (p_perp < 0.0) {
            throw std::invalid_argument(
                "EquilibriumDistribution1D: p_perp must be >= 0");
        }
        if (!(n0 > 0.0)) {
            throw std::invalid_argument(
                "EquilibriumDistribution1D: n0 must be > 0");
        }
    }

    // Unit-area parallel profile, integral 1, first moment 0.
    double f_parallel(double vz) const {
        const double sqrt_two_pi = 2.50662827463100050242;
        return std::exp(-vz * vz / (2.0 * v0 * v0)) / (sqrt_two_pi * v0);
    }

    // Unit-peak parallel profile, as plotted in diffusion-profile output.
    double f_parallel_peak(double vz) const {
        return std::exp(-vz * vz / (2.0 * v0 * v0));
    }
};

} // namespace qpm
