#pragma once

// Periodic 1D grids and spectral (Fourier) calculus on them: derivatives,
// uniform shifts of the trigonometric interpolant, and resolution
// diagnostics.  All profile manipulation in the project funnels through
// these helpers so that differentiation is exact for band-limited data.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qpm/fft.hpp"

namespace qpm {

inline constexpr double pi = 3.14159265358979323846;

// Equally spaced nodes x_j = j * L / N on a periodic interval of length L.
struct Grid1D {
    std::size_t n = 0;
    double length = 0.0;

    Grid1D() = default;
    Grid1D(std::size_t n_nodes, double interval_length)
        : n(n_nodes), length(interval_length) {
        if (!is_power_of_two(n)) {
            throw std::invalid_argument("Grid1D: node count must be a power of two");
        }
        if (!(length > 0.0)) {
            throw std::invalid_argument("Grid1D: length must be > 0");
        }
    }

    double dx() const { return length / static_cast<double>(n); }

    double node(std::size_t j) const { return static_cast<double>(j) * dx(); }

    std::vector<double> nodes() const {
        std::vector<double> out(n);
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = node(j);
        }
        return out;
    }

    // Signed integer mode number for FFT bin j: 0, 1, ..., N/2-1, -N/2, ..., -1.
    long mode_number(std::size_t j) const {
        const long half = static_cast<long>(n) / 2;
        const long lj = static_cast<long>(j);
        return (lj < half) ? lj : lj - static_cast<long>(n);
    }

    // Wavenumber of FFT bin j: 2*pi*mode/L.
    double wavenumber(std::size_t j) const {
        return 2.0 * pi * static_cast<double>(mode_number(j)) / length;
    }

    bool operator==(const Grid1D& other) const {
        return n == other.n && length == other.length;
    }
};

inline std::vector<cplx> to_complex(const std::vector<double>& real_values) {
    return std::vector<cplx>(real_values.begin(), real_values.end());
}

inline std::vector<double> real_part(const std::vector<cplx>& values) {
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        out[j] = values[j].real();
    }
    return out;
}

// d^order/dx^order of the trigonometric interpolant, sampled on the grid.
// For odd orders the Nyquist mode is zeroed (its derivative has no
// consistent real representation on the grid).
inline std::vector<cplx> spectral_derivative(const Grid1D& grid,
                                             const std::vector<cplx>& values,
                                             int order = 1) {
    if (values.size() != grid.n) {
        throw std::invalid_argument("spectral_derivative: size mismatch");
    }
    if (order < 0) {
        throw std::invalid_argument("spectral_derivative: order must be >= 0");
    }
    std::vector<cplx> hat = values;
    fft(hat);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const bool nyquist = (grid.n % 2 == 0) && (j == grid.n / 2);
        if (nyquist && (order % 2 == 1)) {
            hat[j] = 0.0;
            continue;
        }
        const cplx ik(0.0, grid.wavenumber(j));
        cplx factor(1.0, 0.0);
        for (int p = 0; p < order; ++p) {
            factor *= ik;
        }
        hat[j] *= factor;
    }
    ifft(hat);
    return hat;
}

inline std::vector<double> spectral_derivative(const Grid1D& grid,
                                               const std::vector<double>& values,
                                               int order = 1) {
    return real_part(spectral_derivative(grid, to_complex(values), order));
}

// Samples of the trigonometric interpolant shifted by a constant offset:
// out_j = f(x_j + shift).
inline std::vector<double> spectral_shift(const Grid1D& grid,
                                          const std::vector<double>& values,
                                          double shift) {
    if (values.size() != grid.n) {
        throw std::invalid_argument("spectral_shift: size mismatch");
    }
    std::vector<cplx> hat = to_complex(values);
    fft(hat);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double k = grid.wavenumber(j);
        hat[j] *= cplx(std::cos(k * shift), std::sin(k * shift));
    }
    ifft(hat);
    return real_part(hat);
}

// Fraction of spectral power carried by the top octave of modes
// (|mode| > N/4).  Used as a resolution diagnostic: well-resolved profiles
// have an effectively zero tail.  Returns 0 for an identically zero input.
inline double spectral_tail_fraction(const Grid1D& grid,
                                     const std::vector<double>& values) {
    if (values.size() != grid.n) {
        throw std::invalid_argument("spectral_tail_fraction: size mismatch");
    }
    std::vector<cplx> hat = to_complex(values);
    fft(hat);
    double total = 0.0;
    double tail = 0.0;
    const long quarter = static_cast<long>(grid.n) / 4;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double power = std::norm(hat[j]);
        total += power;
        if (std::abs(grid.mode_number(j)) > quarter) {
            tail += power;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

} // namespace qpm
