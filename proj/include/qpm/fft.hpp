#pragma once

// Iterative radix-2 complex FFT.  Grid sizes in this project are powers of
// two by construction (an invariant of the wavefunction grids), so a
// dependency-free Cooley-Tukey transform is all that is needed.

#include <complex>
#include <stdexcept>
#include <vector>

namespace qpm {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

namespace detail {

// In-place transform with kernel exp(sign * 2*pi*i * j*k / n), unnormalized.
inline void fft_radix2(std::vector<cplx>& data, int sign) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("fft: size must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * pi / static_cast<double>(len);
        const cplx w_len(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx even = data[i + j];
                const cplx odd = data[i + j + len / 2] * w;
                data[i + j] = even + odd;
                data[i + j + len / 2] = even - odd;
                w *= w_len;
            }
        }
    }
}

} // namespace detail

// Forward transform: X_k = sum_j x_j exp(-2*pi*i*j*k/n).
inline void fft(std::vector<cplx>& data) { detail::fft_radix2(data, -1); }

// Inverse transform: x_j = (1/n) sum_k X_k exp(+2*pi*i*j*k/n).
inline void ifft(std::vector<cplx>& data) {
    detail::fft_radix2(data, +1);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& value : data) {
        value *= inv;
    }
}

// Unnormalized positive-kernel transform sum_j x_j exp(+2*pi*i*j*k/n),
// needed where the separation-to-velocity transform carries its own
// prefactor.
inline void fft_positive(std::vector<cplx>& data) {
    detail::fft_radix2(data, +1);
}

} // namespace qpm
