#pragma once

// Fully symmetric rank-R tensors over 3D indices, stored by canonical
// exponent triple.  A symmetric tensor is determined by how many of its
// indices equal x, y, z, so rank R needs (R+1)(R+2)/2 scalars:
// 6, 10, 15, 21 for ranks 2 through 5.  Storing only those kills whole
// classes of asymmetry bugs by construction and keeps the rank-5 objects of
// the closure recipe cheap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qpm {

template <int Rank, class Scalar = double>
struct SymTensor {
    static_assert(Rank >= 1 && Rank <= 5, "SymTensor supports ranks 1..5");

    static constexpr int rank = Rank;
    static constexpr int ncomp = (Rank + 1) * (Rank + 2) / 2;

    std::array<Scalar, ncomp> comp{};

    // Canonical position of the component with ex x-indices, ey y-indices,
    // ez z-indices (ex + ey + ez = Rank): components are ordered by
    // decreasing ex, then increasing ez.
    static constexpr int comp_index(int ex, int ey, int ez) {
        if (ex < 0 || ey < 0 || ez < 0 || ex + ey + ez != Rank) {
            throw std::invalid_argument("SymTensor: invalid exponent triple");
        }
        const int r = Rank - ex; // indices not equal to x
        return r * (r + 1) / 2 + ez;
    }

    // Exponent triple (ex, ey, ez) of canonical component ci.
    static constexpr std::array<int, 3> exponents(int ci) {
        for (int ex = Rank; ex >= 0; --ex) {
            const int r = Rank - ex;
            const int base = r * (r + 1) / 2;
            if (ci < base + r + 1) {
                const int ez = ci - base;
                return {ex, Rank - ex - ez, ez};
            }
        }
        throw std::out_of_range("SymTensor: component index out of range");
    }

    // Number of index tuples mapping to component ci: Rank! / (ex! ey! ez!).
    static int multiplicity(int ci) {
        const auto [ex, ey, ez] = exponents(ci);
        auto factorial = [](int v) {
            int out = 1;
            for (int i = 2; i <= v; ++i) {
                out *= i;
            }
            return out;
        };
        return factorial(Rank) / (factorial(ex) * factorial(ey) * factorial(ez));
    }

    // A representative index tuple (sorted: x's, then y's, then z's).
    static std::array<int, Rank> representative(int ci) {
        const auto [ex, ey, ez] = exponents(ci);
        std::array<int, Rank> idx{};
        int pos = 0;
        for (int i = 0; i < ex; ++i) {
            idx[pos++] = 0;
        }
        for (int i = 0; i < ey; ++i) {
            idx[pos++] = 1;
        }
        for (int i = 0; i < ez; ++i) {
            idx[pos++] = 2;
        }
        return idx;
    }

    Scalar& at(const std::array<int, Rank>& idx) {
        return comp[index_of(idx)];
    }

    const Scalar& at(const std::array<int, Rank>& idx) const {
        return comp[index_of(idx)];
    }

    template <class... Is>
    Scalar& operator()(Is... is) {
        static_assert(sizeof...(Is) == Rank, "index count must equal rank");
        return at(std::array<int, Rank>{static_cast<int>(is)...});
    }

    template <class... Is>
    const Scalar& operator()(Is... is) const {
        static_assert(sizeof...(Is) == Rank, "index count must equal rank");
        return at(std::array<int, Rank>{static_cast<int>(is)...});
    }

    static int index_of(const std::array<int, Rank>& idx) {
        int ex = 0;
        int ey = 0;
        int ez = 0;
        for (const int i : idx) {
            if (i == 0) {
                ++ex;
            } else if (i == 1) {
                ++ey;
            } else if (i == 2) {
                ++ez;
            } else {
                throw std::out_of_range("SymTensor: index must be 0, 1 or 2");
            }
        }
        return comp_index(ex, ey, ez);
    }

    SymTensor& operator+=(const SymTensor& other) {
        for (int ci = 0; ci < ncomp; ++ci) {
            comp[ci] += other.comp[ci];
        }
        return *this;
    }

    SymTensor& operator-=(const SymTensor& other) {
        for (int ci = 0; ci < ncomp; ++ci) {
            comp[ci] -= other.comp[ci];
        }
        return *this;
    }

    SymTensor& operator*=(const Scalar& factor) {
        for (int ci = 0; ci < ncomp; ++ci) {
            comp[ci] *= factor;
        }
        return *this;
    }

    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(SymTensor a, const Scalar& s) { return a *= s; }
    friend SymTensor operator*(const Scalar& s, SymTensor a) { return a *= s; }

    // Frobenius norm over the full 3^Rank entry set (components weighted by
    // their multiplicity).
    double frobenius_norm() const {
        double sum = 0.0;
        for (int ci = 0; ci < ncomp; ++ci) {
            const double a = std::abs(comp[ci]);
            sum += multiplicity(ci) * a * a;
        }
        return std::sqrt(sum);
    }

    double max_abs() const {
        double worst = 0.0;
        for (int ci = 0; ci < ncomp; ++ci) {
            worst = std::max(worst, std::abs(comp[ci]));
        }
        return worst;
    }
};

// Builds the symmetric tensor whose entries are the permutation average of
// an arbitrary (possibly asymmetric) index function.  Applied to an already
// symmetric function this is the identity.
template <int Rank, class Scalar = double, class Fn>
SymTensor<Rank, Scalar> symmetrize(Fn&& entry) {
    SymTensor<Rank, Scalar> out;
    for (int ci = 0; ci < SymTensor<Rank, Scalar>::ncomp; ++ci) {
        std::array<int, Rank> idx = SymTensor<Rank, Scalar>::representative(ci);
        std::sort(idx.begin(), idx.end());
        Scalar sum{};
        int count = 0;
        do {
            sum += entry(idx);
            ++count;
        } while (std::next_permutation(idx.begin(), idx.end()));
        out.comp[ci] = sum * (1.0 / static_cast<double>(count));
    }
    return out;
}

using SymTensor2 = SymTensor<2, double>;
using SymTensor3 = SymTensor<3, double>;
using SymTensor4 = SymTensor<4, double>;
using SymTensor5 = SymTensor<5, double>;

} // namespace qpm
