#pragma once

// Scalar contractions and the gyrotropic decomposition of moment tensors,
// plus velocity-space quadrature of a sampled distribution into the moment
// set (density, velocity, pressure dyad, heat-flux tryad, fourth moment).

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "qpm/params.hpp"
#include "qpm/sym_tensor.hpp"

namespace qpm {

using Vec3 = std::array<double, 3>;

// Moments of a distribution at one spatial location.
struct MomentSet {
    double n = 0.0;              // density
    Vec3 u{};                    // mean velocity
    SymTensor2 P;                // pressure dyad
    SymTensor3 Q;                // heat-flux tryad
    std::optional<SymTensor4> R; // fourth moment, when requested
};

// Split of a symmetric rank-2 tensor into P_perp (isotropic in the plane
// orthogonal to `axis`) and P_par (along the axis), with the Frobenius norm
// of whatever non-gyrotropic remainder is left over.
struct GyrotropicDecomposition {
    double p_perp = 0.0;
    double p_par = 0.0;
    Vec3 axis{0.0, 0.0, 1.0};
    double residual = 0.0;
};

// p = P_ii / 3.
inline double scalar_pressure(const SymTensor2& P) {
    return (P(0, 0) + P(1, 1) + P(2, 2)) / 3.0;
}

// q_i = Q_jji / 2.
inline Vec3 heat_flux_vector(const SymTensor3& Q) {
    Vec3 q{};
    for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 3; ++j) {
            sum += Q(j, j, i);
        }
        q[i] = 0.5 * sum;
    }
    return q;
}

// P_perp * h_ij + P_par * a_i a_j with the projection tensor
// h_ij = delta_ij - a_i a_j.
inline SymTensor2 gyrotropic_tensor(double p_perp, double p_par,
                                    const Vec3& axis = {0.0, 0.0, 1.0}) {
    SymTensor2 out;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            const double aa = axis[i] * axis[j];
            out(i, j) = p_perp * (delta - aa) + p_par * aa;
        }
    }
    return out;
}

// The equilibrium pressure dyad diag(P_perp, P_perp, P_par) for the default
// z axis.
inline SymTensor2 eq_pressure_tensor(const EquilibriumPressure& eq) {
    eq.validate();
    return gyrotropic_tensor(eq.p_perp, eq.p_par);
}

// P_par = a_i P_ij a_j, P_perp = (trace - P_par)/2; the residual is the
// Frobenius distance to the reconstructed gyrotropic form (reported, never
// an error).
inline GyrotropicDecomposition decompose_gyrotropic(
    const SymTensor2& P, const Vec3& axis = {0.0, 0.0, 1.0}) {
    const double norm =
        std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::abs(norm - 1.0) > 1e-10) {
        throw std::invalid_argument("decompose_gyrotropic: axis must be a unit vector");
    }
    GyrotropicDecomposition dec;
    dec.axis = axis;
    double p_par = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            p_par += axis[i] * P(i, j) * axis[j];
        }
    }
    dec.p_par = p_par;
    const double trace = P(0, 0) + P(1, 1) + P(2, 2);
    dec.p_perp = 0.5 * (trace - p_par);
    dec.residual =
        (P - gyrotropic_tensor(dec.p_perp, dec.p_par, axis)).frobenius_norm();
    return dec;
}

// Distance of a rank-4 tensor from the one-dimensional isotropic subspace
// spanned by M_ijkl = d_ij d_kl + d_ik d_jl + d_il d_jk, via orthogonal
// projection in the Frobenius inner product over all 81 entries.
inline double isotropic_residual(const SymTensor4& R) {
    auto iso_entry = [](int i, int j, int k, int l) {
        const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
        return d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k);
    };
    double rm = 0.0; // <R, M>
    double mm = 0.0; // <M, M>
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                for (int l = 0; l < 3; ++l) {
                    const double m = iso_entry(i, j, k, l);
                    rm += R(i, j, k, l) * m;
                    mm += m * m;
                }
            }
        }
    }
    const double fit = rm / mm;
    double residual_sq = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                for (int l = 0; l < 3; ++l) {
                    const double diff = R(i, j, k, l) - fit * iso_entry(i, j, k, l);
                    residual_sq += diff * diff;
                }
            }
        }
    }
    return std::sqrt(residual_sq);
}

// Uniform cubic velocity grid [-vmax, vmax]^3 with inclusive endpoints,
// integrated by the trapezoidal rule (spectrally accurate for distributions
// that have decayed at the boundary).
struct VelocityGrid3 {
    int points_per_axis = 49;
    double vmax = 8.0;

    double dv() const { return 2.0 * vmax / (points_per_axis - 1); }

    double node(int i) const { return -vmax + i * dv(); }

    double weight(int i) const {
        return (i == 0 || i == points_per_axis - 1) ? 0.5 * dv() : dv();
    }
};

// Grid quadrature of the centered products defining the moments.  Throws if
// a non-negligible fraction of |f| sits on the boundary faces (the velocity
// grid fails to contain the support).
inline MomentSet moments_from_phase_space(
    const std::function<double(double, double, double)>& f,
    const VelocityGrid3& grid, double mass, int max_rank = 4) {
    if (max_rank < 2 || max_rank > 4) {
        throw std::invalid_argument("moments_from_phase_space: max_rank must be 2..4");
    }
    if (grid.points_per_axis < 3 || !(grid.vmax > 0.0)) {
        throw std::invalid_argument("moments_from_phase_space: bad velocity grid");
    }
    const int m = grid.points_per_axis;

    // Pass 1: density and momentum, plus the boundary containment check.
    double n = 0.0;
    Vec3 nu{};
    double abs_total = 0.0;
    double abs_boundary = 0.0;
    for (int ix = 0; ix < m; ++ix) {
        for (int iy = 0; iy < m; ++iy) {
            for (int iz = 0; iz < m; ++iz) {
                const double vx = grid.node(ix);
                const double vy = grid.node(iy);
                const double vz = grid.node(iz);
                const double w =
                    grid.weight(ix) * grid.weight(iy) * grid.weight(iz);
                const double value = f(vx, vy, vz);
                n += w * value;
                nu[0] += w * value * vx;
                nu[1] += w * value * vy;
                nu[2] += w * value * vz;
                abs_total += w * std::abs(value);
                const bool boundary = ix == 0 || ix == m - 1 || iy == 0 ||
                                      iy == m - 1 || iz == 0 || iz == m - 1;
                if (boundary) {
                    abs_boundary += w * std::abs(value);
                }
            }
        }
    }
    if (abs_total > 0.0 && abs_boundary > 1e-10 * abs_total) {
        throw std::domain_error(
            "moments_from_phase_space: distribution support reaches the "
            "velocity grid boundary (vmax too small)");
    }
    if (!(n > 0.0)) {
        throw std::domain_error("moments_from_phase_space: non-positive density");
    }

    MomentSet out;
    out.n = n;
    out.u = {nu[0] / n, nu[1] / n, nu[2] / n};

    // Pass 2: centered moments about the computed mean velocity.
    SymTensor2 P;
    SymTensor3 Q;
    SymTensor4 R;
    for (int ix = 0; ix < m; ++ix) {
        for (int iy = 0; iy < m; ++iy) {
            for (int iz = 0; iz < m; ++iz) {
                const double w =
                    grid.weight(ix) * grid.weight(iy) * grid.weight(iz);
                const double value =
                    f(grid.node(ix), grid.node(iy), grid.node(iz));
                const Vec3 c = {grid.node(ix) - out.u[0],
                                grid.node(iy) - out.u[1],
                                grid.node(iz) - out.u[2]};
                for (int i = 0; i < 3; ++i) {
                    for (int j = i; j < 3; ++j) {
                        P(i, j) += w * value * c[i] * c[j];
                        if (max_rank < 3) {
                            continue;
                        }
                        for (int k = j; k < 3; ++k) {
                            Q(i, j, k) += w * value * c[i] * c[j] * c[k];
                            if (max_rank < 4) {
                                continue;
                            }
                            for (int l = k; l < 3; ++l) {
                                R(i, j, k, l) +=
                                    w * value * c[i] * c[j] * c[k] * c[l];
                            }
                        }
                    }
                }
            }
        }
    }
    out.P = P * mass;
    if (max_rank >= 3) {
        out.Q = Q * mass;
    }
    if (max_rank >= 4) {
        out.R = R * mass;
    }
    return out;
}

} // namespace qpm
