#pragma once

// Harmonic closure of the moment hierarchy at fourth order.
//
// For plane-wave perturbations about a homogeneous, current-free
// equilibrium, the linearized evolution equations of the fourth and fifth
// moments (with the sixth moment set to zero) determine the fourth moment
// algebraically: Fourier transform both equations, solve the fifth-moment
// equation, insert it into the fourth-moment equation and eliminate the
// magnetic field through Faraday's law.  The result collapses to a compact
// closed form.  Both routes are implemented here; their agreement is an
// acceptance-level invariant.
//
// The cancellation behind the collapse relies on Faraday's law in the
// transverse configuration, so the recipe route insists on E perpendicular
// to k.  The closed form itself is a plain algebraic expression and is
// evaluated for any context.  The equilibrium pressure dyad may be any
// symmetric tensor.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qpm/params.hpp"
#include "qpm/sym_tensor.hpp"

namespace qpm {

using cplx = std::complex<double>;
using CVec3 = std::array<cplx, 3>;

// Plane-wave closure input: perturbations vary as exp(i k.x - i omega t).
struct ClosureContext {
    std::array<double, 3> k{0.0, 0.0, 1.0};
    cplx omega{1.0, 0.0};
    SymTensor2 p0;      // equilibrium pressure dyad
    CVec3 e_field{};    // electric field amplitude
    PhysicalSetup setup;

    double k_norm() const {
        return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }

    void validate() const {
        setup.validate();
        if (!(k_norm() > 0.0)) {
            throw std::invalid_argument("ClosureContext: k must be nonzero");
        }
        if (!(std::abs(omega) > 0.0)) {
            throw std::invalid_argument("ClosureContext: omega must be nonzero");
        }
    }

    bool is_transverse(double tol = 1e-10) const {
        cplx dot = 0.0;
        double e_norm_sq = 0.0;
        for (int i = 0; i < 3; ++i) {
            dot += e_field[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
            e_norm_sq += std::norm(e_field[static_cast<std::size_t>(i)]);
        }
        const double e_norm = std::sqrt(e_norm_sq);
        return e_norm == 0.0 || std::abs(dot) <= tol * e_norm * k_norm();
    }

    void require_transverse() const {
        if (!is_transverse()) {
            throw std::invalid_argument(
                "ClosureContext: E must be transverse (E.k = 0); the collapse "
                "to the closed form relies on Faraday cancellation in that "
                "configuration");
        }
    }
};

// Recipe output: the fourth and fifth moments and the relative deviation of
// the recipe's fourth moment from the closed form.
struct ClosureResult {
    SymTensor<4, cplx> r;
    SymTensor<5, cplx> s;
    double residual = 0.0;
};

inline double levi_civita(int a, int b, int c) {
    return 0.5 * static_cast<double>((a - b) * (b - c) * (c - a));
}

// B = (k x E) / omega.
inline CVec3 faraday_b_field(const ClosureContext& ctx) {
    CVec3 b{};
    for (int i = 0; i < 3; ++i) {
        cplx sum = 0.0;
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l < 3; ++l) {
                sum += levi_civita(i, j, l) * ctx.k[static_cast<std::size_t>(j)] *
                       ctx.e_field[static_cast<std::size_t>(l)];
            }
        }
        b[static_cast<std::size_t>(i)] = sum / ctx.omega;
    }
    return b;
}

namespace detail {

// The six pair terms shared by every bracket of the fifth-moment equation:
// cyclic pairings (pq|rs), (qr|sp), (rs|pq), (sp|qr) plus the diagonals
// (pr|qs), (qs|pr), each with the harmonic replacement
// d2_ab -> (i k_a)(i k_b) = -k_a k_b.
inline double closure_pairs(const SymTensor2& p0, const std::array<double, 3>& k,
                            int p, int q, int r, int s) {
    auto d2 = [&k](int a, int b) {
        return -k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(b)];
    };
    return p0(p, q) * d2(r, s) + p0(q, r) * d2(s, p) + p0(r, s) * d2(p, q) +
           p0(s, p) * d2(q, r) + p0(p, r) * d2(q, s) + p0(q, s) * d2(p, r);
}

// The six terms of one antisymmetric bracket of the fourth-moment equation,
// for epsilon carried by the index left out of (a, b, c); n is the
// contraction index shared with epsilon.
inline double closure_eps_terms(const SymTensor2& p0,
                                const std::array<double, 3>& k, int a, int b,
                                int c, int n) {
    auto d2 = [&k](int x, int y) {
        return -k[static_cast<std::size_t>(x)] * k[static_cast<std::size_t>(y)];
    };
    return p0(a, n) * d2(b, c) + p0(b, n) * d2(c, a) + p0(c, n) * d2(a, b) +
           p0(a, b) * d2(c, n) + p0(b, c) * d2(a, n) + p0(c, a) * d2(b, n);
}

inline double closure_prefactor(const PhysicalSetup& setup) {
    return setup.q_charge * setup.hbar * setup.hbar /
           (12.0 * std::pow(setup.mass, 3));
}

inline cplx s_moment_entry(const ClosureContext& ctx, int i, int j, int k,
                           int l, int m) {
    const auto& e = ctx.e_field;
    const cplx bracket_sum =
        closure_pairs(ctx.p0, ctx.k, i, j, k, l) * e[static_cast<std::size_t>(m)] +
        closure_pairs(ctx.p0, ctx.k, j, k, l, m) * e[static_cast<std::size_t>(i)] +
        closure_pairs(ctx.p0, ctx.k, k, l, m, i) * e[static_cast<std::size_t>(j)] +
        closure_pairs(ctx.p0, ctx.k, l, m, i, j) * e[static_cast<std::size_t>(k)] +
        closure_pairs(ctx.p0, ctx.k, m, i, j, k) * e[static_cast<std::size_t>(l)];
    // -i omega S = -c0 * brackets  =>  S = c0 * brackets / (i omega).
    return closure_prefactor(ctx.setup) * bracket_sum / (cplx(0.0, 1.0) * ctx.omega);
}

} // namespace detail

// Fifth moment S from its harmonic linearized evolution equation.
inline SymTensor<5, cplx> s_moment_harmonic(const ClosureContext& ctx) {
    ctx.validate();
    SymTensor<5, cplx> s;
    for (int ci = 0; ci < SymTensor<5, cplx>::ncomp; ++ci) {
        const auto idx = SymTensor<5, cplx>::representative(ci);
        s.comp[static_cast<std::size_t>(ci)] =
            detail::s_moment_entry(ctx, idx[0], idx[1], idx[2], idx[3], idx[4]);
    }
    return s;
}

// Closed-form fourth moment:
// R_ijkl = -(q hbar^2 / 4 m^3 omega^2) (P0_im d3_jkl + P0_jm d3_kli
//          + P0_km d3_lij + P0_lm d3_ijk) E_m with d3_abc -> -i k_a k_b k_c.
inline SymTensor<4, cplx> r_closure_closed_form(const ClosureContext& ctx) {
    ctx.validate();
    const cplx coeff = -ctx.setup.q_charge * ctx.setup.hbar * ctx.setup.hbar /
                       (4.0 * std::pow(ctx.setup.mass, 3) * ctx.omega *
                        ctx.omega);
    auto d3 = [&ctx](int a, int b, int c) {
        return cplx(0.0, -ctx.k[static_cast<std::size_t>(a)] *
                             ctx.k[static_cast<std::size_t>(b)] *
                             ctx.k[static_cast<std::size_t>(c)]);
    };
    SymTensor<4, cplx> r;
    for (int ci = 0; ci < SymTensor<4, cplx>::ncomp; ++ci) {
        const auto idx = SymTensor<4, cplx>::representative(ci);
        const int i = idx[0];
        const int j = idx[1];
        const int k = idx[2];
        const int l = idx[3];
        cplx sum = 0.0;
        for (int m = 0; m < 3; ++m) {
            sum += (ctx.p0(i, m) * d3(j, k, l) + ctx.p0(j, m) * d3(k, l, i) +
                    ctx.p0(k, m) * d3(l, i, j) + ctx.p0(l, m) * d3(i, j, k)) *
                   ctx.e_field[static_cast<std::size_t>(m)];
        }
        r.comp[static_cast<std::size_t>(ci)] = coeff * sum;
    }
    return r;
}

// Fourth moment by the systematic route: solve the fifth-moment equation,
// insert its divergence into the fourth-moment equation, eliminate B
// through Faraday's law.  Requires a transverse context; also reports the
// relative deviation from the closed form as a diagnostic.
inline ClosureResult r_closure_from_recipe(const ClosureContext& ctx) {
    ctx.validate();
    ctx.require_transverse();
    const CVec3 b = faraday_b_field(ctx);
    const double c0 = detail::closure_prefactor(ctx.setup);

    ClosureResult result;
    result.s = s_moment_harmonic(ctx);
    for (int ci = 0; ci < SymTensor<4, cplx>::ncomp; ++ci) {
        const auto idx = SymTensor<4, cplx>::representative(ci);
        const int i = idx[0];
        const int j = idx[1];
        const int k = idx[2];
        const int l = idx[3];

        cplx magnetic = 0.0;
        for (int n = 0; n < 3; ++n) {
            for (int m = 0; m < 3; ++m) {
                const cplx bm = b[static_cast<std::size_t>(m)];
                magnetic +=
                    (levi_civita(i, n, m) *
                         detail::closure_eps_terms(ctx.p0, ctx.k, j, k, l, n) +
                     levi_civita(j, n, m) *
                         detail::closure_eps_terms(ctx.p0, ctx.k, k, l, i, n) +
                     levi_civita(k, n, m) *
                         detail::closure_eps_terms(ctx.p0, ctx.k, l, i, j, n) +
                     levi_civita(l, n, m) *
                         detail::closure_eps_terms(ctx.p0, ctx.k, i, j, k, n)) *
                    bm;
            }
        }
        cplx div_s = 0.0;
        for (int m = 0; m < 3; ++m) {
            div_s += cplx(0.0, ctx.k[static_cast<std::size_t>(m)]) *
                     result.s(i, j, k, l, m);
        }
        // -i omega R = -c0 * magnetic - div S.
        result.r.comp[static_cast<std::size_t>(ci)] =
            (c0 * magnetic + div_s) / (cplx(0.0, 1.0) * ctx.omega);
    }

    const SymTensor<4, cplx> closed = r_closure_closed_form(ctx);
    auto diff = result.r;
    diff -= closed;
    const double scale = closed.max_abs();
    result.residual = scale > 0.0 ? diff.max_abs() / scale : diff.max_abs();
    return result;
}

// Draw a well-conditioned random context: k away from zero, |omega| in
// [0.5, 2.5] with arbitrary phase, a general symmetric pressure dyad, and a
// complex field amplitude projected perpendicular to k (redrawn when the
// projection leaves too little of it).
inline ClosureContext random_closure_context(std::mt19937_64& rng,
                                             const PhysicalSetup& setup = {}) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    ClosureContext ctx;
    ctx.setup = setup;

    double k_norm = 0.0;
    do {
        for (auto& c : ctx.k) {
            c = normal(rng);
        }
        k_norm = ctx.k_norm();
    } while (k_norm < 0.1);

    const double magnitude = 0.5 + 2.0 * uniform(rng);
    const double phase = 2.0 * std::numbers::pi * uniform(rng);
    ctx.omega = std::polar(magnitude, phase);

    for (auto& c : ctx.p0.comp) {
        c = normal(rng);
    }

    double e_norm = 0.0;
    do {
        for (auto& e : ctx.e_field) {
            e = cplx(normal(rng), normal(rng));
        }
        cplx dot = 0.0;
        for (int i = 0; i < 3; ++i) {
            dot += ctx.e_field[static_cast<std::size_t>(i)] *
                   ctx.k[static_cast<std::size_t>(i)];
        }
        e_norm = 0.0;
        for (int i = 0; i < 3; ++i) {
            ctx.e_field[static_cast<std::size_t>(i)] -=
                dot * ctx.k[static_cast<std::size_t>(i)] / (k_norm * k_norm);
            e_norm += std::norm(ctx.e_field[static_cast<std::size_t>(i)]);
        }
        e_norm = std::sqrt(e_norm);
    } while (e_norm < 0.1);
    return ctx;
}

} // namespace qpm
