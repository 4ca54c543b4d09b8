#pragma once

// Transverse electromagnetic dispersion relations.
//
// Fluid route: the moment hierarchy closed at the fourth moment yields
//
//   omega^2 - k^2 c^2 = wp^2 [ 1 + k^2 Pperp / (n0 m omega^2)
//                              + hbar^2 k^6 Pperp / (4 n0 m^3 omega^4) ] ,
//
// a cubic in x = omega^2 solved exactly (Cardano plus a Newton polish); the
// electromagnetic branch is the largest real root, continuously connected
// to omega^2 = wp^2 + c^2 k^2.  A long-wavelength/semiclassical explicit
// approximation is provided alongside.
//
// Kinetic route: the linearized phase-space theory gives
//
//   omega^2 = wp^2 + c^2 k^2 + (k^2 wp^2 Pperp / (m n0))
//             * Integral dv (L f_par)(v) / (omega - k v)^2 ,
//
// after folding the separable perpendicular integral into Pperp; L is the
// quantum diffusion operator.  The gauge-dependent formulation replaces the
// diffused profile by a finite difference of the equilibrium at v +- delta
// divided by hbar; integration by parts shows both forms agree pointwise in
// (omega, k), which is verified numerically, not assumed.
//
// Real frequencies only: the electromagnetic branch satisfies
// omega / k > c > v for every velocity in the support, so the resonant
// denominators never vanish and all integrals are ordinary.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpm/diffusion.hpp"
#include "qpm/params.hpp"
#include "qpm/quadrature.hpp"

namespace qpm {

struct DispersionResult {
    double k = 0.0;
    double omega = 0.0;    // electromagnetic-branch frequency
    double residual = 0.0; // dispersion-function value at the root
    std::string branch = "em";
    int iterations = 0;
};

// Fluid dispersion function D(omega); zero on a branch of the relation.
inline double fluid_dispersion_value(double omega, double k,
                                     const PhysicalSetup& setup,
                                     const EquilibriumPressure& eq) {
    setup.validate();
    eq.validate();
    if (omega == 0.0) {
        throw std::invalid_argument(
            "fluid_dispersion_value: omega must be nonzero");
    }
    const double wp = plasma_frequency(setup);
    const double w2 = omega * omega;
    const double thermal =
        k * k * eq.p_perp / (setup.n0 * setup.mass * w2);
    const double quantum = setup.hbar * setup.hbar * std::pow(k, 6) *
                           eq.p_perp /
                           (4.0 * setup.n0 * std::pow(setup.mass, 3) * w2 * w2);
    return w2 - k * k * setup.c_light * setup.c_light -
           wp * wp * (1.0 + thermal + quantum);
}

namespace detail {

// Coefficients of the fluid relation as x^3 - a2 x^2 - a1 x - a0 = 0 in
// x = omega^2 (multiply D(omega) by omega^4).
struct FluidCubic {
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    double value(double x) const { return ((x - a2) * x - a1) * x - a0; }
    double derivative(double x) const { return (3.0 * x - 2.0 * a2) * x - a1; }
};

inline FluidCubic fluid_cubic(double k, const PhysicalSetup& setup,
                              const EquilibriumPressure& eq) {
    FluidCubic c;
    const double wp = plasma_frequency(setup);
    c.a2 = k * k * setup.c_light * setup.c_light + wp * wp;
    c.a1 = wp * wp * k * k * eq.p_perp / (setup.n0 * setup.mass);
    c.a0 = wp * wp * setup.hbar * setup.hbar * std::pow(k, 6) * eq.p_perp /
           (4.0 * setup.n0 * std::pow(setup.mass, 3));
    return c;
}

// Largest real root of the depressed form via Cardano / trigonometric
// formulas, then polished on the original cubic.
inline double largest_real_root(const FluidCubic& c, int& iterations) {
    const double shift = c.a2 / 3.0;
    const double p = -c.a1 - c.a2 * c.a2 / 3.0;
    const double q = -c.a0 - c.a1 * c.a2 / 3.0 - 2.0 * std::pow(c.a2, 3) / 27.0;
    const double disc = 0.25 * q * q + std::pow(p / 3.0, 3);

    double y = 0.0;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        y = std::cbrt(-0.5 * q + root) + std::cbrt(-0.5 * q - root);
    } else {
        // Three real roots; the largest has the smallest angle.
        const double r = std::sqrt(-p / 3.0);
        const double phi = std::acos(std::clamp(
            -0.5 * q / (r * r * r), -1.0, 1.0));
        y = 2.0 * r * std::cos(phi / 3.0);
    }

    double x = y + shift;
    iterations = 0;
    for (int it = 0; it < 50; ++it) {
        const double f = c.value(x);
        const double df = c.derivative(x);
        if (df == 0.0) {
            break;
        }
        const double step = f / df;
        x -= step;
        ++iterations;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return x;
}

} // namespace detail

// Electromagnetic-branch root of the fluid relation.
inline DispersionResult fluid_dispersion_roots(double k,
                                               const PhysicalSetup& setup,
                                               const EquilibriumPressure& eq) {
    setup.validate();
    eq.validate();
    if (k < 0.0) {
        throw std::invalid_argument("fluid_dispersion_roots: k must be >= 0");
    }
    const detail::FluidCubic cubic = detail::fluid_cubic(k, setup, eq);
    DispersionResult result;
    result.k = k;
    int iterations = 0;
    const double x = detail::largest_real_root(cubic, iterations);
    if (!(x > 0.0)) {
        throw std::runtime_error(
            "fluid_dispersion_roots: no positive electromagnetic root");
    }
    result.omega = std::sqrt(x);
    result.iterations = iterations;
    result.residual = std::abs(fluid_dispersion_value(result.omega, k, setup, eq));
    return result;
}

// Long-wavelength, semiclassical explicit approximation to the same branch.
inline double fluid_dispersion_approx(double k, const PhysicalSetup& setup,
                                      const EquilibriumPressure& eq) {
    setup.validate();
    eq.validate();
    if (k < 0.0) {
        throw std::invalid_argument("fluid_dispersion_approx: k must be >= 0");
    }
    const double wp = plasma_frequency(setup);
    const double x = wp * wp + setup.c_light * setup.c_light * k * k +
                     eq.p_perp * k * k / (setup.mass * setup.n0) +
                     setup.hbar * setup.hbar * std::pow(k, 6) * eq.p_perp /
                         (4.0 * std::pow(setup.mass, 3) * setup.n0 * wp * wp);
    return std::sqrt(x);
}

namespace detail {

// Diffused parallel profile (L f_par)(v) for the three operator modes.
// Exact mode realizes the moving interval average by adaptive quadrature;
// series mode evaluates the truncated expansion with exact Gaussian
// derivatives (Hermite recurrence).
inline double diffused_parallel(const EquilibriumDistribution1D& f0,
                                const DiffusionOperator& op, double v) {
    const double delta = op.half_width();
    if (op.is_identity()) {
        return f0.f_parallel(v);
    }
    if (op.mode == DiffusionOperator::Mode::exact) {
        return apply_L(op, [&f0](double w) { return f0.f_parallel(w); }, v);
    }
    // Truncated series: sum_j (1/(2j+1)!) delta^{2j} f^{(2j)}(v) with
    // d^{2j}/dv^{2j} exp(-v^2/2v0^2) = (2 v0^2)^{-j} H_{2j}(x) exp(-x^2),
    // x = v / (sqrt(2) v0).
    const double x = v / (std::sqrt(2.0) * f0.v0);
    double sum = 1.0;
    double h_prev = 1.0;      // H_0
    double h_curr = 2.0 * x;  // H_1
    double factor = 1.0;      // delta^{2j} (2 v0^2)^{-j} / (2j+1)!
    for (int n = 2; n <= 2 * op.series_order; ++n) {
        const double h_next =
            2.0 * x * h_curr - 2.0 * static_cast<double>(n - 1) * h_prev;
        h_prev = h_curr;
        h_curr = h_next;
        if (n % 2 == 0) {
            const double j = static_cast<double>(n) / 2.0;
            factor *= delta * delta /
                      (2.0 * f0.v0 * f0.v0 * (2.0 * j) * (2.0 * j + 1.0));
            sum += factor * h_curr;
        }
    }
    return f0.f_parallel(v) * sum;
}

struct KineticIntegrals {
    double value = 0.0;      // Integral (L f_par) / (omega - k v)^2
    double derivative = 0.0; // d/d omega of the above
};

inline KineticIntegrals kinetic_integrals(double omega, double k,
                                          const EquilibriumDistribution1D& f0,
                                          const DiffusionOperator& op) {
    const double delta = op.half_width();
    const double cutoff = 8.0 * f0.v0 + delta;
    if (k > 0.0 && !(omega / k > cutoff)) {
        throw std::domain_error(
            "kinetic dispersion: omega/k inside the velocity support "
            "(resonance)");
    }
    KineticIntegrals out;
    out.value = adaptive_gauss(
        [&](double v) {
            const double d = omega - k * v;
            return diffused_parallel(f0, op, v) / (d * d);
        },
        -cutoff, cutoff, 1e-13);
    out.derivative = adaptive_gauss(
        [&](double v) {
            const double d = omega - k * v;
            return -2.0 * diffused_parallel(f0, op, v) / (d * d * d);
        },
        -cutoff, cutoff, 1e-13);
    return out;
}

inline DiffusionOperator kinetic_operator(double k, const PhysicalSetup& setup,
                                          DiffusionOperator::Mode l_mode,
                                          int series_order) {
    DiffusionOperator op;
    op.k = k;
    op.hbar = setup.hbar;
    op.mass = setup.mass;
    op.mode = l_mode;
    op.series_order = series_order;
    op.validate();
    return op;
}

} // namespace detail

// Kinetic dispersion function D(omega) = omega^2 - rhs(omega); zero at the
// electromagnetic root.
inline double kinetic_dispersion_value(
    double omega, double k, const PhysicalSetup& setup,
    const EquilibriumDistribution1D& f0,
    DiffusionOperator::Mode l_mode = DiffusionOperator::Mode::exact,
    int series_order = 0) {
    setup.validate();
    f0.validate();
    const DiffusionOperator op =
        detail::kinetic_operator(k, setup, l_mode, series_order);
    const double wp = plasma_frequency(setup);
    const double integral =
        detail::kinetic_integrals(omega, k, f0, op).value;
    return omega * omega - wp * wp - setup.c_light * setup.c_light * k * k -
           k * k * wp * wp * f0.p_perp / (setup.mass * setup.n0) * integral;
}

// Newton solve of the kinetic relation, seeded from the fluid approximation
// (or an explicit warm start), with step halving whenever the residual
// grows.
inline DispersionResult kinetic_dispersion_solve(
    double k, const PhysicalSetup& setup, const EquilibriumDistribution1D& f0,
    DiffusionOperator::Mode l_mode = DiffusionOperator::Mode::exact,
    int series_order = 0, double seed_omega = 0.0) {
    setup.validate();
    f0.validate();
    if (k < 0.0) {
        throw std::invalid_argument("kinetic_dispersion_solve: k must be >= 0");
    }
    const DiffusionOperator op =
        detail::kinetic_operator(k, setup, l_mode, series_order);
    const double wp = plasma_frequency(setup);
    EquilibriumPressure eq;
    eq.p_perp = f0.p_perp;
    eq.p_par = f0.p_perp; // unused by the transverse branch
    double omega = seed_omega > 0.0 ? seed_omega
                                    : fluid_dispersion_approx(k, setup, eq);

    DispersionResult result;
    result.k = k;
    const double coupling = k * k * wp * wp * f0.p_perp /
                            (setup.mass * setup.n0);
    double residual = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const detail::KineticIntegrals ints =
            detail::kinetic_integrals(omega, k, f0, op);
        residual = omega * omega - wp * wp -
                   setup.c_light * setup.c_light * k * k -
                   coupling * ints.value;
        const double slope = 2.0 * omega - coupling * ints.derivative;
        if (slope == 0.0) {
            throw std::runtime_error(
                "kinetic_dispersion_solve: vanishing derivative");
        }
        double step = -residual / slope;
        // Damp the step while it worsens the residual.
        for (int halving = 0; halving < 12; ++halving) {
            const double trial = omega + step;
            const double trial_residual =
                kinetic_dispersion_value(trial, k, setup, f0, l_mode,
                                         series_order);
            if (std::abs(trial_residual) <= std::abs(residual)) {
                break;
            }
            step *= 0.5;
        }
        omega += step;
        result.iterations = it + 1;
        if (std::abs(step) < 1e-12 * wp) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw std::runtime_error(
            "kinetic_dispersion_solve: no convergence after 100 iterations");
    }
    result.omega = omega;
    result.residual = std::abs(
        kinetic_dispersion_value(omega, k, setup, f0, l_mode, series_order));
    return result;
}

// Gauge-dependent kinetic relation: right side minus omega^2, i.e.
//
//   wp^2 + c^2 k^2 - (wp^2 Pperp / (n0 hbar))
//     * Integral dv [f_par(v + delta) - f_par(v - delta)] / (omega - k v)
//   - omega^2 ,
//
// with delta = hbar k / 2m.  Zero at the same roots as the gauge-invariant
// form; the sum of this function and kinetic_dispersion_value is the
// pointwise difference of the two formulations.
inline double gd_kinetic_eval(double omega, double k,
                              const PhysicalSetup& setup,
                              const EquilibriumDistribution1D& f0) {
    setup.validate();
    f0.validate();
    if (k < 0.0) {
        throw std::invalid_argument("gd_kinetic_eval: k must be >= 0");
    }
    const double wp = plasma_frequency(setup);
    const double delta = 0.5 * setup.hbar * k / setup.mass;
    const double cutoff = 8.0 * f0.v0 + delta;
    if (k > 0.0 && !(omega / k > cutoff)) {
        throw std::domain_error(
            "gd_kinetic_eval: omega/k inside the velocity support (resonance)");
    }

    double coupled = 0.0;
    if (delta > 0.0) {
        const double finite_difference = adaptive_gauss(
            [&](double v) {
                return (f0.f_parallel(v + delta) - f0.f_parallel(v - delta)) /
                       (omega - k * v);
            },
            -cutoff, cutoff, 1e-13);
        coupled = -wp * wp * f0.p_perp / (setup.n0 * setup.hbar) *
                  finite_difference;
    } else {
        // hbar -> 0 limit: [f(v+delta) - f(v-delta)] / hbar -> (k/m) f'(v).
        const double derivative_integral = adaptive_gauss(
            [&](double v) {
                return -v / (f0.v0 * f0.v0) * f0.f_parallel(v) /
                       (omega - k * v);
            },
            -cutoff, cutoff, 1e-13);
        coupled = -wp * wp * f0.p_perp * k /
                  (setup.n0 * setup.mass) * derivative_integral;
    }
    const double rhs =
        wp * wp + setup.c_light * setup.c_light * k * k + coupled;
    return rhs - omega * omega;
}

enum class ScanMethod { fluid, approx, kinetic };

inline std::string scan_method_name(ScanMethod method) {
    switch (method) {
        case ScanMethod::fluid: return "fluid";
        case ScanMethod::approx: return "approx";
        case ScanMethod::kinetic: return "kinetic";
    }
    throw std::invalid_argument("scan_method_name: unknown method");
}

// Uniform k-scan of the chosen solver, warm-starting each kinetic solve
// from the previous root.
inline std::vector<DispersionResult> dispersion_scan(
    double k_min, double k_max, int steps, ScanMethod method,
    const PhysicalSetup& setup, const EquilibriumPressure& eq,
    const EquilibriumDistribution1D& f0) {
    if (k_min < 0.0 || k_max < k_min) {
        throw std::invalid_argument(
            "dispersion_scan: need 0 <= k_min <= k_max");
    }
    if (steps < 2) {
        throw std::invalid_argument("dispersion_scan: steps must be >= 2");
    }
    std::vector<DispersionResult> table;
    table.reserve(static_cast<std::size_t>(steps));
    double previous_omega = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double k =
            k_min + (k_max - k_min) * static_cast<double>(i) /
                        static_cast<double>(steps - 1);
        try {
            DispersionResult row;
            switch (method) {
                case ScanMethod::fluid:
                    row = fluid_dispersion_roots(k, setup, eq);
                    break;
                case ScanMethod::approx:
                    row.k = k;
                    row.omega = fluid_dispersion_approx(k, setup, eq);
                    row.residual = std::abs(
                        fluid_dispersion_value(row.omega, k, setup, eq));
                    break;
                case ScanMethod::kinetic:
                    row = kinetic_dispersion_solve(
                        k, setup, f0, DiffusionOperator::Mode::exact, 0,
                        previous_omega);
                    break;
            }
            previous_omega = row.omega;
            table.push_back(row);
        } catch (const std::exception& err) {
            throw std::runtime_error("dispersion_scan: at k = " +
                                     std::to_string(k) + ": " + err.what());
        }
    }
    return table;
}

} // namespace qpm
