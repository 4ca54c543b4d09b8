#pragma once

// Physical constants, equilibrium parameters, and derived quantities in a
// single normalized unit system shared by all modules.
//
// Unit convention (ours, documented here rather than inherited from any
// source): all quantities are expressed in a normalized system with defaults
// m = q = eps0 = 1 and n0 = 1, which makes the plasma frequency
// omega_p = sqrt(n0 q^2 / (m eps0)) equal to one, and c = 10 * v0 where v0 is
// the parallel thermal width used by the dispersion solvers.  This avoids
// floating-point extremes of SI values and makes omega_p the natural
// frequency scale.

#include <cmath>
#include <stdexcept>
#include <string>

namespace qpm {

// Normalized plasma constants.  Immutable after construction; safe to share
// across concurrent workers without synchronization.
struct PhysicalSetup {
    double n0 = 1.0;       // equilibrium number density
    double q_charge = 1.0; // particle charge
    double mass = 1.0;     // particle mass
    double hbar = 1.0;     // reduced Planck constant
    double c_light = 10.0; // speed of light
    double eps0 = 1.0;     // vacuum permittivity

    void validate() const {
        auto require_positive = [](double value, const char* name) {
            if (!(value > 0.0)) {
                throw std::invalid_argument(std::string("PhysicalSetup: ") +
                                            name + " must be > 0");
            }
        };
        require_positive(n0, "n0");
        require_positive(mass, "mass");
        // hbar = 0 selects the classical limit; phase-space code that divides
        // by hbar (the Wigner transform) checks for it separately.
        if (!(hbar >= 0.0)) {
            throw std::invalid_argument("PhysicalSetup: hbar must be >= 0");
        }
        require_positive(c_light, "c_light");
        require_positive(eps0, "eps0");
        if (q_charge == 0.0 || !(std::abs(q_charge) < 1e300)) {
            throw std::invalid_argument(
                "PhysicalSetup: q_charge must be finite and nonzero");
        }
    }
};

// Gyrotropic equilibrium pressures relative to the z axis.
struct EquilibriumPressure {
    double p_perp = 1.0; // perpendicular pressure, >= 0
    double p_par = 1.0;  // parallel pressure, >= 0

    void validate() const {
        if (p_perp < 0.0 || p_par < 0.0) {
            throw std::invalid_argument(
                "EquilibriumPressure: pressures must be >= 0");
        }
    }
};

// omega_p = sqrt(n0 q^2 / (m eps0)).
inline double plasma_frequency(const PhysicalSetup& setup) {
    setup.validate();
    return std::sqrt(setup.n0 * setup.q_charge * setup.q_charge /
                     (setup.mass * setup.eps0));
}

// Dimensionless quantum parameter H = hbar k / (2 m v0), the half momentum
// kick hbar k / 2 measured against the thermal momentum m v0.
inline double quantum_parameter(const PhysicalSetup& setup, double k,
                                double v0) {
    setup.validate();
    if (!(v0 > 0.0)) {
        throw std::invalid_argument(
            "quantum_parameter: v0 = 0 is degenerate, need v0 > 0");
    }
    if (k < 0.0) {
        throw std::invalid_argument("quantum_parameter: need k >= 0");
    }
    return setup.hbar * k / (2.0 * setup.mass * v0);
}

// Inverse of quantum_parameter: the hbar that realizes a requested H at a
// reference wavenumber.  Specifying hbar directly or through (H, k_ref) must
// agree to machine precision; both paths go through this one expression.
inline double hbar_from_quantum_parameter(double H, double k_ref, double mass,
                                          double v0) {
    if (!(k_ref > 0.0) || !(v0 > 0.0) || !(mass > 0.0)) {
        throw std::invalid_argument(
            "hbar_from_quantum_parameter: need k_ref, mass, v0 > 0");
    }
    if (H < 0.0) {
        throw std::invalid_argument("hbar_from_quantum_parameter: need H >= 0");
    }
    return 2.0 * mass * v0 * H / k_ref;
}

// Thermal velocity v_T = sqrt((2 P_perp + P_par) / (m n0)).
inline double thermal_velocity(const EquilibriumPressure& eq,
                               const PhysicalSetup& setup) {
    eq.validate();
    setup.validate();
    return std::sqrt((2.0 * eq.p_perp + eq.p_par) / (setup.mass * setup.n0));
}

} // namespace qpm
