#pragma once

// Discrete gauge-invariant Wigner transform on a periodic 1D grid, with its
// gauge-dependent counterpart, velocity moments and the CSV import/export
// paths.
//
// The transform evaluates
//
//   f(x, v) = (m / 2 pi hbar) Integral ds
//             exp[(i s / hbar) (m v + q abar(x, s))] psi*(x + s/2) psi(x - s/2)
//
// where abar(x, s) is the line average of the gauge field over the split
// segment for the gauge-invariant variant and the local value a(x) for the
// gauge-dependent one.  On an N-point grid with spacing dx the split
// separations are s_m = 2 dx (m - N/2), so the point-split product lands on
// grid nodes without interpolation, and the matched velocity grid
// dv = pi hbar / (m L) turns the s integral into a plain FFT whose zeroth
// moment reproduces |psi|^2 exactly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpm/csv.hpp"
#include "qpm/fft.hpp"
#include "qpm/params.hpp"
#include "qpm/spectral.hpp"

namespace qpm {

// Wavefunction samples psi(x_j) on a periodic grid.
struct WavefunctionGrid {
    Grid1D grid;
    std::vector<cplx> psi;

    void validate() const {
        if (psi.size() != grid.n) {
            throw std::invalid_argument(
                "WavefunctionGrid: sample count does not match grid");
        }
    }
};

// The single surviving component of the vector potential in the 1D
// reduction, sampled on the same grid as the wavefunction.
struct GaugeField1D {
    Grid1D grid;
    std::vector<double> a;

    void validate() const {
        if (a.size() != grid.n) {
            throw std::invalid_argument(
                "GaugeField1D: sample count does not match grid");
        }
    }
};

// Gauge function Lambda(x); transforms a -> a + Lambda' and
// psi -> psi exp(i q Lambda / hbar).
struct GaugeTransform {
    Grid1D grid;
    std::vector<double> lambda;

    void validate() const {
        if (lambda.size() != grid.n) {
            throw std::invalid_argument(
                "GaugeTransform: sample count does not match grid");
        }
    }
};

// Phase-space samples f(x_j, v_n) on the natural velocity grid.  The
// velocity count matches the spatial count, which is what makes the
// discrete density marginal exact.
struct PhaseSpaceDistribution {
    Grid1D grid;
    double dv = 0.0;
    std::vector<double> v;
    std::vector<double> f; // row-major, f[j * grid.n + n]
    double max_imag = 0.0; // largest imaginary residue discarded on output

    double at(std::size_t j, std::size_t n) const {
        return f[j * grid.n + n];
    }
};

// Velocity spacing for which the separation-grid FFT is exact:
// dv = pi hbar / (m L).
inline double natural_velocity_step(const Grid1D& grid,
                                    const PhysicalSetup& setup) {
    return pi * setup.hbar / (setup.mass * grid.length);
}

// Line average (1/s) of the trigonometric interpolant of `a` over
// [x - s/2, x + s/2], at every grid node.  Each Fourier mode averages to
// itself times sinc(k s / 2), so the result is exact for the interpolant.
inline std::vector<double> tau_averaged_gauge(const Grid1D& grid,
                                              const std::vector<double>& a,
                                              double s) {
    if (a.size() != grid.n) {
        throw std::invalid_argument("tau_averaged_gauge: size mismatch");
    }
    std::vector<cplx> hat = to_complex(a);
    fft(hat);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double z = 0.5 * grid.wavenumber(j) * s;
        const double sinc = (z == 0.0) ? 1.0 : std::sin(z) / z;
        hat[j] *= sinc;
    }
    ifft(hat);
    return real_part(hat);
}

namespace detail {

// Shared transform core: `tau_average` selects the gauge-invariant line
// average; otherwise the local gauge value is used (gauge-dependent form).
inline PhaseSpaceDistribution build_wigner_impl(const WavefunctionGrid& state,
                                                const GaugeField1D& gauge,
                                                const PhysicalSetup& setup,
                                                bool tau_average) {
    state.validate();
    gauge.validate();
    setup.validate();
    if (!(setup.hbar > 0.0)) {
        throw std::invalid_argument("wigner: hbar must be > 0");
    }
    if (!(state.grid == gauge.grid)) {
        throw std::invalid_argument("wigner: state and gauge grids differ");
    }
    const Grid1D& grid = state.grid;
    const std::size_t n = grid.n;
    if (n < 8) {
        throw std::invalid_argument("wigner: grid too small (need n >= 8)");
    }
    const long half = static_cast<long>(n) / 2;
    const double dx = grid.dx();
    const double ds = 2.0 * dx;
    const double dv = natural_velocity_step(grid, setup);
    const double pref = setup.mass / (2.0 * pi * setup.hbar) * ds;

    // Line averages abar(x_j, s_m) for every split separation, exact for
    // the trigonometric interpolant of the gauge field (one forward
    // transform shared by all separations).
    std::vector<std::vector<double>> abar;
    if (tau_average) {
        std::vector<cplx> ahat = to_complex(gauge.a);
        fft(ahat);
        abar.reserve(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double s = ds * static_cast<double>(static_cast<long>(m) - half);
            std::vector<cplx> hat = ahat;
            for (std::size_t j = 0; j < n; ++j) {
                const double z = 0.5 * grid.wavenumber(j) * s;
                hat[j] *= (z == 0.0) ? 1.0 : std::sin(z) / z;
            }
            ifft(hat);
            abar.push_back(real_part(hat));
        }
    }

    PhaseSpaceDistribution dist;
    dist.grid = grid;
    dist.dv = dv;
    dist.v.resize(n);
    for (std::size_t nv = 0; nv < n; ++nv) {
        dist.v[nv] = static_cast<double>(static_cast<long>(nv) - half) * dv;
    }
    dist.f.assign(n * n, 0.0);

    const long wrap = static_cast<long>(n);
    std::vector<cplx> row(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
            const long shift = static_cast<long>(m) - half;
            const long lj = static_cast<long>(j);
            const std::size_t jp =
                static_cast<std::size_t>(((lj + shift) % wrap + wrap) % wrap);
            const std::size_t jm =
                static_cast<std::size_t>(((lj - shift) % wrap + wrap) % wrap);
            const cplx split = std::conj(state.psi[jp]) * state.psi[jm];
            const double s = ds * static_cast<double>(shift);
            const double abar_jm = tau_average ? abar[m][j] : gauge.a[j];
            const double phase = setup.q_charge * s * abar_jm / setup.hbar;
            const double parity = (m % 2 == 0) ? 1.0 : -1.0;
            row[m] =
                pref * parity * split * cplx(std::cos(phase), std::sin(phase));
        }
        // The centered separation and velocity grids reduce the transform
        // to a positive-kernel FFT with alternating-sign twists on both
        // ends.
        fft_positive(row);
        for (std::size_t nv = 0; nv < n; ++nv) {
            const double parity = (nv % 2 == 0) ? 1.0 : -1.0;
            const cplx value = parity * row[nv];
            dist.f[j * n + nv] = value.real();
            dist.max_imag = std::max(dist.max_imag, std::abs(value.imag()));
        }
    }
    return dist;
}

} // namespace detail

// Gauge-invariant Wigner function: the phase uses the line-averaged gauge
// field across the split segment, so the result depends only on
// gauge-invariant data.
inline PhaseSpaceDistribution build_giwf(const WavefunctionGrid& state,
                                         const GaugeField1D& gauge,
                                         const PhysicalSetup& setup) {
    return detail::build_wigner_impl(state, gauge, setup, true);
}

// Gauge-dependent (plain) Wigner function, sampled in the canonical
// velocity w = p / m.  Kinetic-velocity moments follow by centering at
// u + q a / m; shifting the center instead of the samples keeps the
// evaluation exact on the grid.  (Folding the local gauge phase into the
// kernel would be a fractional spectral shift, discontinuous where the
// split separation wraps around the period.)
inline PhaseSpaceDistribution build_gd_wigner(const WavefunctionGrid& state,
                                              const PhysicalSetup& setup) {
    const GaugeField1D none{state.grid, std::vector<double>(state.grid.n, 0.0)};
    return detail::build_wigner_impl(state, none, setup, false);
}

// psi -> psi exp(i q Lambda / hbar), a -> a + Lambda' (spectral derivative).
inline std::pair<WavefunctionGrid, GaugeField1D> apply_gauge(
    const WavefunctionGrid& state, const GaugeField1D& gauge,
    const GaugeTransform& transform, const PhysicalSetup& setup) {
    state.validate();
    gauge.validate();
    transform.validate();
    setup.validate();
    if (!(setup.hbar > 0.0)) {
        throw std::invalid_argument("apply_gauge: hbar must be > 0");
    }
    if (!(state.grid == gauge.grid) || !(state.grid == transform.grid)) {
        throw std::invalid_argument("apply_gauge: grids differ");
    }
    WavefunctionGrid new_state{state.grid, state.psi};
    for (std::size_t j = 0; j < state.grid.n; ++j) {
        const double phase =
            setup.q_charge * transform.lambda[j] / setup.hbar;
        new_state.psi[j] *= cplx(std::cos(phase), std::sin(phase));
    }
    GaugeField1D new_gauge{gauge.grid, gauge.a};
    const std::vector<double> dlambda =
        spectral_derivative(transform.grid, transform.lambda, 1);
    for (std::size_t j = 0; j < gauge.grid.n; ++j) {
        new_gauge.a[j] += dlambda[j];
    }
    return {std::move(new_state), std::move(new_gauge)};
}

// Velocity moment of given order about a per-node center profile:
// M_r(x_j) = sum_n (v_n - c_j)^r f(x_j, v_n) dv.
inline std::vector<double> velocity_moment(const PhaseSpaceDistribution& dist,
                                           int order,
                                           const std::vector<double>& center) {
    if (order < 0 || order > 4) {
        throw std::invalid_argument("velocity_moment: order must be 0..4");
    }
    const std::size_t n = dist.grid.n;
    if (center.size() != n) {
        throw std::invalid_argument("velocity_moment: center size mismatch");
    }
    std::vector<double> moment(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t nv = 0; nv < n; ++nv) {
            const double w = dist.v[nv] - center[j];
            double weight = dist.at(j, nv);
            for (int r = 0; r < order; ++r) {
                weight *= w;
            }
            sum += weight;
        }
        moment[j] = sum * dist.dv;
    }
    return moment;
}

inline std::vector<double> velocity_moment(const PhaseSpaceDistribution& dist,
                                           int order) {
    return velocity_moment(dist, order,
                           std::vector<double>(dist.grid.n, 0.0));
}

// u(x_j) = M_1 / M_0; requires the density to be bounded away from zero,
// which the delocalized test states guarantee.
inline std::vector<double> mean_velocity(const PhaseSpaceDistribution& dist) {
    const std::vector<double> density = velocity_moment(dist, 0);
    const std::vector<double> flux = velocity_moment(dist, 1);
    double peak = 0.0;
    for (const double value : density) {
        peak = std::max(peak, std::abs(value));
    }
    std::vector<double> u(density.size());
    for (std::size_t j = 0; j < density.size(); ++j) {
        if (!(density[j] > 1e-12 * peak)) {
            throw std::domain_error(
                "mean_velocity: density too close to zero for a stable "
                "velocity profile");
        }
        u[j] = flux[j] / density[j];
    }
    return u;
}

// Third-moment gap between the gauge-dependent and gauge-invariant
// transforms, against the closed-form prediction
// -(q hbar^2 / 4 m^2) n(x) a''(x).  Both moments are taken about the
// gauge-invariant velocity profile.
struct GaugeMomentDiscrepancy {
    std::vector<double> measured;
    std::vector<double> predicted;
    double max_abs_error = 0.0;
    double rel_error = 0.0;
};

inline GaugeMomentDiscrepancy gd_moment_discrepancy(
    const WavefunctionGrid& state, const GaugeField1D& gauge,
    const PhysicalSetup& setup) {
    const PhaseSpaceDistribution giwf = build_giwf(state, gauge, setup);
    const PhaseSpaceDistribution gd = build_gd_wigner(state, setup);

    const std::vector<double> density = velocity_moment(giwf, 0);
    const std::vector<double> u = mean_velocity(giwf);
    const std::vector<double> m3_giwf = velocity_moment(giwf, 3, u);
    // The gauge-dependent samples live in canonical velocity, so the
    // kinetic center u becomes u + q a / m there.
    std::vector<double> center_gd = u;
    for (std::size_t j = 0; j < center_gd.size(); ++j) {
        center_gd[j] += setup.q_charge * gauge.a[j] / setup.mass;
    }
    const std::vector<double> m3_gd = velocity_moment(gd, 3, center_gd);
    const std::vector<double> d2a = spectral_derivative(gauge.grid, gauge.a, 2);

    GaugeMomentDiscrepancy out;
    const std::size_t n = density.size();
    out.measured.resize(n);
    out.predicted.resize(n);
    const double coeff = -setup.q_charge * setup.hbar * setup.hbar /
                         (4.0 * setup.mass * setup.mass);
    double peak_predicted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.measured[j] = setup.mass * (m3_gd[j] - m3_giwf[j]);
        out.predicted[j] = coeff * density[j] * d2a[j];
        out.max_abs_error = std::max(
            out.max_abs_error, std::abs(out.measured[j] - out.predicted[j]));
        peak_predicted = std::max(peak_predicted, std::abs(out.predicted[j]));
    }
    out.rel_error = (peak_predicted > 0.0) ? out.max_abs_error / peak_predicted
                                           : out.max_abs_error;
    return out;
}

// --- CSV import/export ----------------------------------------------------

inline void export_phase_space(const PhaseSpaceDistribution& dist,
                               const std::string& path) {
    CsvWriter writer(path);
    writer.header({"x", "v", "f"});
    for (std::size_t j = 0; j < dist.grid.n; ++j) {
        for (std::size_t nv = 0; nv < dist.grid.n; ++nv) {
            writer.row_numbers(
                {dist.grid.node(j), dist.v[nv], dist.at(j, nv)});
        }
    }
}

inline void export_wavefunction(const WavefunctionGrid& state,
                                const std::string& path) {
    state.validate();
    CsvWriter writer(path);
    writer.header({"x", "re_psi", "im_psi"});
    for (std::size_t j = 0; j < state.grid.n; ++j) {
        writer.row_numbers(
            {state.grid.node(j), state.psi[j].real(), state.psi[j].imag()});
    }
}

inline void export_gauge_field(const GaugeField1D& gauge,
                               const std::string& path) {
    gauge.validate();
    CsvWriter writer(path);
    writer.header({"x", "a"});
    for (std::size_t j = 0; j < gauge.grid.n; ++j) {
        writer.row_numbers({gauge.grid.node(j), gauge.a[j]});
    }
}

namespace detail {

// Reconstructs the periodic grid from a uniformly spaced x column starting
// at zero; the row count must be a power of two.
inline Grid1D grid_from_x_column(const CsvTable& table, std::size_t col,
                                 const std::string& path) {
    const std::size_t rows = table.rows.size();
    if (rows < 8 || !is_power_of_two(rows)) {
        throw std::runtime_error("import '" + path +
                                 "': row count must be a power of two >= 8");
    }
    const double x0 = table.number(0, col);
    const double dx = table.number(1, col) - x0;
    if (!(dx > 0.0)) {
        throw std::runtime_error("import '" + path + "': x must increase");
    }
    const double length = dx * static_cast<double>(rows);
    if (std::abs(x0) > 1e-9 * length) {
        throw std::runtime_error("import '" + path + "': x must start at 0");
    }
    for (std::size_t j = 0; j < rows; ++j) {
        const double expected = static_cast<double>(j) * dx;
        if (std::abs(table.number(j, col) - expected) > 1e-9 * length) {
            throw std::runtime_error("import '" + path +
                                     "': x column is not uniformly spaced");
        }
    }
    return Grid1D{rows, length};
}

} // namespace detail

inline WavefunctionGrid import_wavefunction(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cx = table.column("x");
    const std::size_t cre = table.column("re_psi");
    const std::size_t cim = table.column("im_psi");
    WavefunctionGrid state;
    state.grid = detail::grid_from_x_column(table, cx, path);
    state.psi.resize(table.rows.size());
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
        state.psi[j] = cplx(table.number(j, cre), table.number(j, cim));
    }
    return state;
}

inline GaugeField1D import_gauge_field(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cx = table.column("x");
    const std::size_t ca = table.column("a");
    GaugeField1D gauge;
    gauge.grid = detail::grid_from_x_column(table, cx, path);
    gauge.a.resize(table.rows.size());
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
        gauge.a[j] = table.number(j, ca);
    }
    return gauge;
}

} // namespace qpm
