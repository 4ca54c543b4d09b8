// Command-line front end: parameter loading, verification suites, and
// CSV emission for the dispersion, diffusion, gauge, closure, and moment
// hierarchy modules.
//
// Exit codes: 0 all checks passed, 1 tolerance violation, 2 usage error
// (bad flags, missing or malformed config, invalid parameter combination).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"

#include "qpm/closure.hpp"
#include "qpm/config.hpp"
#include "qpm/csv.hpp"
#include "qpm/diffusion.hpp"
#include "qpm/dispersion.hpp"
#include "qpm/hierarchy.hpp"
#include "qpm/params.hpp"
#include "qpm/quadrature.hpp"
#include "qpm/random_fields.hpp"
#include "qpm/wigner.hpp"

namespace {

using qpm::cplx;

// Parameters shared by every subcommand: defaults, overridden by the config
// file, overridden again by explicit flags.
struct SharedOptions {
    std::string config_path;
    std::uint64_t seed = 1;
    std::optional<double> hbar;
    std::optional<double> mass;
    std::optional<double> q_charge;
    std::optional<double> n0;
    std::optional<double> c_light;
    std::optional<double> eps0;
    std::optional<double> p_perp;
    std::optional<double> p_par;
    std::optional<double> v0;
};

struct ResolvedParams {
    qpm::PhysicalSetup setup;
    qpm::EquilibriumPressure eq;
    qpm::EquilibriumDistribution1D f0;
};

ResolvedParams resolve_params(const SharedOptions& opt) {
    ResolvedParams out;
    double v0 = 1.0;
    if (!opt.config_path.empty()) {
        const qpm::Config cfg = qpm::Config::from_file(opt.config_path);
        cfg.require_known_keys({"hbar", "mass", "q_charge", "n0", "c_light",
                                "eps0", "p_perp", "p_par", "v0"});
        out.setup.hbar = cfg.get_double("hbar", out.setup.hbar);
        out.setup.mass = cfg.get_double("mass", out.setup.mass);
        out.setup.q_charge = cfg.get_double("q_charge", out.setup.q_charge);
        out.setup.n0 = cfg.get_double("n0", out.setup.n0);
        out.setup.c_light = cfg.get_double("c_light", out.setup.c_light);
        out.setup.eps0 = cfg.get_double("eps0", out.setup.eps0);
        out.eq.p_perp = cfg.get_double("p_perp", out.eq.p_perp);
        out.eq.p_par = cfg.get_double("p_par", out.eq.p_par);
        v0 = cfg.get_double("v0", v0);
    }
    auto apply = [](const std::optional<double>& flag, double& target) {
        if (flag.has_value()) {
            target = *flag;
        }
    };
    apply(opt.hbar, out.setup.hbar);
    apply(opt.mass, out.setup.mass);
    apply(opt.q_charge, out.setup.q_charge);
    apply(opt.n0, out.setup.n0);
    apply(opt.c_light, out.setup.c_light);
    apply(opt.eps0, out.setup.eps0);
    apply(opt.p_perp, out.eq.p_perp);
    apply(opt.p_par, out.eq.p_par);
    apply(opt.v0, v0);

    out.setup.validate();
    out.eq.validate();
    out.f0.v0 = v0;
    out.f0.p_perp = out.eq.p_perp;
    out.f0.n0 = out.setup.n0;
    out.f0.validate();
    return out;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string tensor_indices(int ci, int rank) {
    static const char* names = "xyz";
    std::string out;
    if (rank == 4) {
        for (int idx : qpm::SymTensor<4, cplx>::representative(ci)) {
            out.push_back(names[idx]);
        }
    } else if (rank == 3) {
        for (int idx : qpm::SymTensor3::representative(ci)) {
            out.push_back(names[idx]);
        }
    } else {
        for (int idx : qpm::SymTensor2::representative(ci)) {
            out.push_back(names[idx]);
        }
    }
    return out;
}

// --- scan-dispersion -------------------------------------------------------

struct ScanOptions {
    std::string method = "fluid";
    double k_min = 0.0;
    double k_max = 0.5;
    int steps = 50;
    std::string out_path = "qpm_scan.csv";
    double tol = 1e-10;
};

int run_scan(const SharedOptions& shared, const ScanOptions& opt) {
    const ResolvedParams params = resolve_params(shared);
    qpm::ScanMethod method = qpm::ScanMethod::fluid;
    if (opt.method == "approx") {
        method = qpm::ScanMethod::approx;
    } else if (opt.method == "kinetic") {
        method = qpm::ScanMethod::kinetic;
    }

    std::vector<qpm::DispersionResult> table;
    if (opt.k_max == opt.k_min) {
        // Degenerate range: a single k instead of a scan.
        const double k = opt.k_min;
        qpm::DispersionResult row;
        switch (method) {
            case qpm::ScanMethod::fluid:
                row = qpm::fluid_dispersion_roots(k, params.setup, params.eq);
                break;
            case qpm::ScanMethod::approx:
                row.k = k;
                row.omega =
                    qpm::fluid_dispersion_approx(k, params.setup, params.eq);
                row.residual = std::abs(qpm::fluid_dispersion_value(
                    row.omega, k, params.setup, params.eq));
                break;
            case qpm::ScanMethod::kinetic:
                row = qpm::kinetic_dispersion_solve(k, params.setup, params.f0);
                break;
        }
        table.push_back(row);
    } else {
        table = qpm::dispersion_scan(opt.k_min, opt.k_max, opt.steps, method,
                                     params.setup, params.eq, params.f0);
    }

    qpm::CsvWriter writer(opt.out_path);
    writer.header({"k", "omega", "residual", "branch", "method"});
    double max_residual = 0.0;
    for (const qpm::DispersionResult& row : table) {
        writer.row({qpm::format_number(row.k), qpm::format_number(row.omega),
                    qpm::format_number(row.residual), row.branch, opt.method});
        max_residual = std::max(max_residual, row.residual);
    }

    // The long-wavelength formula is an approximation; its residual against
    // the exact relation is informative, not a failure.
    const bool pass =
        method == qpm::ScanMethod::approx || max_residual <= opt.tol;
    std::cout << "scan-dispersion: method=" << opt.method
              << " rows=" << table.size()
              << " max_residual=" << qpm::format_number(max_residual)
              << " tol=" << qpm::format_number(opt.tol) << " -> "
              << verdict(pass) << "\n";
    std::cout << "wrote " << opt.out_path << "\n";
    return pass ? 0 : 1;
}

// --- diffusion-profile -----------------------------------------------------

struct DiffusionProfileOptions {
    std::vector<double> h_values;
    double v_max = 4.0;
    int points = 161;
    std::string out_path = "qpm_profile.csv";
    double tol = 1e-9;
};

int run_diffusion_profile(const SharedOptions& shared,
                          const DiffusionProfileOptions& opt) {
    const ResolvedParams params = resolve_params(shared);
    const qpm::EquilibriumDistribution1D& f0 = params.f0;
    std::vector<double> h_values = opt.h_values;
    if (h_values.empty()) {
        h_values = {0.0, 1.0, 2.0};
    }
    if (opt.points < 2) {
        throw std::invalid_argument("diffusion-profile: need --points >= 2");
    }

    qpm::CsvWriter writer(opt.out_path);
    writer.header({"v_z", "f_parallel", "H"});
    bool pass = true;
    for (const double h : h_values) {
        if (h < 0.0) {
            throw std::invalid_argument("diffusion-profile: H must be >= 0");
        }
        qpm::DiffusionOperator op;
        op.hbar = params.setup.hbar;
        op.mass = params.setup.mass;
        op.mode = qpm::DiffusionOperator::Mode::exact;
        if (h > 0.0) {
            if (!(params.setup.hbar > 0.0)) {
                throw std::invalid_argument(
                    "diffusion-profile: H > 0 requires hbar > 0");
            }
            // H = hbar k / (2 m v0)  ->  k = 2 H m v0 / hbar.
            op.k = 2.0 * h * params.setup.mass * f0.v0 / params.setup.hbar;
        }
        auto profile = [&](double v) {
            return h == 0.0
                       ? f0.f_parallel_peak(v)
                       : qpm::apply_L(
                             op, [&f0](double w) { return f0.f_parallel_peak(w); },
                             v);
        };
        for (int i = 0; i < opt.points; ++i) {
            const double v =
                -opt.v_max + 2.0 * opt.v_max * static_cast<double>(i) /
                                 static_cast<double>(opt.points - 1);
            writer.row_numbers({v, profile(v), h});
        }
        // Interval averaging preserves the particle count: compare the
        // integral of the diffused profile with the Gaussian's closed form.
        const double cutoff = 8.0 * f0.v0 + op.half_width();
        const double mass_integral = qpm::adaptive_gauss(
            profile, -cutoff, cutoff, 1e-11);
        const double expected =
            2.50662827463100050242 * f0.v0; // sqrt(2 pi) v0
        const double mass_error =
            std::abs(mass_integral - expected) / expected;
        const bool mass_ok = mass_error <= opt.tol;
        pass = pass && mass_ok;
        std::cout << "diffusion-profile: H=" << h << " f(0)="
                  << qpm::format_number(profile(0.0))
                  << " mass_error=" << qpm::format_number(mass_error)
                  << " tol=" << qpm::format_number(opt.tol) << " -> "
                  << verdict(mass_ok) << "\n";
    }
    std::cout << "wrote " << opt.out_path << "\n";
    return pass ? 0 : 1;
}

// --- gauge-check -----------------------------------------------------------

struct GaugeCheckOptions {
    int trials = 5;
    int nodes = 128;
    std::string out_path;
    double tol = 1e-8;      // gauge-invariance tolerance (relative)
    double disc_tol = 1e-6; // third-moment discrepancy tolerance (relative)
};

int run_gauge_check(const SharedOptions& shared, const GaugeCheckOptions& opt) {
    const ResolvedParams params = resolve_params(shared);
    const qpm::Grid1D grid(static_cast<std::size_t>(opt.nodes), 10.0);
    std::mt19937_64 rng(shared.seed);

    double worst_pointwise = 0.0;
    double worst_moment = 0.0;
    double worst_discrepancy = 0.0;
    qpm::GaugeMomentDiscrepancy last_gap;
    std::vector<double> last_density;

    for (int trial = 0; trial < opt.trials; ++trial) {
        const qpm::WavefunctionGrid state{
            grid, qpm::random_delocalized_state(grid, rng)};
        const qpm::GaugeField1D gauge{
            grid, qpm::smooth_periodic_field(grid, rng, 0.25)};
        const qpm::GaugeTransform transform{
            grid, qpm::smooth_periodic_field(grid, rng, 0.4)};

        const qpm::PhaseSpaceDistribution before =
            qpm::build_giwf(state, gauge, params.setup);
        const auto transformed =
            qpm::apply_gauge(state, gauge, transform, params.setup);
        const qpm::PhaseSpaceDistribution after = qpm::build_giwf(
            transformed.first, transformed.second, params.setup);

        double f_scale = 0.0;
        for (const double value : before.f) {
            f_scale = std::max(f_scale, std::abs(value));
        }
        for (std::size_t i = 0; i < before.f.size(); ++i) {
            worst_pointwise = std::max(
                worst_pointwise, std::abs(before.f[i] - after.f[i]) / f_scale);
        }
        for (int order = 0; order <= 3; ++order) {
            const std::vector<double> m_before =
                qpm::velocity_moment(before, order);
            const std::vector<double> m_after =
                qpm::velocity_moment(after, order);
            double scale = 0.0;
            for (const double value : m_before) {
                scale = std::max(scale, std::abs(value));
            }
            for (std::size_t j = 0; j < m_before.size(); ++j) {
                worst_moment =
                    std::max(worst_moment,
                             std::abs(m_before[j] - m_after[j]) / scale);
            }
        }

        const qpm::GaugeMomentDiscrepancy gap =
            qpm::gd_moment_discrepancy(state, gauge, params.setup);
        worst_discrepancy = std::max(worst_discrepancy, gap.rel_error);
        if (trial == opt.trials - 1) {
            last_gap = gap;
            last_density = qpm::velocity_moment(before, 0);
        }
    }

    const bool invariance_ok =
        worst_pointwise <= opt.tol && worst_moment <= opt.tol;
    const bool discrepancy_ok = worst_discrepancy <= opt.disc_tol;
    std::cout << "gauge-check: trials=" << opt.trials
              << " max_pointwise_dev=" << qpm::format_number(worst_pointwise)
              << " max_moment_dev=" << qpm::format_number(worst_moment)
              << " tol=" << qpm::format_number(opt.tol) << " -> "
              << verdict(invariance_ok) << "\n";
    std::cout << "gauge-check: third-moment gap vs closed form rel_error="
              << qpm::format_number(worst_discrepancy)
              << " tol=" << qpm::format_number(opt.disc_tol) << " -> "
              << verdict(discrepancy_ok) << "\n";

    if (!opt.out_path.empty()) {
        qpm::CsvWriter writer(opt.out_path);
        writer.header({"x", "field", "component", "value"});
        for (std::size_t j = 0; j < grid.n; ++j) {
            writer.row({qpm::format_number(grid.node(j)), "density", "giwf",
                        qpm::format_number(last_density[j])});
        }
        for (std::size_t j = 0; j < grid.n; ++j) {
            writer.row({qpm::format_number(grid.node(j)), "m3_gap", "measured",
                        qpm::format_number(last_gap.measured[j])});
        }
        for (std::size_t j = 0; j < grid.n; ++j) {
            writer.row({qpm::format_number(grid.node(j)), "m3_gap", "predicted",
                        qpm::format_number(last_gap.predicted[j])});
        }
        std::cout << "wrote " << opt.out_path << "\n";
    }
    return (invariance_ok && discrepancy_ok) ? 0 : 1;
}

// --- closure-verify --------------------------------------------------------

struct ClosureVerifyOptions {
    int trials = 50;
    std::string out_path;
    double tol = 1e-12;
};

int run_closure_verify(const SharedOptions& shared,
                       const ClosureVerifyOptions& opt) {
    const ResolvedParams params = resolve_params(shared);
    std::mt19937_64 rng(shared.seed);
    double max_residual = 0.0;
    bool exported = false;
    for (int trial = 0; trial < opt.trials; ++trial) {
        const qpm::ClosureContext ctx =
            qpm::random_closure_context(rng, params.setup);
        const qpm::ClosureResult result = qpm::r_closure_from_recipe(ctx);
        max_residual = std::max(max_residual, result.residual);
        if (!exported && !opt.out_path.empty()) {
            qpm::CsvWriter writer(opt.out_path);
            writer.header({"indices", "re", "im"});
            for (int ci = 0; ci < qpm::SymTensor<4, cplx>::ncomp; ++ci) {
                const cplx value = result.r.comp[static_cast<std::size_t>(ci)];
                writer.row({tensor_indices(ci, 4),
                            qpm::format_number(value.real()),
                            qpm::format_number(value.imag())});
            }
            exported = true;
        }
    }
    const bool pass = max_residual <= opt.tol;
    std::cout << "closure-verify: trials=" << opt.trials
              << " seed=" << shared.seed
              << " max_residual=" << qpm::format_number(max_residual)
              << " tol=" << qpm::format_number(opt.tol) << " -> "
              << verdict(pass) << "\n";
    if (exported) {
        std::cout << "wrote " << opt.out_path << "\n";
    }
    return pass ? 0 : 1;
}

// --- eigen-check -----------------------------------------------------------

struct EigenCheckOptions {
    double k_min = 0.0;
    double k_max = 0.5;
    int steps = 11;
    std::string out_path;
    double tol = 1e-10;
};

int run_eigen_check(const SharedOptions& shared, const EigenCheckOptions& opt) {
    const ResolvedParams params = resolve_params(shared);
    if (opt.steps < 2 || opt.k_min < 0.0 || opt.k_max < opt.k_min) {
        throw std::invalid_argument(
            "eigen-check: need 0 <= kmin <= kmax and steps >= 2");
    }
    qpm::PhysicalSetup classical = params.setup;
    classical.hbar = 0.0;

    struct Row {
        double k;
        double omega;
        double residual;
        std::string method;
    };
    std::vector<Row> rows;
    double worst = 0.0;
    for (int i = 0; i < opt.steps; ++i) {
        const double k = opt.k_min + (opt.k_max - opt.k_min) *
                                         static_cast<double>(i) /
                                         static_cast<double>(opt.steps - 1);
        // Closure on: eigenvalues must land on the full relation.
        const double eig_on =
            qpm::solve_transverse_em(k, params.setup, params.eq, true).omega;
        const double fluid_on =
            qpm::fluid_dispersion_roots(k, params.setup, params.eq).omega;
        worst = std::max(worst, std::abs(eig_on - fluid_on) / fluid_on);
        rows.push_back({k, eig_on,
                        std::abs(qpm::fluid_dispersion_value(
                            eig_on, k, params.setup, params.eq)),
                        "eigen"});
        // Closure off: the quantum term must disappear from the branch.
        const double eig_off =
            qpm::solve_transverse_em(k, params.setup, params.eq, false).omega;
        const double fluid_off =
            qpm::fluid_dispersion_roots(k, classical, params.eq).omega;
        worst = std::max(worst, std::abs(eig_off - fluid_off) / fluid_off);
        rows.push_back({k, eig_off,
                        std::abs(qpm::fluid_dispersion_value(
                            eig_off, k, classical, params.eq)),
                        "eigen_noclosure"});
    }

    const bool pass = worst <= opt.tol;
    std::cout << "eigen-check: steps=" << opt.steps << " k=["
              << qpm::format_number(opt.k_min) << ", "
              << qpm::format_number(opt.k_max) << "]"
              << " max_rel_omega_diff=" << qpm::format_number(worst)
              << " tol=" << qpm::format_number(opt.tol) << " -> "
              << verdict(pass) << "\n";
    if (!opt.out_path.empty()) {
        qpm::CsvWriter writer(opt.out_path);
        writer.header({"k", "omega", "residual", "branch", "method"});
        for (const Row& row : rows) {
            writer.row({qpm::format_number(row.k),
                        qpm::format_number(row.omega),
                        qpm::format_number(row.residual), "em", row.method});
        }
        std::cout << "wrote " << opt.out_path << "\n";
    }
    return pass ? 0 : 1;
}

// --- rhs-check -------------------------------------------------------------

struct RhsCheckOptions {
    int directions = 8;
    int nodes = 128;
    int mode = 3;
    double eps = 1e-3;
    std::string out_path;
    double tol = 0.05;
};

int run_rhs_check(const SharedOptions& shared, const RhsCheckOptions& opt) {
    const ResolvedParams params = resolve_params(shared);
    const qpm::Grid1D grid(static_cast<std::size_t>(opt.nodes), 10.0);
    const double k =
        2.0 * qpm::pi * static_cast<double>(opt.mode) / grid.length;
    const qpm::TransverseLinearSystem sys =
        qpm::build_transverse_system(k, params.setup, params.eq, false);

    std::mt19937_64 rng(shared.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::array<double, 3> eps_list = {opt.eps, 0.5 * opt.eps,
                                            0.25 * opt.eps};
    std::array<double, 3> aggregate{0.0, 0.0, 0.0};
    bool monotone = true;

    for (int dir = 0; dir < opt.directions; ++dir) {
        std::array<cplx, 5> direction;
        for (auto& value : direction) {
            value = cplx(normal(rng), normal(rng));
        }
        Eigen::Matrix<cplx, 5, 1> xv;
        for (int r = 0; r < 5; ++r) {
            xv(r) = direction[static_cast<std::size_t>(r)];
        }
        const Eigen::Matrix<cplx, 5, 1> mx = sys.m * xv;
        // P_xz also drives Q_xxx and Q_xyy linearly (P dP group); those
        // components do not feed back into the five tracked variables.
        const cplx ik(0.0, k);
        const cplx amp_xxx = 3.0 * params.eq.p_perp * ik * direction[1] /
                             (params.setup.mass * params.setup.n0);
        const cplx amp_xyy = params.eq.p_perp * ik * direction[1] /
                             (params.setup.mass * params.setup.n0);

        std::array<double, 3> errs{};
        for (std::size_t which = 0; which < eps_list.size(); ++which) {
            const double eps = eps_list[which];
            const auto [state, fields] = qpm::make_transverse_perturbation(
                grid, params.setup, params.eq, direction, eps, k);
            const qpm::FluidRate1D rate =
                qpm::eval_hierarchy_rhs(state, fields, params.setup);

            double err = 0.0;
            for (std::size_t j = 0; j < grid.n; ++j) {
                const double z = grid.node(j);
                const cplx wave(std::cos(k * z), std::sin(k * z));
                auto re = [&wave](const cplx& a) { return (a * wave).real(); };
                err = std::max(err, std::abs(rate.n[j] / eps));
                err = std::max(err, std::abs(rate.u[0][j] / eps - re(mx(0))));
                err = std::max(err, std::abs(rate.u[1][j] / eps));
                err = std::max(err, std::abs(rate.u[2][j] / eps));
                for (int ci = 0; ci < qpm::SymTensor2::ncomp; ++ci) {
                    const double got =
                        rate.p[j].comp[static_cast<std::size_t>(ci)] / eps;
                    const double want =
                        (ci == qpm::SymTensor2::index_of({0, 2})) ? re(mx(1))
                                                                  : 0.0;
                    err = std::max(err, std::abs(got - want));
                }
                for (int ci = 0; ci < qpm::SymTensor3::ncomp; ++ci) {
                    const double got =
                        rate.q_flux[j].comp[static_cast<std::size_t>(ci)] /
                        eps;
                    double want = 0.0;
                    if (ci == qpm::SymTensor3::index_of({0, 2, 2})) {
                        want = re(mx(2));
                    } else if (ci == qpm::SymTensor3::index_of({0, 0, 0})) {
                        want = re(amp_xxx);
                    } else if (ci == qpm::SymTensor3::index_of({0, 1, 1})) {
                        want = re(amp_xyy);
                    }
                    err = std::max(err, std::abs(got - want));
                }
            }
            errs[which] = err;
            aggregate[which] = std::max(aggregate[which], err);
        }
        monotone = monotone && errs[1] < errs[0] + 1e-12 &&
                   errs[2] < errs[1] + 1e-12;
    }

    const double ratio10 = aggregate[0] / aggregate[1];
    const double ratio21 = aggregate[1] / aggregate[2];
    const bool ratios_ok = ratio10 > 1.4 && ratio10 < 2.8 && ratio21 > 1.4 &&
                           ratio21 < 2.8;
    const bool small_ok = aggregate[2] <= opt.tol;
    const bool pass = monotone && ratios_ok && small_ok;
    std::cout << "rhs-check: directions=" << opt.directions << " eps=["
              << qpm::format_number(eps_list[0]) << ", "
              << qpm::format_number(eps_list[1]) << ", "
              << qpm::format_number(eps_list[2]) << "]\n";
    std::cout << "rhs-check: errors=[" << qpm::format_number(aggregate[0])
              << ", " << qpm::format_number(aggregate[1]) << ", "
              << qpm::format_number(aggregate[2]) << "] ratios=["
              << qpm::format_number(ratio10) << ", "
              << qpm::format_number(ratio21) << "]\n";
    std::cout << "rhs-check: monotone=" << (monotone ? "yes" : "no")
              << " first_order=" << (ratios_ok ? "yes" : "no")
              << " final_error_tol=" << qpm::format_number(opt.tol) << " -> "
              << verdict(pass) << "\n";

    if (!opt.out_path.empty()) {
        // Rate profile of a canonical perturbation at the smallest step.
        std::mt19937_64 out_rng(shared.seed);
        std::array<cplx, 5> direction;
        for (auto& value : direction) {
            value = cplx(normal(out_rng), normal(out_rng));
        }
        const double eps = eps_list[2];
        const auto [state, fields] = qpm::make_transverse_perturbation(
            grid, params.setup, params.eq, direction, eps, k);
        const qpm::FluidRate1D rate =
            qpm::eval_hierarchy_rhs(state, fields, params.setup);
        qpm::CsvWriter writer(opt.out_path);
        writer.header({"z", "field", "component", "value"});
        static const char* axis = "xyz";
        for (std::size_t j = 0; j < grid.n; ++j) {
            const std::string z = qpm::format_number(grid.node(j));
            writer.row({z, "n", "", qpm::format_number(rate.n[j] / eps)});
            for (int c = 0; c < 3; ++c) {
                writer.row({z, "u", std::string(1, axis[c]),
                            qpm::format_number(
                                rate.u[static_cast<std::size_t>(c)][j] / eps)});
            }
            for (int ci = 0; ci < qpm::SymTensor2::ncomp; ++ci) {
                writer.row({z, "p", tensor_indices(ci, 2),
                            qpm::format_number(
                                rate.p[j].comp[static_cast<std::size_t>(ci)] /
                                eps)});
            }
            for (int ci = 0; ci < qpm::SymTensor3::ncomp; ++ci) {
                writer.row(
                    {z, "q", tensor_indices(ci, 3),
                     qpm::format_number(
                         rate.q_flux[j].comp[static_cast<std::size_t>(ci)] /
                         eps)});
            }
        }
        std::cout << "wrote " << opt.out_path << "\n";
    }
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-plasma moment laboratory: dispersion scans, "
                 "diffusion profiles, and verification suites"};
    app.require_subcommand(1);

    SharedOptions shared;
    app.add_option("--config", shared.config_path,
                   "Parameter file (name = value lines, # comments)");
    app.add_option("--seed", shared.seed, "Random seed for seeded sweeps");
    app.add_option("--hbar", shared.hbar, "Override: reduced Planck constant");
    app.add_option("--mass", shared.mass, "Override: particle mass");
    app.add_option("--q-charge", shared.q_charge, "Override: particle charge");
    app.add_option("--n0", shared.n0, "Override: equilibrium density");
    app.add_option("--c-light", shared.c_light, "Override: speed of light");
    app.add_option("--eps0", shared.eps0, "Override: vacuum permittivity");
    app.add_option("--p-perp", shared.p_perp,
                   "Override: perpendicular pressure");
    app.add_option("--p-par", shared.p_par, "Override: parallel pressure");
    app.add_option("--v0", shared.v0, "Override: parallel thermal width");

    ScanOptions scan_opt;
    CLI::App* scan = app.add_subcommand(
        "scan-dispersion", "Scan the electromagnetic branch over k");
    scan->fallthrough();
    scan->add_option("--method", scan_opt.method, "Solver: fluid|approx|kinetic")
        ->check(CLI::IsMember({"fluid", "approx", "kinetic"}));
    scan->add_option("--kmin", scan_opt.k_min, "Scan start");
    scan->add_option("--kmax", scan_opt.k_max, "Scan end (== kmin: single k)");
    scan->add_option("--steps", scan_opt.steps, "Scan points");
    scan->add_option("--out", scan_opt.out_path, "Output CSV path");
    scan->add_option("--tol", scan_opt.tol, "Max root residual");

    DiffusionProfileOptions prof_opt;
    CLI::App* prof = app.add_subcommand(
        "diffusion-profile",
        "Diffused parallel profile L f for quantum parameters H");
    prof->fallthrough();
    prof->add_option("--H", prof_opt.h_values,
                     "Quantum parameters H (default 0 1 2)");
    prof->add_option("--vmax", prof_opt.v_max, "Velocity half-range");
    prof->add_option("--points", prof_opt.points, "Velocity samples");
    prof->add_option("--out", prof_opt.out_path, "Output CSV path");
    prof->add_option("--tol", prof_opt.tol,
                     "Max relative particle-count drift");

    GaugeCheckOptions gauge_opt;
    CLI::App* gauge = app.add_subcommand(
        "gauge-check", "Gauge invariance of the phase-space transform");
    gauge->fallthrough();
    gauge->add_option("--trials", gauge_opt.trials, "Random trials");
    gauge->add_option("--nodes", gauge_opt.nodes,
                      "Grid nodes (power of two)");
    gauge->add_option("--out", gauge_opt.out_path, "Optional CSV path");
    gauge->add_option("--tol", gauge_opt.tol,
                      "Max relative gauge deviation");
    gauge->add_option("--disc-tol", gauge_opt.disc_tol,
                      "Max third-moment-gap relative error");

    ClosureVerifyOptions closure_opt;
    CLI::App* closure = app.add_subcommand(
        "closure-verify", "Closure recipe vs closed form on random contexts");
    closure->fallthrough();
    closure->add_option("--trials", closure_opt.trials, "Random contexts");
    closure->add_option("--out", closure_opt.out_path,
                        "Optional CSV of the first fourth-moment tensor");
    closure->add_option("--tol", closure_opt.tol, "Max recipe residual");

    EigenCheckOptions eigen_opt;
    CLI::App* eigen = app.add_subcommand(
        "eigen-check", "Transverse eigenvalues vs the dispersion relation");
    eigen->fallthrough();
    eigen->add_option("--kmin", eigen_opt.k_min, "Scan start");
    eigen->add_option("--kmax", eigen_opt.k_max, "Scan end");
    eigen->add_option("--steps", eigen_opt.steps, "Scan points");
    eigen->add_option("--out", eigen_opt.out_path, "Optional CSV path");
    eigen->add_option("--tol", eigen_opt.tol, "Max relative frequency gap");

    RhsCheckOptions rhs_opt;
    CLI::App* rhs = app.add_subcommand(
        "rhs-check", "Finite-difference linearization of the moment RHS");
    rhs->fallthrough();
    rhs->add_option("--directions", rhs_opt.directions, "Random directions");
    rhs->add_option("--nodes", rhs_opt.nodes, "Grid nodes (power of two)");
    rhs->add_option("--mode", rhs_opt.mode, "Harmonic of the perturbation");
    rhs->add_option("--eps", rhs_opt.eps, "Largest perturbation amplitude");
    rhs->add_option("--out", rhs_opt.out_path, "Optional CSV path");
    rhs->add_option("--tol", rhs_opt.tol,
                    "Max normalized error at the smallest step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (scan->parsed()) {
            return run_scan(shared, scan_opt);
        }
        if (prof->parsed()) {
            return run_diffusion_profile(shared, prof_opt);
        }
        if (gauge->parsed()) {
            return run_gauge_check(shared, gauge_opt);
        }
        if (closure->parsed()) {
            return run_closure_verify(shared, closure_opt);
        }
        if (eigen->parsed()) {
            return run_eigen_check(shared, eigen_opt);
        }
        if (rhs->parsed()) {
            return run_rhs_check(shared, rhs_opt);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
}
