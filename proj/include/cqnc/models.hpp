#pragma once

#include "cqnc/linsys.hpp"

#include <complex>
#include <optional>

namespace cqnc {

/// Optomechanical force sensor: one-sided cavity at linewidth kappa_om
/// coupled to a mechanical oscillator (omega_m, gamma_m) at rate g.
/// All rates in rad/s.
struct OmsParams {
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double kappa_om = 0.0;
    double delta_om = 0.0;                 // cavity detuning; analytic spectra require 0
    double g = 0.0;
    double eta_esc = 1.0;                  // escape efficiency kappa_in / kappa_om
    std::optional<double> temperature;     // K
    std::optional<double> mass;            // kg, for unit conversion only

    double q_m() const { return omega_m / gamma_m; }
    double kappa_in() const { return eta_esc * kappa_om; }
    double kappa_bath() const { return (1.0 - eta_esc) * kappa_om; }
    /// Peak measurement strength 4 g^2 / kappa_om.
    double strength_peak() const { return 4.0 * g * g / kappa_om; }

    void validate() const;
};

/// All-optical effective negative mass oscillator: a driven meter cavity
/// (kappa_c) and a detuned ancilla cavity (kappa_a, delta_a) coupled by
/// beam-splitter and down-conversion interactions.
struct NmoParams {
    double kappa_c = 0.0;
    double kappa_a = 0.0;
    double delta_c = 0.0;
    double delta_a = 0.0;                  // signed; negative mass needs delta_a < 0
    double g_bs = 0.0;
    double g_dc = 0.0;
    double eta_esc = 1.0;                  // meter cavity escape efficiency

    double g_a() const { return g_bs + g_dc; }
    double g_r() const;                    // (g_bs - g_dc) / (g_bs + g_dc), 0 if uncoupled
    double kappa_in() const { return eta_esc * kappa_c; }
    double kappa_bath() const { return (1.0 - eta_esc) * kappa_c; }
    double strength_peak() const { return 4.0 * g_a() * g_a() / kappa_c; }

    void validate() const;
};

/// Relative deviations from matched measurement strengths:
/// epsilon = kappa_c / kappa_om, delta = g_a^2 / g^2.
struct MismatchParams {
    double epsilon = 1.0;
    double delta = 1.0;

    void validate() const;
};

/// State order (x_om, p_om, x_m, p_m); aux channels: intracavity optical
/// bath (2 vacuum columns) and the external force (1 column into p_m).
LinearQuantumSystem build_oms(const OmsParams &p);

/// State order (x_c, p_c, x_a, p_a); aux channels: meter intracavity bath
/// (2 vacuum columns) and the ancilla input (2 vacuum columns).
LinearQuantumSystem build_nmo(const NmoParams &p);

// Susceptibilities (rad/s)^-1.
std::complex<double> chi_om(double omega, const OmsParams &p);
std::complex<double> chi_m(double omega, const OmsParams &p);
std::complex<double> chi_c(double omega, const NmoParams &p);
std::complex<double> chi_a(double omega, const NmoParams &p);

/// Lorentzian-filtered measurement strengths g^2 kappa |chi_cavity|^2.
double meas_strength_om(double omega, const OmsParams &p);
double meas_strength_a(double omega, const NmoParams &p);

/// Residuals of the backaction-cancellation conditions, each flagged
/// against `tol`. The measurement-strength residual is a sup-norm of
/// |G_om - G_a| / G_om over a log-spaced reference grid.
struct MatchingReport {
    struct Entry {
        double residual = 0.0;
        bool ok = false;
    };
    Entry coupling_balance;     // |g_bs - g_dc| / g_a
    Entry meas_strength;        // sup_w |G_om - G_a| / G_om
    Entry ancilla_detuning;     // |delta_a + omega_m| / omega_m
    Entry ancilla_linewidth;    // |kappa_a - gamma_m| / omega_m
    Entry sideband_resolution;  // kappa_a / omega_m
    Entry quality_factor;       // 1 / Q_m
    double tol = 0.0;

    bool all_ok() const;
};

MatchingReport check_matching(const OmsParams &oms, const NmoParams &nmo, double tol);

} // namespace cqnc
