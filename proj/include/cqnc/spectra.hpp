#pragma once

#include "cqnc/models.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cqnc {

enum class Normalization { dimensionless, per_qm, physical };

/// Added-force-noise values over a frequency grid.
struct NoiseSpectrum {
    std::vector<double> grid;      // rad/s, strictly increasing
    std::vector<double> values;    // >= 0, units per `normalization`
    Normalization normalization = Normalization::dimensionless;
    std::string label;
};

/// Efficiencies of the signal path outside the cavities. Escape
/// efficiencies live in OmsParams / NmoParams.
struct LossBudget {
    double eta_prop = 1.0;   // between the two subsystems
    double eta_det = 1.0;    // after the second subsystem

    void validate() const;
};

enum class CascadeOrder { nmo_oms, oms_nmo };
enum class LossKind { propagation, intracavity };

// --- Single-sensor limits -------------------------------------------------

/// Standard quantum limit 1 / (gamma_m |chi_m|) and the strength reaching it.
double s_sql(double omega, const OmsParams &oms);
double g_sql(double omega, const OmsParams &oms);

/// Added noise of the bare sensor at measurement strength g_om:
/// thermal floor (optional) + phase shot noise + backaction noise.
double s_single(double omega, const OmsParams &oms, double g_om, bool include_thermal);

// --- Cascaded spectra -----------------------------------------------------

/// Added noise of the lossless resonantly driven cascade at strength g_om,
/// with the negative-mass strength taken from `nmo`. Requires
/// delta_om = delta_c = 0 and balanced couplings (g_bs = g_dc).
/// Exact for arbitrary kappa_a, delta_a, kappa_c, g_a.
double s_cascaded(double omega, const OmsParams &oms, const NmoParams &nmo, double g_om);

/// Lower bound of the ideally matched cascade and its ratio to the SQL.
double s_cqnc(double omega, const OmsParams &oms);
double cqnc_to_sql_ratio(double omega, const OmsParams &oms);

// --- Mismatched matching conditions ---------------------------------------

/// Strength-optimized added noise when only the ancilla linewidth is
/// mismatched (matched strengths, delta_a = -omega_m, kappa_a free).
double s_kappa_mismatch(double omega, const OmsParams &oms, const NmoParams &nmo);

/// The ancilla-noise term of the optimum above; dominates off-resonance.
double ancilla_noise_floor(double omega, const OmsParams &oms, const NmoParams &nmo);

/// Off-resonant asymptote kappa_a/(2 omega_m) * S_SQL, valid for
/// kappa_a < omega_m; absent otherwise.
std::optional<double> kappa_mismatch_off_resonant_floor(double omega, const OmsParams &oms,
                                                        double kappa_a);

/// Added noise at strength g_om for mismatched measurement strengths
/// (kappa_c = epsilon kappa_om, g_a = sqrt(delta) g) with the ancilla
/// otherwise matched (kappa_a = gamma_m, delta_a = -omega_m).
double s_rate_mismatch(double omega, const OmsParams &oms, const MismatchParams &mm,
                       double g_om);

/// |1 - delta eps |chi_c|^2/|chi_om|^2|^2, the residual backaction weight.
double rate_mismatch_backaction_bracket(double omega, const OmsParams &oms,
                                        const MismatchParams &mm);

/// Strength-optimized limits of the rate-mismatched spectrum.
double rate_mismatch_low_freq_optimum(double omega, const OmsParams &oms,
                                      const MismatchParams &mm);
double rate_mismatch_high_freq_optimum(double omega, const OmsParams &oms,
                                       const MismatchParams &mm);

/// Frequency where the mismatched strength Lorentzians intersect and the
/// backaction cancels exactly: sqrt((d e - e^2)/(1 - d e)) kappa_om / 2.
/// Absent when the radicand is negative or infinite.
std::optional<double> cqnc_recovery_frequency(const MismatchParams &mm, double kappa_om);

/// Validity of a nonzero recovery frequency by coupling case
/// (g_a = g, g_a < g, g_a > g).
bool recovery_frequency_exists(const MismatchParams &mm);

// --- Losses ----------------------------------------------------------------

/// Off-resonant strength-optimized noise floor as a multiplier of S_SQL.
/// Propagation floors are frequency independent; the intracavity floor for
/// oms->nmo depends on the meter susceptibility at `omega`. Returns +inf
/// when the signal path is fully lost.
double loss_floor(CascadeOrder order, LossKind kind, const LossBudget &losses,
                  const OmsParams &oms, const NmoParams &nmo, double omega);

// --- Strength optimization -------------------------------------------------

struct OptimizeResult {
    double g_opt = 0.0;       // rad/s
    double s_min = 0.0;
    bool at_boundary = false; // minimum pinned to a bracket edge
};

/// Golden-section minimization of s_of_g on log10(G) over
/// [center*1e-6, center*1e6].
OptimizeResult minimize_strength(const std::function<double(double)> &s_of_g,
                                 double center);

// --- Thermal / units --------------------------------------------------------

/// Quantum cooperativity (Gamma_om / gamma_m) (hbar omega_m / kB T).
double cooperativity(const OmsParams &oms, double temperature);

/// Mean phonon occupation kB T / (hbar omega_m).
double thermal_occupation(const OmsParams &oms, double temperature);

/// Rescale a dimensionless spectrum to N^2/Hz via hbar m gamma_m omega_m.
NoiseSpectrum to_physical(const NoiseSpectrum &spectrum, const OmsParams &oms);

/// Divide a dimensionless spectrum by the mechanical quality factor.
NoiseSpectrum normalize_per_qm(const NoiseSpectrum &spectrum, const OmsParams &oms);

} // namespace cqnc
