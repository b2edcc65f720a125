#include "cqnc/spectra.hpp"

#include "cqnc/constants.hpp"
#include "cqnc/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqnc {

namespace {

void require(bool ok, const char *message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

void require_resonant(const OmsParams &oms) {
    require(oms.delta_om == 0.0, "spectra: closed forms require delta_om = 0");
}

// Squared modulus of the ancilla denominator (w^2 - delta_a^2 - ka^2/4) - i ka w.
double ancilla_denom_sq(double omega, double kappa_a, double delta_a) {
    const double re = omega * omega - delta_a * delta_a - kappa_a * kappa_a / 4.0;
    const double im = kappa_a * omega;
    return re * re + im * im;
}

// Shared three-term cascade spectrum at strengths (g_om, g_a_strength) for an
// ancilla with linewidth kappa_a detuned by delta_a. Exact for the resonantly
// driven, balanced-coupling, lossless cascade in either order.
double cascade_core(double omega, const OmsParams &oms, double kappa_a, double delta_a,
                    double g_om, double g_a_strength,
                    const std::complex<double> &chi_anc) {
    const std::complex<double> chi_mech = chi_m(omega, oms);
    const double chi_mech_sq = std::norm(chi_mech);
    const double denom = 2.0 * g_om * oms.gamma_m * chi_mech_sq;

    const double shot = 1.0 / denom;
    const double backaction = std::norm(g_om * chi_mech + g_a_strength * chi_anc) / denom;
    const double ancilla_shot =
        g_a_strength * kappa_a *
        (omega * omega + kappa_a * kappa_a / 4.0 + delta_a * delta_a) /
        (ancilla_denom_sq(omega, kappa_a, delta_a) * denom);
    return shot + backaction + ancilla_shot;
}

} // namespace

void LossBudget::validate() const {
    if (!(eta_prop >= 0.0 && eta_prop <= 1.0) || !(eta_det >= 0.0 && eta_det <= 1.0)) {
        throw std::invalid_argument("LossBudget: efficiencies must lie in [0, 1]");
    }
}

double s_sql(double omega, const OmsParams &oms) {
    require_resonant(oms);
    return 1.0 / (oms.gamma_m * std::abs(chi_m(omega, oms)));
}

double g_sql(double omega, const OmsParams &oms) {
    require_resonant(oms);
    return 1.0 / std::abs(chi_m(omega, oms));
}

double s_single(double omega, const OmsParams &oms, double g_om, bool include_thermal) {
    require_resonant(oms);
    require(g_om > 0.0, "s_single: measurement strength must be positive");

    double thermal = 0.0;
    if (include_thermal) {
        if (!oms.temperature) {
            throw std::invalid_argument("s_single: thermal term requested without "
                                        "a temperature");
        }
        thermal = thermal_occupation(oms, *oms.temperature);
    }
    const double chi_mech_sq = std::norm(chi_m(omega, oms));
    return thermal + 1.0 / (2.0 * g_om * oms.gamma_m * chi_mech_sq) +
           g_om / (2.0 * oms.gamma_m);
}

double s_cascaded(double omega, const OmsParams &oms, const NmoParams &nmo, double g_om) {
    require_resonant(oms);
    require(nmo.delta_c == 0.0, "s_cascaded: closed form requires delta_c = 0");
    require(std::abs(nmo.g_bs - nmo.g_dc) <= 1e-12 * std::max(nmo.g_a(), 1.0),
            "s_cascaded: closed form requires balanced couplings (g_bs = g_dc)");
    require(g_om > 0.0, "s_cascaded: measurement strength must be positive");

    return cascade_core(omega, oms, nmo.kappa_a, nmo.delta_a, g_om,
                        meas_strength_a(omega, nmo), chi_a(omega, nmo));
}

double s_cqnc(double omega, const OmsParams &oms) {
    const double gg = oms.gamma_m * oms.gamma_m / 4.0;
    return 0.5 * ((omega * omega + gg) / (oms.omega_m * oms.omega_m) + 1.0);
}

double cqnc_to_sql_ratio(double omega, const OmsParams &oms) {
    const double w2 = omega * omega;
    const double wm2 = oms.omega_m * oms.omega_m;
    const double gg = oms.gamma_m * oms.gamma_m;
    return (w2 + gg / 4.0 + wm2) /
           (2.0 * oms.q_m() * std::sqrt((w2 - wm2) * (w2 - wm2) + gg * w2));
}

double s_kappa_mismatch(double omega, const OmsParams &oms, const NmoParams &nmo) {
    require_resonant(oms);
    require(std::abs(nmo.kappa_c - oms.kappa_om) <= 1e-9 * oms.kappa_om &&
                std::abs(nmo.g_a() - oms.g) <= 1e-9 * oms.g,
            "s_kappa_mismatch: requires matched measurement strengths "
            "(kappa_c = kappa_om, g_a = g)");
    require(std::abs(nmo.delta_a + oms.omega_m) <= 1e-9 * oms.omega_m,
            "s_kappa_mismatch: requires delta_a = -omega_m");

    const std::complex<double> chi_mech = chi_m(omega, oms);
    const double optimum =
        std::abs(chi_mech + chi_a(omega, nmo)) / (oms.gamma_m * std::norm(chi_mech));
    return optimum + ancilla_noise_floor(omega, oms, nmo);
}

double ancilla_noise_floor(double omega, const OmsParams &oms, const NmoParams &nmo) {
    require_resonant(oms);
    const double chi_mech_sq = std::norm(chi_m(omega, oms));
    return nmo.kappa_a *
           (omega * omega + nmo.kappa_a * nmo.kappa_a / 4.0 + nmo.delta_a * nmo.delta_a) /
           (ancilla_denom_sq(omega, nmo.kappa_a, nmo.delta_a) * 2.0 * oms.gamma_m *
            chi_mech_sq);
}

std::optional<double> kappa_mismatch_off_resonant_floor(double omega, const OmsParams &oms,
                                                        double kappa_a) {
    if (!(kappa_a < oms.omega_m)) {
        return std::nullopt;
    }
    return kappa_a / (2.0 * oms.omega_m) * s_sql(omega, oms);
}

double s_rate_mismatch(double omega, const OmsParams &oms, const MismatchParams &mm,
                       double g_om) {
    require_resonant(oms);
    mm.validate();
    require(g_om > 0.0, "s_rate_mismatch: measurement strength must be positive");

    NmoParams implied;
    implied.kappa_c = mm.epsilon * oms.kappa_om;
    implied.kappa_a = oms.gamma_m;
    implied.delta_a = -oms.omega_m;

    const double ratio = std::norm(chi_c(omega, implied)) / std::norm(chi_om(omega, oms));
    const double g_a_strength = mm.delta * mm.epsilon * ratio * g_om;
    return cascade_core(omega, oms, implied.kappa_a, implied.delta_a, g_om, g_a_strength,
                        chi_a(omega, implied));
}

double rate_mismatch_backaction_bracket(double omega, const OmsParams &oms,
                                        const MismatchParams &mm) {
    NmoParams implied;
    implied.kappa_c = mm.epsilon * oms.kappa_om;
    const double ratio = std::norm(chi_c(omega, implied)) / std::norm(chi_om(omega, oms));
    const double bracket = 1.0 - mm.delta * mm.epsilon * ratio;
    return bracket * bracket;
}

double rate_mismatch_low_freq_optimum(double omega, const OmsParams &oms,
                                      const MismatchParams &mm) {
    const double share = mm.delta / mm.epsilon;
    return std::abs(1.0 - share) * s_sql(omega, oms) + share * s_cqnc(omega, oms);
}

double rate_mismatch_high_freq_optimum(double omega, const OmsParams &oms,
                                       const MismatchParams &mm) {
    const double share = mm.delta * mm.epsilon;
    return std::abs(1.0 - share) * s_sql(omega, oms) + share * s_cqnc(omega, oms);
}

std::optional<double> cqnc_recovery_frequency(const MismatchParams &mm, double kappa_om) {
    mm.validate();
    const double numerator = mm.delta * mm.epsilon - mm.epsilon * mm.epsilon;
    const double denominator = 1.0 - mm.delta * mm.epsilon;
    if (numerator == 0.0) {
        return 0.0;   // matched strengths meet at zero frequency
    }
    if (denominator == 0.0) {
        return std::nullopt;
    }
    const double radicand = numerator / denominator;
    if (!(radicand > 0.0) || !std::isfinite(radicand)) {
        return std::nullopt;
    }
    return std::sqrt(radicand) * kappa_om / 2.0;
}

bool recovery_frequency_exists(const MismatchParams &mm) {
    const double e = mm.epsilon;
    const double d = mm.delta;
    if (d == 1.0) {
        return e != 1.0;
    }
    if (d < 1.0) {
        return e > 1.0 / d || e < d;
    }
    return e > d || e < 1.0 / d;
}

double loss_floor(CascadeOrder order, LossKind kind, const LossBudget &losses,
                  const OmsParams &oms, const NmoParams &nmo, double omega) {
    losses.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();

    if (kind == LossKind::propagation) {
        const double lost = std::sqrt(1.0 - losses.eta_prop);
        if (order == CascadeOrder::nmo_oms) {
            return lost;
        }
        return losses.eta_prop > 0.0 ? lost / losses.eta_prop : inf;
    }

    const double eta_c = nmo.eta_esc;
    const double eta_om = oms.eta_esc;
    const double numerator = std::sqrt(eta_c + eta_om - 2.0 * eta_c * eta_om);
    if (order == CascadeOrder::nmo_oms) {
        return numerator / eta_om;
    }
    const double phase_weight =
        std::norm(1.0 - eta_c * nmo.kappa_c * chi_c(omega, nmo));
    return phase_weight > 0.0 ? numerator / (eta_om * phase_weight) : inf;
}

OptimizeResult minimize_strength(const std::function<double(double)> &s_of_g,
                                 double center) {
    require(center > 0.0, "minimize_strength: bracket center must be positive");

    constexpr double kSpanDecades = 6.0;
    constexpr double kTolDecades = 1e-7;
    constexpr double kEdgeDecades = 1e-4;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    const double lo0 = std::log10(center) - kSpanDecades;
    const double hi0 = std::log10(center) + kSpanDecades;
    const auto eval = [&](double t) { return s_of_g(std::pow(10.0, t)); };

    double lo = lo0;
    double hi = hi0;
    double left = hi - inv_phi * (hi - lo);
    double right = lo + inv_phi * (hi - lo);
    double f_left = eval(left);
    double f_right = eval(right);
    while (hi - lo > kTolDecades) {
        if (f_left < f_right) {
            hi = right;
            right = left;
            f_right = f_left;
            left = hi - inv_phi * (hi - lo);
            f_left = eval(left);
        } else {
            lo = left;
            left = right;
            f_left = f_right;
            right = lo + inv_phi * (hi - lo);
            f_right = eval(right);
        }
    }

    OptimizeResult out;
    const double t_best = f_left < f_right ? left : right;
    out.g_opt = std::pow(10.0, t_best);
    out.s_min = std::min(f_left, f_right);
    out.at_boundary = (t_best - lo0 < kEdgeDecades) || (hi0 - t_best < kEdgeDecades);
    return out;
}

double cooperativity(const OmsParams &oms, double temperature) {
    require(temperature > 0.0, "cooperativity: temperature must be positive");
    return oms.strength_peak() / oms.gamma_m * kHbar * oms.omega_m /
           (kBoltzmann * temperature);
}

double thermal_occupation(const OmsParams &oms, double temperature) {
    return kBoltzmann * temperature / (kHbar * oms.omega_m);
}

NoiseSpectrum to_physical(const NoiseSpectrum &spectrum, const OmsParams &oms) {
    if (spectrum.normalization != Normalization::dimensionless) {
        throw std::invalid_argument("to_physical: input must be dimensionless");
    }
    if (!oms.mass) {
        throw std::invalid_argument("to_physical: oscillator mass is not set");
    }
    const double factor = kHbar * (*oms.mass) * oms.gamma_m * oms.omega_m;
    NoiseSpectrum out = spectrum;
    for (double &v : out.values) {
        v *= factor;
    }
    out.normalization = Normalization::physical;
    return out;
}

NoiseSpectrum normalize_per_qm(const NoiseSpectrum &spectrum, const OmsParams &oms) {
    if (spectrum.normalization != Normalization::dimensionless) {
        throw std::invalid_argument("normalize_per_qm: input must be dimensionless");
    }
    NoiseSpectrum out = spectrum;
    for (double &v : out.values) {
        v /= oms.q_m();
    }
    out.normalization = Normalization::per_qm;
    return out;
}

} // namespace cqnc
