#include "cqnc/models.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cqnc {

namespace {

void require(bool ok, const char *message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

} // namespace

void OmsParams::validate() const {
    require(omega_m > 0.0, "OmsParams: omega_m must be positive");
    require(gamma_m > 0.0, "OmsParams: gamma_m must be positive");
    require(kappa_om > 0.0, "OmsParams: kappa_om must be positive");
    require(g >= 0.0, "OmsParams: g must be non-negative");
    require(eta_esc > 0.0 && eta_esc <= 1.0, "OmsParams: eta_esc must lie in (0, 1]");
    if (temperature) {
        require(*temperature >= 0.0, "OmsParams: temperature must be non-negative");
    }
    if (mass) {
        require(*mass > 0.0, "OmsParams: mass must be positive");
    }
}

double NmoParams::g_r() const {
    const double sum = g_bs + g_dc;
    return sum > 0.0 ? (g_bs - g_dc) / sum : 0.0;
}

void NmoParams::validate() const {
    require(kappa_c > 0.0, "NmoParams: kappa_c must be positive");
    require(kappa_a >= 0.0, "NmoParams: kappa_a must be non-negative");
    require(g_bs >= 0.0 && g_dc >= 0.0, "NmoParams: couplings must be non-negative");
    require(eta_esc > 0.0 && eta_esc <= 1.0, "NmoParams: eta_esc must lie in (0, 1]");
}

void MismatchParams::validate() const {
    require(epsilon > 0.0, "MismatchParams: epsilon must be positive");
    require(delta >= 0.0, "MismatchParams: delta must be non-negative");
}

LinearQuantumSystem build_oms(const OmsParams &p) {
    p.validate();

    Eigen::Matrix4d drift;
    drift << -p.kappa_om / 2.0, p.delta_om, 0.0, 0.0,
             -p.delta_om, -p.kappa_om / 2.0, -p.g, 0.0,
             0.0, 0.0, 0.0, p.omega_m,
             -p.g, 0.0, -p.omega_m, -p.gamma_m;

    const double root_in = std::sqrt(p.kappa_in());
    Eigen::Matrix<double, 4, 2> k_in = Eigen::Matrix<double, 4, 2>::Zero();
    k_in(0, 0) = root_in;
    k_in(1, 1) = root_in;

    const double root_bath = std::sqrt(p.kappa_bath());
    Eigen::Matrix<double, 4, 3> k_aux = Eigen::Matrix<double, 4, 3>::Zero();
    k_aux(0, 0) = root_bath;
    k_aux(1, 1) = root_bath;
    k_aux(3, 2) = std::sqrt(p.gamma_m);   // force drives momentum only

    std::vector<AuxChannel> channels{
        {ChannelKind::vacuum, 0, 2},
        {ChannelKind::force, 2, 1},
    };
    return LinearQuantumSystem(drift, k_in, k_aux, std::move(channels));
}

LinearQuantumSystem build_nmo(const NmoParams &p) {
    p.validate();

    const double g_minus = p.g_bs - p.g_dc;
    const double g_plus = p.g_bs + p.g_dc;

    Eigen::Matrix4d drift;
    drift << -p.kappa_c / 2.0, p.delta_c, 0.0, g_minus,
             -p.delta_c, -p.kappa_c / 2.0, -g_plus, 0.0,
             0.0, g_minus, -p.kappa_a / 2.0, p.delta_a,
             -g_plus, 0.0, -p.delta_a, -p.kappa_a / 2.0;

    const double root_in = std::sqrt(p.kappa_in());
    Eigen::Matrix<double, 4, 2> k_in = Eigen::Matrix<double, 4, 2>::Zero();
    k_in(0, 0) = root_in;
    k_in(1, 1) = root_in;

    const double root_bath = std::sqrt(p.kappa_bath());
    const double root_anc = std::sqrt(p.kappa_a);
    Eigen::Matrix4d k_aux = Eigen::Matrix4d::Zero();
    k_aux(0, 0) = root_bath;
    k_aux(1, 1) = root_bath;
    k_aux(2, 2) = root_anc;
    k_aux(3, 3) = root_anc;

    std::vector<AuxChannel> channels{
        {ChannelKind::vacuum, 0, 2},
        {ChannelKind::vacuum, 2, 2},
    };
    return LinearQuantumSystem(drift, k_in, k_aux, std::move(channels));
}

std::complex<double> chi_om(double omega, const OmsParams &p) {
    return 1.0 / std::complex<double>(p.kappa_om / 2.0, omega);
}

std::complex<double> chi_m(double omega, const OmsParams &p) {
    const std::complex<double> denom(omega * omega - p.omega_m * p.omega_m,
                                     -p.gamma_m * omega);
    return p.omega_m / denom;
}

std::complex<double> chi_c(double omega, const NmoParams &p) {
    return 1.0 / std::complex<double>(p.kappa_c / 2.0, omega);
}

std::complex<double> chi_a(double omega, const NmoParams &p) {
    const std::complex<double> denom(
        omega * omega - p.delta_a * p.delta_a - p.kappa_a * p.kappa_a / 4.0,
        -p.kappa_a * omega);
    return p.delta_a / denom;
}

double meas_strength_om(double omega, const OmsParams &p) {
    return p.g * p.g * p.kappa_om * std::norm(chi_om(omega, p));
}

double meas_strength_a(double omega, const NmoParams &p) {
    const double g_a = p.g_a();
    return g_a * g_a * p.kappa_c * std::norm(chi_c(omega, p));
}

bool MatchingReport::all_ok() const {
    return coupling_balance.ok && meas_strength.ok && ancilla_detuning.ok &&
           ancilla_linewidth.ok && sideband_resolution.ok && quality_factor.ok;
}

MatchingReport check_matching(const OmsParams &oms, const NmoParams &nmo, double tol) {
    oms.validate();
    nmo.validate();

    MatchingReport report;
    report.tol = tol;

    const double g_a = nmo.g_a();
    report.coupling_balance.residual =
        g_a > 0.0 ? std::abs(nmo.g_bs - nmo.g_dc) / g_a : 0.0;

    // Sup-norm of the strength mismatch over a log-spaced reference grid.
    constexpr int kGridPoints = 200;
    const double lo = std::log10(1e-3 * oms.omega_m);
    const double hi = std::log10(10.0 * oms.omega_m);
    double sup = 0.0;
    for (int i = 0; i < kGridPoints; ++i) {
        const double omega = std::pow(10.0, lo + (hi - lo) * i / (kGridPoints - 1));
        const double g_om = meas_strength_om(omega, oms);
        sup = std::max(sup, std::abs(g_om - meas_strength_a(omega, nmo)) / g_om);
    }
    report.meas_strength.residual = sup;

    report.ancilla_detuning.residual = std::abs(nmo.delta_a + oms.omega_m) / oms.omega_m;
    report.ancilla_linewidth.residual = std::abs(nmo.kappa_a - oms.gamma_m) / oms.omega_m;
    report.sideband_resolution.residual = nmo.kappa_a / oms.omega_m;
    report.quality_factor.residual = 1.0 / oms.q_m();

    for (MatchingReport::Entry *entry :
         {&report.coupling_balance, &report.meas_strength, &report.ancilla_detuning,
          &report.ancilla_linewidth, &report.sideband_resolution,
          &report.quality_factor}) {
        entry->ok = entry->residual <= tol;
    }
    return report;
}

} // namespace cqnc
