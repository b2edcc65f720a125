#pragma once

#include "cqnc/models.hpp"
#include "cqnc/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cqnc::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reference sensor used for the mismatch studies: Q_m = 1000,
// kappa_om = 10 omega_m, coupling at the mechanical frequency.
inline OmsParams table1_oms() {
    OmsParams p;
    p.omega_m = kTwoPi * 500e3;
    p.gamma_m = kTwoPi * 500.0;
    p.kappa_om = kTwoPi * 5e6;
    p.g = kTwoPi * 500e3;
    return p;
}

// Negative-mass oscillator matched to table1_oms.
inline NmoParams matched_nmo(const OmsParams &oms) {
    NmoParams p;
    p.kappa_c = oms.kappa_om;
    p.kappa_a = oms.gamma_m;
    p.delta_a = -oms.omega_m;
    p.g_bs = oms.g / 2.0;
    p.g_dc = oms.g / 2.0;
    return p;
}

// Case-study sensor: Q_m = 1e8, backaction limited at 4 K.
inline OmsParams table2_oms() {
    OmsParams p;
    p.omega_m = kTwoPi * 500e3;
    p.gamma_m = kTwoPi * 5e-3;
    p.kappa_om = kTwoPi * 1.98e6;
    p.g = kTwoPi * 500e3;
    p.eta_esc = 0.9;
    p.temperature = 4.0;
    return p;
}

inline NmoParams table2_nmo() {
    NmoParams p;
    p.kappa_c = kTwoPi * 2e6;
    p.kappa_a = kTwoPi * 200e3;
    p.delta_a = -kTwoPi * 495e3;
    p.g_bs = kTwoPi * 252.5e3;
    p.g_dc = kTwoPi * 242.5e3;
    p.eta_esc = 0.9;
    return p;
}

inline double log_uniform(std::mt19937_64 &rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
    return std::exp(dist(rng));
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Well-conditioned sensor draw (rates in rad/s, omega_m pinned to 1e6).
inline OmsParams random_oms(std::mt19937_64 &rng) {
    OmsParams p;
    p.omega_m = 1e6;
    p.gamma_m = p.omega_m * log_uniform(rng, 1e-4, 1e-2);
    p.kappa_om = p.omega_m * log_uniform(rng, 1.0, 30.0);
    p.g = p.omega_m * log_uniform(rng, 0.1, 3.0);
    return p;
}

inline NmoParams random_nmo(std::mt19937_64 &rng, const OmsParams &oms) {
    NmoParams p;
    p.kappa_c = oms.kappa_om * log_uniform(rng, 0.5, 2.0);
    p.kappa_a = oms.omega_m * log_uniform(rng, 1e-3, 3.0);
    p.delta_a = -oms.omega_m * uniform(rng, 0.5, 2.0);
    const double g_a = oms.g * log_uniform(rng, 0.7, 1.4);
    p.g_bs = g_a / 2.0;
    p.g_dc = g_a / 2.0;
    return p;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Minimal lossless cascade scenario over table-1 parameters.
inline Scenario cascade_scenario(SystemOrder order, const NmoParams &nmo,
                                 double g_hz = 500e3) {
    Scenario s;
    s.order = order;
    s.oms.omega_m_hz = 500e3;
    s.oms.gamma_m_hz = 500.0;
    s.oms.kappa_om_hz = 5e6;
    s.oms.g_hz = g_hz;
    s.nmo = Scenario::NmoConfig{nmo.kappa_c / kTwoPi, nmo.kappa_a / kTwoPi,
                                nmo.delta_a / kTwoPi, nmo.g_bs / kTwoPi,
                                nmo.g_dc / kTwoPi,    nmo.eta_esc};
    return s;
}

} // namespace cqnc::test
