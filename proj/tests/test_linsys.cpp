#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqnc/constants.hpp"
#include "cqnc/errors.hpp"
#include "cqnc/linsys.hpp"
#include "cqnc/models.hpp"
#include "cqnc/spectra.hpp"

#include "helpers.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace cqnc;
using namespace cqnc::test;

namespace {

TransferSet identity_stage(double omega) {
    TransferSet t;
    t.omega = omega;
    t.t_in = Eigen::Matrix2cd::Identity();
    t.t_aux.resize(2, 0);
    return t;
}

std::complex<double> cavity_phase(double omega, double kappa) {
    return std::complex<double>(kappa / 2.0, -omega) /
           std::complex<double>(kappa / 2.0, omega);
}

} // namespace

TEST_CASE("reflected cavity phase factor") {
    const OmsParams oms = table1_oms();
    const TransferSet at_dc = transfer(build_oms(oms), 0.0);
    CHECK(at_dc.t_in(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(at_dc.t_in(0, 0).imag()) < 1e-12);

    const double half_linewidth = oms.kappa_om / 2.0;
    const TransferSet at_pole = transfer(build_oms(oms), half_linewidth);
    CHECK(std::abs(at_pole.t_in(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::arg(at_pole.t_in(0, 0)) ==
          doctest::Approx(-std::numbers::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("uncoupled meter and ancilla cavities decouple") {
    NmoParams nmo = matched_nmo(table1_oms());
    nmo.g_bs = 0.0;
    nmo.g_dc = 0.0;
    const double omega = 0.3e6;
    const TransferSet t = transfer(build_nmo(nmo), omega);

    const std::complex<double> phase = cavity_phase(omega, nmo.kappa_c);
    CHECK(std::abs(t.t_in(0, 0) - phase) < 1e-12);
    CHECK(std::abs(t.t_in(1, 1) - phase) < 1e-12);
    CHECK(std::abs(t.t_in(0, 1)) < 1e-14);
    CHECK(std::abs(t.t_in(1, 0)) < 1e-14);
    // Ancilla input block (aux columns 2, 3) cannot reach the output.
    CHECK(t.t_aux.rightCols(2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("loss mixing preserves power and channel bookkeeping") {
    const OmsParams oms = table1_oms();
    const TransferSet t = transfer(build_oms(oms), 0.2 * oms.omega_m);

    const TransferSet unchanged = apply_loss(t, 1.0);
    CHECK(unchanged.channels.size() == t.channels.size());
    CHECK((unchanged.t_in - t.t_in).cwiseAbs().maxCoeff() == 0.0);

    const TransferSet attenuated = apply_loss(t, 0.91);
    CHECK(attenuated.channels.size() == t.channels.size() + 1);
    CHECK(attenuated.channels.back().kind == ChannelKind::vacuum);
    const double signal_power = std::norm(attenuated.t_in(0, 0) / t.t_in(0, 0));
    const double vacuum_power = std::norm(attenuated.t_aux(0, 3));
    CHECK(signal_power == doctest::Approx(0.91).epsilon(1e-12));
    CHECK(vacuum_power == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(signal_power + vacuum_power == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(apply_loss(t, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(apply_loss(t, 1.1), std::invalid_argument);
}

TEST_CASE("total loss leaves pure vacuum at the output") {
    const OmsParams oms = table1_oms();
    const TransferSet dark = apply_loss(transfer(build_oms(oms), oms.omega_m), 0.0);
    const SpectralMatrix s = output_spectrum(dark, 1.0, 0.0);
    CHECK(s.s_out(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.s_out(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(s.s_out(0, 1)) < 1e-14);
    CHECK_THROWS_AS(added_force_noise(dark, 0.0), NumericError);
}

TEST_CASE("cascade with an identity stage is a no-op") {
    const OmsParams oms = table1_oms();
    const TransferSet t = transfer(build_oms(oms), 0.7 * oms.omega_m);
    const TransferSet total = cascade(t, identity_stage(t.omega));
    CHECK((total.t_in - t.t_in).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((total.t_aux - t.t_aux).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(total.channels.size() == t.channels.size());

    CHECK_THROWS_AS(cascade(t, identity_stage(t.omega * 1.5)), std::invalid_argument);
}

TEST_CASE("force coefficient through the cascade") {
    const OmsParams oms = table1_oms();
    const NmoParams nmo = matched_nmo(oms);
    const double omega = oms.omega_m;

    const TransferSet oms_t = transfer(build_oms(oms), omega);
    const TransferSet nmo_t = transfer(build_nmo(nmo), omega);
    const std::complex<double> standalone = oms_t.t_aux(1, 2);

    // Sensor last: the force column passes through untouched.
    const TransferSet nmo_first = cascade(nmo_t, oms_t);
    CHECK(std::abs(nmo_first.t_aux(1, 6) - standalone) < 1e-15);

    // Sensor first: the force column picks up the meter reflection phase.
    const TransferSet oms_first = cascade(oms_t, nmo_t);
    const std::complex<double> expected = cavity_phase(omega, nmo.kappa_c) * standalone;
    CHECK(std::abs(oms_first.t_aux(1, 2) - expected) < 1e-14 * std::abs(expected));
    CHECK(std::abs(oms_first.t_aux(1, 2)) ==
          doctest::Approx(std::abs(standalone)).epsilon(1e-12));
}

TEST_CASE("added noise is order independent without losses") {
    const OmsParams oms = table1_oms();
    const NmoParams nmo = matched_nmo(oms);
    for (double ratio : {1e-3, 1e-2, 0.5, 1.0, 2.0, 10.0}) {
        const double omega = ratio * oms.omega_m;
        const TransferSet oms_t = transfer(build_oms(oms), omega);
        const TransferSet nmo_t = transfer(build_nmo(nmo), omega);
        const double a = added_force_noise(cascade(nmo_t, oms_t), 0.0);
        const double b = added_force_noise(cascade(oms_t, nmo_t), 0.0);
        CHECK(rel_diff(a, b) < 1e-8);
    }
}

TEST_CASE("vacuum passthrough spectrum") {
    OmsParams oms = table1_oms();
    oms.g = 0.0;
    const double omega = 0.4 * oms.omega_m;
    const TransferSet t = transfer(build_oms(oms), omega);
    // Decoupled mechanics leave a bare reflecting cavity.
    const std::complex<double> phase = cavity_phase(omega, oms.kappa_om);
    CHECK(std::abs(t.t_in(1, 1) - phase) < 1e-12);
    const SpectralMatrix s = output_spectrum(t, 0.0, 0.0);
    CHECK(std::abs(s.s_out(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(s.s_out(1, 1) - 0.5) < 1e-12);
    CHECK(std::abs(s.s_out(0, 1)) < 1e-12);
}

TEST_CASE("resonant sensor reflects vacuum in the amplitude quadrature") {
    const OmsParams oms = table1_oms();
    for (double ratio : {1e-3, 0.3, 1.0, 4.0}) {
        const TransferSet t = transfer(build_oms(oms), ratio * oms.omega_m);
        const SpectralMatrix s = output_spectrum(t, 2.5, 0.7);
        CHECK(s.s_out(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("output spectrum matches the single-sensor closed form") {
    const OmsParams oms = table1_oms();
    const TransferSet t = transfer(build_oms(oms), 0.0);
    const SpectralMatrix s = output_spectrum(t, 0.0, 0.0);
    const double coeff = std::norm(t.t_aux(1, 2));
    const double expected = s_single(0.0, oms, meas_strength_om(0.0, oms), false) * coeff;
    CHECK(rel_diff(s.s_out(1, 1), expected) < 1e-9);
}

TEST_CASE("added noise reaches the single-sensor quantum limit at resonance") {
    OmsParams oms = table1_oms();
    const double omega = oms.omega_m;
    // Couple so that the measurement strength equals the optimum gamma_m.
    oms.g = std::sqrt(oms.gamma_m / (oms.kappa_om * std::norm(chi_om(omega, oms))));
    const double noise = added_force_noise(transfer(build_oms(oms), omega), 0.0);
    CHECK(rel_diff(noise, 1.0) < 1e-6);
}

TEST_CASE("matched cascade approaches the cancellation bound at large strength") {
    OmsParams oms = table1_oms();
    oms.g = 3e3 * oms.omega_m;
    NmoParams nmo = matched_nmo(oms);
    for (double ratio : {1e-3, 1e-2, 0.1}) {
        const double omega = ratio * oms.omega_m;
        const TransferSet total =
            cascade(transfer(build_nmo(nmo), omega), transfer(build_oms(oms), omega));
        const double noise = added_force_noise(total, 0.0);
        CHECK(rel_diff(noise, s_cqnc(omega, oms)) < 1e-3);
    }
}

TEST_CASE("destroyed signal paths raise the vanishing-coefficient error") {
    const OmsParams oms = table1_oms();
    const NmoParams nmo = matched_nmo(oms);
    const double omega = 0.01 * oms.omega_m;
    const TransferSet oms_t = transfer(build_oms(oms), omega);
    const TransferSet nmo_t = transfer(build_nmo(nmo), omega);

    // Zero detection efficiency kills the signal for either order.
    CHECK_THROWS_AS(added_force_noise(apply_loss(cascade(nmo_t, oms_t), 0.0), 0.0),
                    NumericError);
    // A dead link upstream of the sensor only destroys the signal when the
    // sensor comes first.
    CHECK_THROWS_AS(added_force_noise(cascade(apply_loss(oms_t, 0.0), nmo_t), 0.0),
                    NumericError);
    CHECK(added_force_noise(cascade(apply_loss(nmo_t, 0.0), oms_t), 0.0) > 0.0);
}

TEST_CASE("transfer obeys conjugate symmetry") {
    std::mt19937_64 rng(7u);
    for (int draw = 0; draw < 100; ++draw) {
        const OmsParams oms = random_oms(rng);
        const NmoParams nmo = random_nmo(rng, oms);
        const double omega = oms.omega_m * log_uniform(rng, 1e-3, 10.0);
        const double eta = uniform(rng, 0.3, 1.0);

        const auto build_total = [&](double w) {
            return apply_loss(
                cascade(apply_loss(transfer(build_nmo(nmo), w), eta),
                        transfer(build_oms(oms), w)),
                0.95);
        };
        const TransferSet plus = build_total(omega);
        const TransferSet minus = build_total(-omega);
        CHECK((minus.t_in - plus.t_in.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((minus.t_aux - plus.t_aux.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("zero-coupling systems preserve vacuum") {
    std::mt19937_64 rng(11u);
    for (int draw = 0; draw < 100; ++draw) {
        OmsParams oms = random_oms(rng);
        oms.g = 0.0;
        NmoParams nmo = random_nmo(rng, oms);
        nmo.g_bs = 0.0;
        nmo.g_dc = 0.0;
        const double omega = oms.omega_m * log_uniform(rng, 1e-3, 10.0);
        const TransferSet total =
            cascade(transfer(build_nmo(nmo), omega), transfer(build_oms(oms), omega));
        const SpectralMatrix s = output_spectrum(total, 0.0, 0.0);
        CHECK((s.s_out - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("propagation loss never improves the noise") {
    const OmsParams oms = table1_oms();
    const NmoParams nmo = matched_nmo(oms);
    const double omega = 0.01 * oms.omega_m;
    const TransferSet oms_t = transfer(build_oms(oms), omega);
    const TransferSet nmo_t = transfer(build_nmo(nmo), omega);

    double previous = 0.0;
    for (double eta : {1.0, 0.9, 0.8, 0.6, 0.4, 0.2, 0.05}) {
        const double noise =
            added_force_noise(cascade(apply_loss(nmo_t, eta), oms_t), 0.0);
        CHECK(noise >= previous);
        previous = noise;
    }
}

TEST_CASE("a pole on the grid raises the singular-matrix error") {
    Eigen::Matrix4d drift = Eigen::Matrix4d::Zero();
    const double w0 = 1e6;
    drift(0, 1) = w0;
    drift(1, 0) = -w0;
    drift(2, 3) = 2.0 * w0;
    drift(3, 2) = -2.0 * w0;
    Eigen::MatrixXd k_in = Eigen::MatrixXd::Zero(4, 2);
    k_in(0, 0) = 1.0;
    k_in(1, 1) = 1.0;
    Eigen::MatrixXd k_aux = Eigen::MatrixXd::Zero(4, 1);
    k_aux(3, 0) = 1.0;
    const LinearQuantumSystem undamped(drift, k_in, k_aux,
                                       {{ChannelKind::force, 0, 1}});
    CHECK_THROWS_AS(transfer(undamped, w0), NumericError);
    CHECK_NOTHROW(transfer(undamped, 0.37 * w0));
}

TEST_CASE("system construction rejects inconsistent shapes") {
    Eigen::Matrix4d drift = -Eigen::Matrix4d::Identity();
    Eigen::MatrixXd k_in = Eigen::MatrixXd::Zero(4, 2);
    Eigen::MatrixXd k_aux = Eigen::MatrixXd::Zero(4, 3);

    CHECK_THROWS_AS(LinearQuantumSystem(drift, Eigen::MatrixXd::Zero(4, 3), k_aux,
                                        {{ChannelKind::vacuum, 0, 3}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        LinearQuantumSystem(drift, k_in, k_aux, {{ChannelKind::vacuum, 0, 2}}),
        std::invalid_argument);
    CHECK_THROWS_AS(LinearQuantumSystem(drift, k_in, k_aux,
                                        {{ChannelKind::vacuum, 0, 2},
                                         {ChannelKind::force, 1, 2}}),
                    std::invalid_argument);
}

TEST_CASE("thermal channel contributes its occupation") {
    Eigen::Matrix4d drift = -1e5 * Eigen::Matrix4d::Identity();
    Eigen::MatrixXd k_in = Eigen::MatrixXd::Zero(4, 2);
    const double root_rate = std::sqrt(1e5);
    k_in(0, 0) = root_rate;
    k_in(1, 1) = root_rate;
    Eigen::MatrixXd k_aux = Eigen::MatrixXd::Zero(4, 1);
    k_aux(1, 0) = root_rate;
    const LinearQuantumSystem system(drift, k_in, k_aux,
                                     {{ChannelKind::thermal_force, 0, 1}});
    const TransferSet t = transfer(system, 0.0);
    const double n_th = 3.0;
    const SpectralMatrix hot = output_spectrum(t, 0.0, n_th);
    const SpectralMatrix cold = output_spectrum(t, 0.0, 0.0);
    const double gain = std::norm(t.t_aux(1, 0));
    CHECK(rel_diff(hot.s_out(1, 1) - cold.s_out(1, 1), n_th * gain) < 1e-12);
}
