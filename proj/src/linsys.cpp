#include "cqnc/linsys.hpp"

#include "cqnc/constants.hpp"
#include "cqnc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqnc {

namespace {

using Complex = std::complex<double>;

double spectral_value(ChannelKind kind, double force_psd, double thermal_n) {
    switch (kind) {
    case ChannelKind::vacuum:
        return 0.5;
    case ChannelKind::force:
        return force_psd + thermal_n;
    case ChannelKind::thermal_force:
        return thermal_n;
    }
    throw std::logic_error("unhandled channel kind");
}

int find_single_force_column(const TransferSet &t) {
    int col = -1;
    for (const auto &ch : t.channels) {
        if (ch.kind != ChannelKind::force) {
            continue;
        }
        if (col >= 0 || ch.cols != 1) {
            throw std::invalid_argument("added_force_noise: expected exactly one "
                                        "single-column force channel");
        }
        col = ch.first_col;
    }
    if (col < 0) {
        throw std::invalid_argument("added_force_noise: no force channel present");
    }
    return col;
}

} // namespace

LinearQuantumSystem::LinearQuantumSystem(Eigen::MatrixXd drift_, Eigen::MatrixXd k_in_,
                                         Eigen::MatrixXd k_aux_,
                                         std::vector<AuxChannel> channels_)
    : drift(std::move(drift_)), k_in(std::move(k_in_)), k_aux(std::move(k_aux_)),
      channels(std::move(channels_)) {
    const auto n = drift.rows();
    if (drift.cols() != n) {
        throw std::invalid_argument("LinearQuantumSystem: drift must be square");
    }
    if (k_in.rows() != n || k_aux.rows() != n) {
        throw std::invalid_argument("LinearQuantumSystem: input matrix row counts "
                                    "must match the state dimension");
    }
    if (k_in.cols() != 2) {
        throw std::invalid_argument("LinearQuantumSystem: k_in must have exactly "
                                    "two columns (amplitude, phase)");
    }
    // Every aux column must belong to exactly one channel, in order.
    int next = 0;
    for (const auto &ch : channels) {
        if (ch.first_col != next || ch.cols <= 0) {
            throw std::invalid_argument("LinearQuantumSystem: aux channels must "
                                        "partition the k_aux columns");
        }
        next += ch.cols;
    }
    if (next != k_aux.cols()) {
        throw std::invalid_argument("LinearQuantumSystem: aux channels do not cover "
                                    "all k_aux columns");
    }
    poles = Eigen::EigenSolver<Eigen::MatrixXd>(drift, false).eigenvalues();
}

TransferSet transfer(const LinearQuantumSystem &system, double omega) {
    const int n = system.dim();
    const int m = system.aux_cols();

    double pole_scale = std::abs(omega);
    double pole_distance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        pole_scale = std::max(pole_scale, std::abs(system.poles(k)));
        pole_distance =
            std::min(pole_distance, std::abs(Complex(0.0, omega) - system.poles(k)));
    }
    if (pole_distance * kConditionCap <= pole_scale) {
        throw NumericError("transfer: resolvent is singular at omega = " +
                           std::to_string(omega) + " rad/s (pole on the grid)");
    }

    Eigen::MatrixXcd resolvent_arg = (-system.drift).cast<Complex>();
    resolvent_arg.diagonal().array() += Complex(0.0, omega);

    Eigen::MatrixXcd rhs(n, 2 + m);
    rhs.leftCols(2) = system.k_in.cast<Complex>();
    rhs.rightCols(m) = system.k_aux.cast<Complex>();
    const Eigen::MatrixXcd solved = resolvent_arg.partialPivLu().solve(rhs);

    TransferSet out;
    out.omega = omega;
    const Eigen::MatrixXcd k_in_t = system.k_in.transpose().cast<Complex>();
    out.t_in = (k_in_t * solved.leftCols(2)) - Eigen::Matrix2cd::Identity();
    out.t_aux = k_in_t * solved.rightCols(m);
    out.channels = system.channels;
    return out;
}

TransferSet apply_loss(const TransferSet &t, double eta) {
    if (!(eta >= 0.0) || !(eta <= 1.0)) {
        throw std::invalid_argument("apply_loss: efficiency must lie in [0, 1]");
    }
    if (eta == 1.0) {
        return t;
    }

    const double through = std::sqrt(eta);
    const double mixed = std::sqrt(1.0 - eta);
    const int m = static_cast<int>(t.t_aux.cols());

    TransferSet out;
    out.omega = t.omega;
    out.t_in = through * t.t_in;
    out.t_aux.resize(2, m + 2);
    out.t_aux.leftCols(m) = through * t.t_aux;
    out.t_aux.rightCols(2) = mixed * Eigen::Matrix2cd::Identity();
    out.channels = t.channels;
    out.channels.push_back({ChannelKind::vacuum, m, 2});
    return out;
}

TransferSet cascade(const TransferSet &first, const TransferSet &second) {
    if (first.omega != second.omega) {
        throw std::invalid_argument("cascade: frequency mismatch between stages");
    }
    const int m1 = static_cast<int>(first.t_aux.cols());
    const int m2 = static_cast<int>(second.t_aux.cols());

    TransferSet out;
    out.omega = first.omega;
    out.t_in = second.t_in * first.t_in;
    out.t_aux.resize(2, m1 + m2);
    out.t_aux.leftCols(m1) = second.t_in * first.t_aux;
    out.t_aux.rightCols(m2) = second.t_aux;
    out.channels = first.channels;
    for (AuxChannel ch : second.channels) {
        ch.first_col += m1;
        out.channels.push_back(ch);
    }
    return out;
}

SpectralMatrix output_spectrum(const TransferSet &t, double force_psd, double thermal_n) {
    if (force_psd < 0.0) {
        throw std::invalid_argument("output_spectrum: force PSD must be non-negative");
    }
    const int m = static_cast<int>(t.t_aux.cols());

    Eigen::VectorXd s_in(2 + m);
    s_in(0) = 0.5;   // driven port is vacuum around the carrier
    s_in(1) = 0.5;
    for (const auto &ch : t.channels) {
        const double value = spectral_value(ch.kind, force_psd, thermal_n);
        for (int c = 0; c < ch.cols; ++c) {
            s_in(2 + ch.first_col + c) = value;
        }
    }

    Eigen::Matrix<Complex, 2, Eigen::Dynamic> full(2, 2 + m);
    full.leftCols(2) = t.t_in;
    full.rightCols(m) = t.t_aux;

    const Eigen::Matrix2cd hermitian = full * s_in.asDiagonal() * full.adjoint();

    SpectralMatrix out;
    out.omega = t.omega;
    out.s_out = hermitian.real();
    out.s_out = 0.5 * (out.s_out + out.s_out.transpose()).eval();
    return out;
}

double added_force_noise(const TransferSet &t, double thermal_n) {
    const int force_col = find_single_force_column(t);
    const double coeff = std::norm(t.t_aux(1, force_col));
    if (coeff < kForceCoeffFloor) {
        throw NumericError("added_force_noise: force-to-phase coefficient vanished "
                           "(signal destroyed)");
    }
    const SpectralMatrix s = output_spectrum(t, 0.0, thermal_n);
    return s.s_out(1, 1) / coeff;
}

} // namespace cqnc
