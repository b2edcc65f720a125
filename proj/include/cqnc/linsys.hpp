#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace cqnc {

/// Physical role of an auxiliary input channel. The role decides the
/// diagonal entry the channel contributes to the input spectral density:
/// vacuum quadratures carry 1/2, a force channel carries the force signal
/// PSD plus the thermal occupation, a pure thermal channel carries the
/// occupation only.
enum class ChannelKind { vacuum, force, thermal_force };

/// One auxiliary input port, covering a contiguous block of k_aux columns.
struct AuxChannel {
    ChannelKind kind = ChannelKind::vacuum;
    int first_col = 0;
    int cols = 0;
};

/// State-space description of one linear quantum subsystem,
///
///     x' = drift * x + k_in * x_in + k_aux * x_aux,
///     x_out = k_in^T * x - x_in,
///
/// with x the quadrature state vector, x_in the two quadratures of the
/// measured/driven port and x_aux the stacked auxiliary inputs (bath
/// vacua, external force). All matrices are real; rates in rad/s,
/// input couplings in sqrt(rad/s). Immutable after construction.
struct LinearQuantumSystem {
    Eigen::MatrixXd drift;                // n x n
    Eigen::MatrixXd k_in;                 // n x 2
    Eigen::MatrixXd k_aux;                // n x m
    std::vector<AuxChannel> channels;     // partition of the m columns
    Eigen::VectorXcd poles;               // drift eigenvalues, fixed at construction

    LinearQuantumSystem(Eigen::MatrixXd drift_, Eigen::MatrixXd k_in_,
                        Eigen::MatrixXd k_aux_, std::vector<AuxChannel> channels_);

    int dim() const { return static_cast<int>(drift.rows()); }
    int aux_cols() const { return static_cast<int>(k_aux.cols()); }
};

/// Frequency-domain transfer of a subsystem (or a cascade of subsystems)
/// from all inputs to the two measured output quadratures. Row 0 is the
/// amplitude quadrature, row 1 the phase quadrature. Satisfies conjugate
/// symmetry: evaluating the parent system at -w gives the elementwise
/// complex conjugate.
struct TransferSet {
    double omega = 0.0;                           // rad/s
    Eigen::Matrix2cd t_in;                        // measured port -> output
    Eigen::Matrix<std::complex<double>, 2, Eigen::Dynamic> t_aux;
    std::vector<AuxChannel> channels;
};

/// Symmetrized power spectral density of the output quadratures.
struct SpectralMatrix {
    double omega = 0.0;
    Eigen::Matrix2d s_out;   // real symmetric, positive semidefinite
};

/// Solve the system in the Fourier domain (x' = i*w*x convention):
/// t_in = k_in^T (i*w*I - drift)^{-1} k_in - I and the analogous aux block.
/// Throws NumericError when i*w falls within a relative distance of
/// 1/kConditionCap of a drift pole, i.e. the resolvent is numerically
/// non-invertible because a pole sits on the frequency grid.
TransferSet transfer(const LinearQuantumSystem &system, double omega);

/// Mix the measured output with vacuum at power efficiency eta in [0,1]:
/// existing columns scale by sqrt(eta) and a fresh two-quadrature vacuum
/// channel with coefficient sqrt(1-eta) is appended. eta == 1 is a no-op.
TransferSet apply_loss(const TransferSet &t, double eta);

/// Feed the output of `first` into the input of `second` (same grid
/// frequency). Channel order: first-system channels (with any loss vacuum
/// already appended), then second-system channels.
TransferSet cascade(const TransferSet &first, const TransferSet &second);

/// Symmetrized output spectral density S_out = Re(T S_in T^dagger) with
/// S_in assembled from the channel registry: 1/2 per vacuum quadrature
/// (including the measured port), force_psd + thermal_n on the force
/// channel, thermal_n on a pure thermal channel.
SpectralMatrix output_spectrum(const TransferSet &t, double force_psd, double thermal_n);

/// Added force noise referred to the input: the phase-quadrature output
/// PSD with the signal PSD set to zero, divided by |t_{force->phase}|^2.
/// Requires exactly one force channel; throws NumericError when the force
/// coefficient is below the floor (signal destroyed).
double added_force_noise(const TransferSet &t, double thermal_n);

} // namespace cqnc
