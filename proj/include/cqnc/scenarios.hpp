#pragma once

#include "cqnc/spectra.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#if !defined(CQNC_PRESET_DIR)
#define CQNC_PRESET_DIR ""
#endif

namespace cqnc {

enum class SystemOrder { nmo_oms, oms_nmo, single_oms, integrated_reference };
enum class GMode { fixed, optimal };
enum class GridSpacing { log, linear };
enum class EmitFormat { csv, json };

struct GridSpec {
    double min = 1e-3;     // in units of omega_m
    double max = 1e1;
    int points = 400;
    GridSpacing spacing = GridSpacing::log;
};

/// Declarative description of one sweep. Frequencies are stored in the
/// configuration's ordinary-frequency units (Hz) so that a parsed scenario
/// re-emits bit-identically; rad/s parameter records are derived on demand.
struct Scenario {
    struct OmsConfig {
        double omega_m_hz = 0.0;
        double gamma_m_hz = 0.0;
        double kappa_om_hz = 0.0;
        double g_hz = 0.0;
        double eta_esc = 1.0;
        std::optional<double> temperature_k;
        std::optional<double> mass_kg;
    };
    struct NmoConfig {
        double kappa_c_hz = 0.0;
        double kappa_a_hz = 0.0;
        double delta_a_hz = 0.0;
        double g_bs_hz = 0.0;
        double g_dc_hz = 0.0;
        double eta_esc = 1.0;
    };

    SystemOrder order = SystemOrder::single_oms;
    OmsConfig oms;
    std::optional<NmoConfig> nmo;
    LossBudget losses;
    GMode g_mode = GMode::optimal;
    GridSpec grid;
    Normalization normalization = Normalization::dimensionless;
    bool include_thermal = false;
    std::string label;

    OmsParams oms_params() const;
    NmoParams nmo_params() const;
    /// The negative-mass parameters actually used by the pipeline: for the
    /// integrated reference the meter linewidth and total coupling are
    /// pinned to the sensor (kappa_c = kappa_om, g_a = g, g_r preserved).
    NmoParams effective_nmo_params() const;
    void validate() const;
};

struct SweepRow {
    double omega_over_omega_m = 0.0;
    double s_f = 0.0;
    double s_sql = 0.0;
    double s_cqnc = 0.0;
    double ratio = 0.0;       // s_f / s_sql
    double g_used = 0.0;      // rad/s; the optimum when g_mode == optimal
};

struct SweepResult {
    Scenario scenario;
    std::vector<SweepRow> rows;
    std::optional<MatchingReport> matching;
    std::optional<double> c_q;
    std::string timestamp;
    std::string version;
};

/// Parse and validate a JSON scenario document. Unknown keys are rejected
/// with their path; soft unit-sanity issues are appended to `warnings`.
Scenario parse_config(const std::string &text, std::vector<std::string> *warnings = nullptr);

/// Scenario -> JSON document accepted by parse_config.
nlohmann::json scenario_to_json(const Scenario &scenario);

/// Added force noise of the scenario's pipeline at one frequency, with all
/// couplings scaled by `coupling_scale` (1.0 = configured values).
double pipeline_added_noise(const Scenario &scenario, double omega, double coupling_scale);

/// Same, with the sensor and negative-mass couplings scaled independently.
double pipeline_added_noise(const Scenario &scenario, double omega, double sensor_scale,
                            double nmo_scale);

/// Per-frequency strength optimization over the scenario's pipeline
/// (closed forms when lossless and balanced, numeric otherwise). With
/// balanced couplings the negative-mass strength tracks the sensor so the
/// configured strength ratio is preserved; with unbalanced couplings
/// (g_bs != g_dc) the negative-mass oscillator stays pinned at its
/// configured strength and only the sensor coupling is searched.
OptimizeResult optimize_g(double omega, const Scenario &scenario);

SweepResult run_sweep(const Scenario &scenario);

/// Load the scenario list backing a named figure preset from the fixture
/// directory (fig2, fig3, fig4a, fig4b, fig5, sql-baseline).
std::vector<Scenario> preset(const std::string &name,
                             const std::string &preset_dir = CQNC_PRESET_DIR);

std::string emit(const SweepResult &result, EmitFormat format);

std::string format_report(const MatchingReport &report);

} // namespace cqnc
