#include "cqnc/scenarios.hpp"

#include "cqnc/constants.hpp"
#include "cqnc/errors.hpp"
#include "cqnc/linsys.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace cqnc {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMatchingReportTol = 1e-6;

[[noreturn]] void fail(const std::string &message) { throw ConfigError(message); }

const json &expect_object(const json &j, const std::string &path) {
    if (!j.is_object()) {
        fail("config: '" + path + "' must be an object");
    }
    return j;
}

void reject_unknown_keys(const json &j, const std::string &path,
                         std::initializer_list<const char *> allowed) {
    for (const auto &item : j.items()) {
        bool known = false;
        for (const char *key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail("config: unknown key '" + (path.empty() ? "" : path + ".") +
                 item.key() + "'");
        }
    }
}

double get_number(const json &j, const std::string &path, const char *key) {
    if (!j.contains(key)) {
        fail("config: missing key '" + path + "." + key + "'");
    }
    if (!j[key].is_number()) {
        fail("config: '" + path + "." + key + "' must be a number");
    }
    return j[key].get<double>();
}

double get_number_or(const json &j, const std::string &path, const char *key,
                     double fallback) {
    return j.contains(key) ? get_number(j, path, key) : fallback;
}

template <typename Enum>
Enum get_enum(const json &j, const std::string &path, const char *key,
              const std::map<std::string, Enum> &values, Enum fallback, bool required) {
    if (!j.contains(key)) {
        if (required) {
            fail("config: missing key '" + path + "." + key + "'");
        }
        return fallback;
    }
    if (!j[key].is_string()) {
        fail("config: '" + path + "." + key + "' must be a string");
    }
    const auto it = values.find(j[key].get<std::string>());
    if (it == values.end()) {
        std::string expected;
        for (const auto &[name, unused] : values) {
            expected += expected.empty() ? "'" + name + "'" : ", '" + name + "'";
        }
        fail("config: '" + path + "." + key + "' must be one of " + expected);
    }
    return it->second;
}

const std::map<std::string, SystemOrder> kOrderNames{
    {"nmo-oms", SystemOrder::nmo_oms},
    {"oms-nmo", SystemOrder::oms_nmo},
    {"single-oms", SystemOrder::single_oms},
    {"integrated-reference", SystemOrder::integrated_reference},
};
const std::map<std::string, GMode> kGModeNames{
    {"fixed", GMode::fixed},
    {"optimal", GMode::optimal},
};
const std::map<std::string, GridSpacing> kSpacingNames{
    {"log", GridSpacing::log},
    {"linear", GridSpacing::linear},
};
const std::map<std::string, Normalization> kNormalizationNames{
    {"dimensionless", Normalization::dimensionless},
    {"per-qm", Normalization::per_qm},
    {"physical", Normalization::physical},
};

template <typename Enum>
std::string enum_name(Enum value, const std::map<std::string, Enum> &values) {
    for (const auto &[name, candidate] : values) {
        if (candidate == value) {
            return name;
        }
    }
    throw std::logic_error("enum_name: unmapped value");
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

double thermal_n_for(const Scenario &s, const OmsParams &oms) {
    if (!s.include_thermal) {
        return 0.0;
    }
    return thermal_occupation(oms, *oms.temperature);
}

// Closed forms apply only where they are exact: resonant drive, balanced
// couplings and a fully lossless path.
bool closed_form_applicable(const Scenario &s) {
    const bool oms_lossless = s.oms.eta_esc == 1.0 && s.losses.eta_det == 1.0;
    if (s.order == SystemOrder::single_oms) {
        return oms_lossless;
    }
    if (!oms_lossless || !s.nmo || s.nmo->eta_esc != 1.0) {
        return false;
    }
    if (s.order != SystemOrder::integrated_reference && s.losses.eta_prop != 1.0) {
        return false;
    }
    return s.nmo->g_bs_hz == s.nmo->g_dc_hz;
}

// Added noise at OMS measurement strength `g_om`, dispatching between the
// closed forms and the state-space pipeline. With balanced couplings both
// systems scale together (the configured strength ratio is preserved);
// an unbalanced negative-mass oscillator keeps its configured strength.
double s_f_at_strength(const Scenario &s, double omega, double g_om) {
    const OmsParams oms = s.oms_params();
    const double scale = std::sqrt(g_om / meas_strength_om(omega, oms));

    if (!closed_form_applicable(s)) {
        const bool pinned_nmo = s.order != SystemOrder::single_oms &&
                                s.nmo->g_bs_hz != s.nmo->g_dc_hz;
        return pipeline_added_noise(s, omega, scale, pinned_nmo ? 1.0 : scale);
    }

    if (s.order == SystemOrder::single_oms) {
        return s_single(omega, oms, g_om, s.include_thermal);
    }
    const double n_th = thermal_n_for(s, oms);
    NmoParams nmo = s.effective_nmo_params();
    nmo.g_bs *= scale;
    nmo.g_dc *= scale;
    return n_th + s_cascaded(omega, oms, nmo, g_om);
}

std::vector<double> make_grid(const Scenario &s, double omega_m) {
    const int points = s.grid.points;
    std::vector<double> grid(points);
    if (s.grid.spacing == GridSpacing::log) {
        const double lo = std::log10(s.grid.min);
        const double hi = std::log10(s.grid.max);
        for (int i = 0; i < points; ++i) {
            grid[i] = omega_m * std::pow(10.0, lo + (hi - lo) * i / (points - 1));
        }
    } else {
        for (int i = 0; i < points; ++i) {
            grid[i] = omega_m * (s.grid.min + (s.grid.max - s.grid.min) * i / (points - 1));
        }
    }
    return grid;
}

} // namespace

OmsParams Scenario::oms_params() const {
    OmsParams p;
    p.omega_m = kTwoPi * oms.omega_m_hz;
    p.gamma_m = kTwoPi * oms.gamma_m_hz;
    p.kappa_om = kTwoPi * oms.kappa_om_hz;
    p.g = kTwoPi * oms.g_hz;
    p.eta_esc = oms.eta_esc;
    p.temperature = oms.temperature_k;
    p.mass = oms.mass_kg;
    return p;
}

NmoParams Scenario::nmo_params() const {
    if (!nmo) {
        throw ConfigError("config: missing key 'nmo' for a cascaded order");
    }
    NmoParams p;
    p.kappa_c = kTwoPi * nmo->kappa_c_hz;
    p.kappa_a = kTwoPi * nmo->kappa_a_hz;
    p.delta_a = kTwoPi * nmo->delta_a_hz;
    p.g_bs = kTwoPi * nmo->g_bs_hz;
    p.g_dc = kTwoPi * nmo->g_dc_hz;
    p.eta_esc = nmo->eta_esc;
    return p;
}

NmoParams Scenario::effective_nmo_params() const {
    NmoParams p = nmo_params();
    if (order == SystemOrder::integrated_reference) {
        const OmsParams sensor = oms_params();
        const double factor = sensor.g / p.g_a();
        p.kappa_c = sensor.kappa_om;
        p.g_bs *= factor;
        p.g_dc *= factor;
    }
    return p;
}

void Scenario::validate() const {
    oms_params().validate();
    if (oms.g_hz <= 0.0) {
        fail("config: 'oms.g_hz' must be positive");
    }
    if (order != SystemOrder::single_oms) {
        if (!nmo) {
            fail("config: missing key 'nmo' (required for order '" +
                 enum_name(order, kOrderNames) + "')");
        }
        nmo_params().validate();
        if (order == SystemOrder::integrated_reference && nmo_params().g_a() <= 0.0) {
            fail("config: integrated reference requires a positive total coupling "
                 "'nmo.g_bs_hz + nmo.g_dc_hz'");
        }
    }
    losses.validate();
    if (!(grid.min > 0.0) || !(grid.min < grid.max)) {
        fail("config: 'grid.min' must be positive and below 'grid.max'");
    }
    if (grid.points < 2) {
        fail("config: 'grid.points' must be at least 2");
    }
    if (include_thermal && !oms.temperature_k) {
        fail("config: missing key 'oms.temperature_k' (required when "
             "'include_thermal' is set)");
    }
    if (normalization == Normalization::physical && !oms.mass_kg) {
        fail("config: missing key 'oms.mass_kg' (required for physical "
             "normalization)");
    }
}

Scenario parse_config(const std::string &text, std::vector<std::string> *warnings) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error &err) {
        fail(std::string("config: invalid JSON: ") + err.what());
    }
    expect_object(root, "");
    reject_unknown_keys(root, "", {"order", "oms", "nmo", "losses", "grid", "g_mode",
                                   "normalization", "include_thermal", "label"});

    Scenario s;
    s.order = get_enum(root, "", "order", kOrderNames, SystemOrder::single_oms, true);

    if (!root.contains("oms")) {
        fail("config: missing key 'oms'");
    }
    const json &oms = expect_object(root["oms"], "oms");
    reject_unknown_keys(oms, "oms",
                        {"omega_m_hz", "gamma_m_hz", "kappa_om_hz", "g_hz", "eta_esc",
                         "temperature_k", "mass_kg"});
    s.oms.omega_m_hz = get_number(oms, "oms", "omega_m_hz");
    s.oms.gamma_m_hz = get_number(oms, "oms", "gamma_m_hz");
    s.oms.kappa_om_hz = get_number(oms, "oms", "kappa_om_hz");
    s.oms.g_hz = get_number(oms, "oms", "g_hz");
    s.oms.eta_esc = get_number_or(oms, "oms", "eta_esc", 1.0);
    if (oms.contains("temperature_k")) {
        s.oms.temperature_k = get_number(oms, "oms", "temperature_k");
    }
    if (oms.contains("mass_kg")) {
        s.oms.mass_kg = get_number(oms, "oms", "mass_kg");
    }

    if (root.contains("nmo")) {
        const json &nmo = expect_object(root["nmo"], "nmo");
        reject_unknown_keys(nmo, "nmo", {"kappa_c_hz", "kappa_a_hz", "delta_a_hz",
                                         "g_bs_hz", "g_dc_hz", "eta_esc"});
        Scenario::NmoConfig cfg;
        cfg.kappa_c_hz = get_number(nmo, "nmo", "kappa_c_hz");
        cfg.kappa_a_hz = get_number(nmo, "nmo", "kappa_a_hz");
        cfg.delta_a_hz = get_number(nmo, "nmo", "delta_a_hz");
        cfg.g_bs_hz = get_number(nmo, "nmo", "g_bs_hz");
        cfg.g_dc_hz = get_number(nmo, "nmo", "g_dc_hz");
        cfg.eta_esc = get_number_or(nmo, "nmo", "eta_esc", 1.0);
        s.nmo = cfg;
    }

    if (root.contains("losses")) {
        const json &losses = expect_object(root["losses"], "losses");
        reject_unknown_keys(losses, "losses", {"eta_prop", "eta_det"});
        s.losses.eta_prop = get_number_or(losses, "losses", "eta_prop", 1.0);
        s.losses.eta_det = get_number_or(losses, "losses", "eta_det", 1.0);
    }

    if (root.contains("grid")) {
        const json &grid = expect_object(root["grid"], "grid");
        reject_unknown_keys(grid, "grid", {"min", "max", "points", "spacing"});
        s.grid.min = get_number_or(grid, "grid", "min", s.grid.min);
        s.grid.max = get_number_or(grid, "grid", "max", s.grid.max);
        if (grid.contains("points")) {
            if (!grid["points"].is_number_integer()) {
                fail("config: 'grid.points' must be an integer");
            }
            s.grid.points = grid["points"].get<int>();
        }
        s.grid.spacing =
            get_enum(grid, "grid", "spacing", kSpacingNames, GridSpacing::log, false);
    }

    s.g_mode = get_enum(root, "", "g_mode", kGModeNames, GMode::optimal, false);
    s.normalization = get_enum(root, "", "normalization", kNormalizationNames,
                               Normalization::dimensionless, false);
    if (root.contains("include_thermal")) {
        if (!root["include_thermal"].is_boolean()) {
            fail("config: 'include_thermal' must be a boolean");
        }
        s.include_thermal = root["include_thermal"].get<bool>();
    }
    if (root.contains("label")) {
        if (!root["label"].is_string()) {
            fail("config: 'label' must be a string");
        }
        s.label = root["label"].get<std::string>();
    }

    try {
        s.validate();
    } catch (const std::invalid_argument &err) {
        fail(std::string("config: ") + err.what());
    }

    if (warnings) {
        if (s.oms.gamma_m_hz >= s.oms.omega_m_hz) {
            warnings->push_back("oms.gamma_m_hz is not small against oms.omega_m_hz; "
                                "the oscillator is overdamped");
        }
        if (s.nmo && s.nmo->delta_a_hz >= 0.0) {
            warnings->push_back("nmo.delta_a_hz is non-negative; the ancilla does not "
                                "act as a negative-mass reference");
        }
    }
    return s;
}

json scenario_to_json(const Scenario &s) {
    json root;
    root["order"] = enum_name(s.order, kOrderNames);
    json oms;
    oms["omega_m_hz"] = s.oms.omega_m_hz;
    oms["gamma_m_hz"] = s.oms.gamma_m_hz;
    oms["kappa_om_hz"] = s.oms.kappa_om_hz;
    oms["g_hz"] = s.oms.g_hz;
    oms["eta_esc"] = s.oms.eta_esc;
    if (s.oms.temperature_k) {
        oms["temperature_k"] = *s.oms.temperature_k;
    }
    if (s.oms.mass_kg) {
        oms["mass_kg"] = *s.oms.mass_kg;
    }
    root["oms"] = oms;
    if (s.nmo) {
        json nmo;
        nmo["kappa_c_hz"] = s.nmo->kappa_c_hz;
        nmo["kappa_a_hz"] = s.nmo->kappa_a_hz;
        nmo["delta_a_hz"] = s.nmo->delta_a_hz;
        nmo["g_bs_hz"] = s.nmo->g_bs_hz;
        nmo["g_dc_hz"] = s.nmo->g_dc_hz;
        nmo["eta_esc"] = s.nmo->eta_esc;
        root["nmo"] = nmo;
    }
    root["losses"] = {{"eta_prop", s.losses.eta_prop}, {"eta_det", s.losses.eta_det}};
    root["grid"] = {{"min", s.grid.min},
                    {"max", s.grid.max},
                    {"points", s.grid.points},
                    {"spacing", enum_name(s.grid.spacing, kSpacingNames)}};
    root["g_mode"] = enum_name(s.g_mode, kGModeNames);
    root["normalization"] = enum_name(s.normalization, kNormalizationNames);
    root["include_thermal"] = s.include_thermal;
    if (!s.label.empty()) {
        root["label"] = s.label;
    }
    return root;
}

double pipeline_added_noise(const Scenario &s, double omega, double coupling_scale) {
    return pipeline_added_noise(s, omega, coupling_scale, coupling_scale);
}

double pipeline_added_noise(const Scenario &s, double omega, double sensor_scale,
                            double nmo_scale) {
    OmsParams oms = s.oms_params();
    oms.g *= sensor_scale;
    const double n_th = thermal_n_for(s, s.oms_params());

    if (s.order == SystemOrder::single_oms) {
        TransferSet t = transfer(build_oms(oms), omega);
        t = apply_loss(t, s.losses.eta_det);
        return added_force_noise(t, n_th);
    }

    NmoParams nmo = s.effective_nmo_params();
    nmo.g_bs *= nmo_scale;
    nmo.g_dc *= nmo_scale;
    const double eta_prop =
        s.order == SystemOrder::integrated_reference ? 1.0 : s.losses.eta_prop;

    TransferSet total;
    if (s.order == SystemOrder::oms_nmo) {
        const TransferSet first = apply_loss(transfer(build_oms(oms), omega), eta_prop);
        total = cascade(first, transfer(build_nmo(nmo), omega));
    } else {
        const TransferSet first = apply_loss(transfer(build_nmo(nmo), omega), eta_prop);
        total = cascade(first, transfer(build_oms(oms), omega));
    }
    total = apply_loss(total, s.losses.eta_det);
    return added_force_noise(total, n_th);
}

OptimizeResult optimize_g(double omega, const Scenario &s) {
    const OmsParams oms = s.oms_params();
    const auto objective = [&](double g_om) { return s_f_at_strength(s, omega, g_om); };
    return minimize_strength(objective, oms.strength_peak());
}

SweepResult run_sweep(const Scenario &s) {
    s.validate();
    const OmsParams oms = s.oms_params();

    double norm_factor = 1.0;
    if (s.normalization == Normalization::per_qm) {
        norm_factor = 1.0 / oms.q_m();
    } else if (s.normalization == Normalization::physical) {
        norm_factor = kHbar * (*oms.mass) * oms.gamma_m * oms.omega_m;
    }

    SweepResult result;
    result.scenario = s;
    result.rows.reserve(s.grid.points);

    for (const double omega : make_grid(s, oms.omega_m)) {
        SweepRow row;
        row.omega_over_omega_m = omega / oms.omega_m;
        double s_f = 0.0;
        try {
            if (s.g_mode == GMode::optimal) {
                const OptimizeResult opt = optimize_g(omega, s);
                s_f = opt.s_min;
                row.g_used = opt.g_opt;
            } else {
                row.g_used = meas_strength_om(omega, oms);
                s_f = s_f_at_strength(s, omega, row.g_used);
            }
        } catch (const NumericError &err) {
            throw NumericError(std::string(err.what()) + " [at omega/omega_m = " +
                               format_double(row.omega_over_omega_m) + "]");
        }
        const double sql = s_sql(omega, oms);
        row.ratio = s_f / sql;
        row.s_f = s_f * norm_factor;
        row.s_sql = sql * norm_factor;
        row.s_cqnc = s_cqnc(omega, oms) * norm_factor;
        if (!std::isfinite(row.s_f) || !std::isfinite(row.ratio) ||
            !std::isfinite(row.g_used)) {
            throw NumericError("run_sweep: non-finite result at omega/omega_m = " +
                               format_double(row.omega_over_omega_m));
        }
        result.rows.push_back(row);
    }

    if (s.order != SystemOrder::single_oms) {
        result.matching =
            check_matching(oms, s.effective_nmo_params(), kMatchingReportTol);
    }
    if (s.oms.temperature_k && *s.oms.temperature_k > 0.0) {
        result.c_q = cooperativity(oms, *s.oms.temperature_k);
    }
    result.timestamp = utc_timestamp();
    result.version = kVersion;
    return result;
}

std::vector<Scenario> preset(const std::string &name, const std::string &preset_dir) {
    static const std::map<std::string, std::vector<std::string>> kPresets{
        {"sql-baseline", {"sql_baseline.json"}},
        {"fig2", {"fig2_kappa_a_0p1.json", "fig2_kappa_a_100.json"}},
        {"fig3", {"fig3_eps_delta_0p9.json", "fig3_delta_0p9.json", "fig3_eps_0p9.json"}},
        {"fig4a", {"fig4a_nmo_oms.json", "fig4a_oms_nmo.json"}},
        {"fig4b", {"fig4b_nmo_oms.json", "fig4b_oms_nmo.json"}},
        {"fig5", {"fig5_nmo_oms.json", "fig5_oms_nmo.json", "fig5_integrated.json"}},
    };
    const auto it = kPresets.find(name);
    if (it == kPresets.end()) {
        fail("preset: unknown preset '" + name + "'");
    }

    std::vector<Scenario> scenarios;
    for (const std::string &file : it->second) {
        const std::string path = preset_dir + "/" + file;
        std::ifstream in(path);
        if (!in) {
            fail("preset: cannot open fixture '" + path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        scenarios.push_back(parse_config(buffer.str()));
    }
    return scenarios;
}

std::string emit(const SweepResult &result, EmitFormat format) {
    if (format == EmitFormat::csv) {
        std::string out = "omega_over_omega_m,S_F,S_SQL,S_CQNC,ratio,G_opt\n";
        for (const SweepRow &row : result.rows) {
            out += format_double(row.omega_over_omega_m) + "," + format_double(row.s_f) +
                   "," + format_double(row.s_sql) + "," + format_double(row.s_cqnc) +
                   "," + format_double(row.ratio) + "," + format_double(row.g_used) +
                   "\n";
        }
        return out;
    }

    json root;
    root["scenario"] = scenario_to_json(result.scenario);
    json metadata;
    metadata["timestamp"] = result.timestamp;
    metadata["version"] = result.version;
    if (result.c_q) {
        metadata["c_q"] = *result.c_q;
    }
    if (result.matching) {
        const MatchingReport &r = *result.matching;
        const auto entry = [](const MatchingReport::Entry &e) {
            return json{{"residual", e.residual}, {"ok", e.ok}};
        };
        metadata["matching"] = {{"tol", r.tol},
                                {"coupling_balance", entry(r.coupling_balance)},
                                {"meas_strength", entry(r.meas_strength)},
                                {"ancilla_detuning", entry(r.ancilla_detuning)},
                                {"ancilla_linewidth", entry(r.ancilla_linewidth)},
                                {"sideband_resolution", entry(r.sideband_resolution)},
                                {"quality_factor", entry(r.quality_factor)}};
    }
    root["metadata"] = metadata;
    json rows = json::array();
    for (const SweepRow &row : result.rows) {
        rows.push_back({{"omega_over_omega_m", row.omega_over_omega_m},
                        {"S_F", row.s_f},
                        {"S_SQL", row.s_sql},
                        {"S_CQNC", row.s_cqnc},
                        {"ratio", row.ratio},
                        {"G_opt", row.g_used}});
    }
    root["rows"] = rows;
    return root.dump(2) + "\n";
}

std::string format_report(const MatchingReport &report) {
    const auto line = [&](const char *name, const MatchingReport::Entry &e) {
        char buffer[96];
        std::snprintf(buffer, sizeof(buffer), "  %-22s %.6e  %s\n", name, e.residual,
                      e.ok ? "ok" : "MISMATCH");
        return std::string(buffer);
    };
    char header[48];
    std::snprintf(header, sizeof(header), "matching residuals (tol %.3g):\n", report.tol);
    std::string out = header;
    out += line("coupling balance", report.coupling_balance);
    out += line("measurement strength", report.meas_strength);
    out += line("ancilla detuning", report.ancilla_detuning);
    out += line("ancilla linewidth", report.ancilla_linewidth);
    out += line("sideband resolution", report.sideband_resolution);
    out += line("quality factor", report.quality_factor);
    return out;
}

} // namespace cqnc
