// Command-line front end: config-driven sweeps, figure presets and
// matching-condition checks for the cascaded force-sensing simulator.

#include "cqnc/errors.hpp"
#include "cqnc/scenarios.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw cqnc::ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw cqnc::ConfigError("cannot open output file '" + path + "'");
    }
    out << content;
}

cqnc::Scenario load_scenario(const std::string &path) {
    std::vector<std::string> warnings;
    cqnc::Scenario scenario = cqnc::parse_config(read_file(path), &warnings);
    for (const std::string &warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return scenario;
}

cqnc::EmitFormat parse_format(const std::string &name) {
    if (name == "csv") {
        return cqnc::EmitFormat::csv;
    }
    if (name == "json") {
        return cqnc::EmitFormat::json;
    }
    throw cqnc::ConfigError("unknown output format '" + name + "'");
}

int run_sweep_command(const std::string &config_path, const std::string &format,
                      const std::string &out_path) {
    const cqnc::Scenario scenario = load_scenario(config_path);
    const cqnc::SweepResult result = cqnc::run_sweep(scenario);
    const std::string text = cqnc::emit(result, parse_format(format));
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
    return kExitOk;
}

int run_preset_command(const std::string &name, const std::string &out_dir,
                       const std::string &format, const std::string &preset_dir) {
    const std::vector<cqnc::Scenario> scenarios =
        preset_dir.empty() ? cqnc::preset(name) : cqnc::preset(name, preset_dir);
    std::filesystem::create_directories(out_dir);
    const std::string extension = format == "json" ? ".json" : ".csv";
    int index = 0;
    for (const cqnc::Scenario &scenario : scenarios) {
        const cqnc::SweepResult result = cqnc::run_sweep(scenario);
        const std::string stem = scenario.label.empty()
                                     ? name + "_" + std::to_string(index)
                                     : scenario.label;
        const std::string path = out_dir + "/" + stem + extension;
        write_file(path, cqnc::emit(result, parse_format(format)));
        std::cout << "wrote " << path << "\n";
        ++index;
    }
    return kExitOk;
}

int run_check_command(const std::string &config_path) {
    const cqnc::Scenario scenario = load_scenario(config_path);
    const cqnc::OmsParams oms = scenario.oms_params();

    if (scenario.order != cqnc::SystemOrder::single_oms) {
        const cqnc::MatchingReport report =
            cqnc::check_matching(oms, scenario.effective_nmo_params(), 1e-6);
        std::cout << cqnc::format_report(report);
    } else {
        std::cout << "single sensor: no matching conditions to check\n";
    }

    if (scenario.oms.temperature_k && *scenario.oms.temperature_k > 0.0) {
        std::cout << "quantum cooperativity C_q = "
                  << cqnc::cooperativity(oms, *scenario.oms.temperature_k) << "\n";
    }
    std::cout << "mechanical quality factor Q_m = " << oms.q_m() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum-noise-limited force sensing in cascaded optomechanical "
                 "systems: noise spectra, quantum limits and figure presets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    std::string preset_name;
    std::string out_dir;
    std::string preset_dir;

    CLI::App *sweep = app.add_subcommand("sweep", "run one configured sweep");
    sweep->add_option("--config", config_path, "scenario JSON file")->required();
    sweep->add_option("--format", format, "output format (csv|json)");
    sweep->add_option("--out", out_path, "output path (stdout when omitted)");

    CLI::App *preset_cmd =
        app.add_subcommand("preset", "run the scenarios behind a named figure");
    preset_cmd
        ->add_option("name", preset_name,
                     "preset name (fig2|fig3|fig4a|fig4b|fig5|sql-baseline)")
        ->required();
    preset_cmd->add_option("--out", out_dir, "output directory")->required();
    preset_cmd->add_option("--format", format, "output format (csv|json)");
    preset_cmd->add_option("--preset-dir", preset_dir, "override the fixture directory");

    CLI::App *check =
        app.add_subcommand("check", "print matching residuals and cooperativity");
    check->add_option("--config", config_path, "scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            return run_sweep_command(config_path, format, out_path);
        }
        if (preset_cmd->parsed()) {
            return run_preset_command(preset_name, out_dir, format, preset_dir);
        }
        return run_check_command(config_path);
    } catch (const cqnc::ConfigError &err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const cqnc::NumericError &err) {
        std::cerr << "numeric error: " << err.what() << "\n";
        return kExitNumeric;
    }
}
