// config.hpp - run configuration: flat [section] key = value files with units in key names

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phononcool/device.hpp"
#include "phononcool/errors.hpp"
#include "phononcool/model.hpp"

namespace phononcool::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Mode { evolve, stroboscopic, steady, sweep, device_report };
enum class OutputFormat { csv, json };

std::string_view mode_name(Mode m);
std::string_view format_name(OutputFormat f);

// Parsed text, before interpretation: section -> key -> raw value.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_ini(std::string_view text);

// Arithmetic on numbers and the constant pi: + - * / ^ and parentheses.
double evaluate_expression(std::string_view expr);

// Comma-separated list of expressions.
std::vector<double> evaluate_list(std::string_view text);

struct DeviceSection {
    DeviceParams device;
    KickTiming timing;
    double reset_multiplier = 10.0;
};

struct SweepSection {
    double n_th_min = 0.0;
    double n_th_max = 0.0;
    std::size_t n_th_count = 0;
    std::vector<double> ra_over_kappa;
    std::vector<double> p;
    std::optional<double> pulse_area;
    bool with_fidelity = false;

    std::vector<double> n_th_grid() const;  // log-spaced, inclusive bounds
};

enum class InitialState { thermal, vacuum, fock };

struct RunSection {
    double t_end_ra = 100.0;   // evolve horizon in units of 1/r_a
    std::size_t samples = 201;
    std::size_t n_kicks = 200;
    InitialState initial = InitialState::thermal;
    std::size_t fock_level = 0;
    std::optional<std::size_t> n_max;
    std::size_t jobs = 1;
};

struct RunConfig {
    Mode mode = Mode::steady;
    std::optional<DeviceSection> device;
    // [protocol] keys resolved to SI; each overrides the device-derived value.
    std::map<std::string, double> protocol_overrides;
    std::optional<SweepSection> sweep;
    RunSection run;
    std::string output_path;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    // Device-derived parameters (if any) with [protocol] overrides applied.
    ProtocolParams resolve_protocol() const;
    std::optional<QubitEnvironment> environment() const;

    void validate() const;
};

// Interprets parsed text for the given mode. Unknown sections or keys are errors.
RunConfig interpret(const RawConfig& raw, Mode mode);

RunConfig load_config_text(std::string_view text, Mode mode);
RunConfig load_config_file(const std::string& path, Mode mode);

// Built-in presets: "fig2", "fig3", "device-paper".
std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string_view> preset_names();

} // namespace phononcool::cli
