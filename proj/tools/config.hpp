#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pulsebench/adaptive.hpp"
#include "pulsebench/protocols.hpp"

namespace pulsebench::cli {

/// Rejected configuration text; `line` is 0 when the failure is not tied to one line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

struct OptimizeSettings {
    EnvTask task = EnvTask::SinglePulsePWC;
    EnvOptions env;
    CEMConfig cem;
};

struct RunConfig {
    ScenarioConfig scenario;
    OptimizeSettings optimize;
    double initial_epsilon = 0.05;  // PerturbedGHZ amplitude when that state is selected
};

std::vector<std::string> preset_names();
std::string preset_summary(std::string_view name);
RunConfig preset_config(std::string_view name);

/// Sectioned key=value text. The preset comes from [scenario] preset or, when absent, `default_preset`.
RunConfig parse_config(std::string_view text, std::string_view default_preset = {});

/// Every key with 17 significant digits; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

InitialStateSpec initial_state_from_tag(std::string_view tag, std::size_t n_qubits, double epsilon);
/// File-name-safe initial state tag ('+' becomes 'p').
std::string file_tag(const InitialStateSpec& spec);

/// Six initial states used by the shaped-pulse figures.
std::vector<InitialStateSpec> figure_initial_states();

}  // namespace pulsebench::cli
