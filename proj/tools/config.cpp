#include "config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace pulsebench::cli {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

// Presets ---------------------------------------------------------------------

struct Preset {
    const char* name;
    const char* summary;
    void (*apply)(RunConfig&);
};

void shaped_base(RunConfig& c) {
    auto& s = c.scenario;
    s.g = 0.5;
    s.omega_q = {4.8, 4.8};
    s.gamma1 = s.gamma_phi = 0.001;
    s.drive_amplitude = 1.0;
    s.omega_d = 5.0;
    s.drive_phase = 0.0;
    s.noise = LorentzianNoiseSpec{1000, 0.2, 0.5, 0.5, -5.0, 5.0, 0};
    s.initial_state = BellState{BellKind::PhiPlus};
}

void fig1(RunConfig& c) {
    shaped_base(c);
    auto& s = c.scenario;
    s.protocol = ProtocolKind::SinglePulse;
    s.t_c = 7.0;
    s.pulse_duration = 15.0;
    s.t_end = 40.0;
    s.n_steps = 400;
    c.optimize.task = EnvTask::SinglePulsePWC;
}

void fig3(RunConfig& c) {
    shaped_base(c);
    auto& s = c.scenario;
    s.protocol = ProtocolKind::MultiPulse;
    s.pulse_duration = 5.0;
    s.n_pulses = 4;
    s.t_c = 7.5;
    s.spacing = 7.5;
    s.noise.gamma_hwhm = 0.1;
    s.t_end = 40.0;
    s.n_steps = 400;
    c.optimize.task = EnvTask::MultiPulsePWC;
}

void fig5(RunConfig& c) {
    shaped_base(c);
    auto& s = c.scenario;
    s.protocol = ProtocolKind::SequentialLinear;
    s.pulse_duration = 15.0;
    s.n_pulses = 3;
    s.t_c = 10.0;
    s.spacing = 5.0;
    s.drive_amplitude_z = 1.0;
    s.t_end = 50.0;
    s.n_steps = 100;
    c.optimize.task = EnvTask::PolarizedLinear;
}

void fig7(RunConfig& c) {
    fig5(c);
    c.scenario.protocol = ProtocolKind::SequentialCircular;
    c.scenario.n_pulses = 2;
    c.optimize.task = EnvTask::StepwiseCircular;
}

void fig9(RunConfig& c) {
    auto& s = c.scenario;
    s.protocol = ProtocolKind::HybridQECDD;
    s.g = 0.5;
    s.omega_q = {2.0, 2.0};
    s.gamma1 = s.gamma_phi = 0.05;
    s.noise = LorentzianNoiseSpec{1000, 0.2, 0.5, 0.5, -5.0, 5.0, 0};
    s.tau_p = 0.15;
    s.m_free = 2.0;
    s.t_end = 42.0;
    s.n_steps = 140;
    s.qec = QECParams{0.8, 0.3, 0.01};
    s.pulse_error_sigma = 0.05;
    s.detuning_relative = 0.01;
    c.initial_epsilon = 0.05;
    s.initial_state = PerturbedGhzState{2, c.initial_epsilon, 0};
    c.optimize.task = EnvTask::DDSequence;
}

void fig10(RunConfig& c) {
    auto& s = c.scenario;
    s.protocol = ProtocolKind::FloquetReference;
    s.g = 1.2;
    s.omega_q = {3.5, 3.5};
    s.gamma1 = s.gamma_phi = 0.03;
    s.noise = LorentzianNoiseSpec{1000, 0.05, 0.5, 0.5, 0.001, 10.0, 0};
    s.floquet_omega = 5.0;
    s.t_end = 100.0;
    s.n_steps = 100;
    s.amplitude_error = 0.01;
    s.detuning_relative = 0.01;
    s.harmonic_weights = {1.0, 0.5, 0.3};
    s.initial_state = BellState{BellKind::PhiPlus};
    c.optimize.task = EnvTask::FloquetAdaptive;
}

void fig11(RunConfig& c) {
    auto& s = c.scenario;
    s.protocol = ProtocolKind::GenKnillDD;
    s.g = 0.5;
    s.omega_q = {2.0, 2.0};
    s.gamma1 = s.gamma_phi = 0.01;
    s.gen_pulse_duration = 0.05;
    s.t_end = 60.0;
    s.n_steps = 40;
    s.pulse_error_sigma = 0.01;
    s.detuning_relative = 0.01;
    s.noise = LorentzianNoiseSpec{1000, 0.01, 0.5, 0.5, -10.0, 10.0, 0};
    s.initial_state = SeparableState{SeparableLabel::ZeroZero};
    c.optimize.task = EnvTask::GenerationShaped;
    c.optimize.env.goal = RewardGoal::Generation;
    c.optimize.env.horizon = 15;
    c.optimize.cem.population = 64;
    c.optimize.cem.iterations = 40;
}

void fig12(RunConfig& c) {
    c.scenario.walk = WalkConfig{};
    c.optimize.task = EnvTask::QuantumWalk;
}

const std::array<Preset, 12> kPresets{{
    {"fig1", "single corrected pulse, six shapes x six initial states", fig1},
    {"fig2", "fig1 with per-step pulse amplitudes in the control window [10, 30]", fig1},
    {"fig3", "four superposed I/Q pulses", fig3},
    {"fig4", "fig3 with per-step amplitudes of the four pulses", fig3},
    {"fig5", "sequential X, Y, Z linearly polarized pulses", fig5},
    {"fig6", "fig5 with single-shot polarization amplitudes", fig5},
    {"fig7", "sequential left then right circularly polarized pulses", fig7},
    {"fig8", "fig7 with per-step circular amplitudes", fig7},
    {"fig9", "decoupling benchmarks (DCG-2, UDD-16, CP, hybrid QEC-DD)", fig9},
    {"fig10", "Floquet reference, optimized fixed and Lyapunov drives", fig10},
    {"fig11", "entanglement generation from |00> (no control, heuristic, Knill DD)", fig11},
    {"fig12", "disordered quantum walk toward x = -3", fig12},
}};

const Preset& find_preset(std::string_view name) {
    for (const auto& p : kPresets)
        if (name == p.name) return p;
    throw ConfigError(0, "unknown preset '" + std::string(name) + "'");
}

// Value conversion ---------------------------------------------------------------

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
    const char* begin = v.data();
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(begin, &end);
    if (v.empty() || end != begin + v.size() || errno == ERANGE || !std::isfinite(d)) {
        throw std::invalid_argument("expected a finite number, got '" + v + "'");
    }
    return d;
}

long long to_integer(const std::string& v) {
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) throw std::invalid_argument("expected an integer, got '" + v + "'");
    return x;
}

int to_int(const std::string& v) {
    const long long x = to_integer(v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("integer out of range: '" + v + "'");
    }
    return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
    }
    return x;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
    if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
    return out;
}

template <class E, std::size_t N>
E to_enum(const std::string& v, const std::array<std::pair<E, const char*>, N>& table) {
    for (const auto& [e, tag] : table)
        if (v == tag) return e;
    std::string allowed;
    for (const auto& [e, tag] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(tag);
    throw std::invalid_argument("unknown value '" + v + "' (expected one of " + allowed + ")");
}

template <class E, std::size_t N>
std::string from_enum(E e, const std::array<std::pair<E, const char*>, N>& table) {
    for (const auto& [x, tag] : table)
        if (x == e) return tag;
    throw std::logic_error("enum value without tag");
}

const std::array<std::pair<CombineMode, const char*>, 2> kCombine{{{CombineMode::Superpose, "superpose"},
                                                                    {CombineMode::Sequential, "sequential"}}};
const std::array<std::pair<QecStrengthRule, const char*>, 2> kQecRule{
    {{QecStrengthRule::FidelityScaled, "fidelity_scaled"}, {QecStrengthRule::Constant, "constant"}}};
const std::array<std::pair<RewardGoal, const char*>, 2> kGoal{
    {{RewardGoal::Preservation, "preservation"}, {RewardGoal::Generation, "generation"}}};
const std::array<std::pair<FloquetRewardVariant, const char*>, 2> kVariant{
    {{FloquetRewardVariant::Caption, "caption"}, {FloquetRewardVariant::Body, "body"}}};
const std::array<std::pair<BoundaryMode, const char*>, 2> kBoundary{
    {{BoundaryMode::AsWritten, "as_written"}, {BoundaryMode::Cyclic, "cyclic"}}};

// Key table ------------------------------------------------------------------------

/// Intermediate values resolved after all keys are read.
struct Pending {
    std::string initial_state;
};

struct Key {
    const char* section;
    const char* name;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, Pending&, const std::string&)> set;
};

#define PB_DOUBLE(sec, key, field)                                                  \
    Key {                                                                           \
        sec, key, [](const RunConfig& c) { return fmt(c.field); },                  \
            [](RunConfig& c, Pending&, const std::string& v) { c.field = to_double(v); } \
    }
#define PB_INT(sec, key, field)                                                          \
    Key {                                                                                \
        sec, key, [](const RunConfig& c) { return std::to_string(c.field); },            \
            [](RunConfig& c, Pending&, const std::string& v) { c.field = to_int(v); }    \
    }
#define PB_BOOL(sec, key, field)                                                              \
    Key {                                                                                     \
        sec, key, [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }, \
            [](RunConfig& c, Pending&, const std::string& v) { c.field = to_bool(v); }        \
    }
#define PB_ENUM(sec, key, field, table)                                                        \
    Key {                                                                                      \
        sec, key, [](const RunConfig& c) { return from_enum(c.field, table); },                \
            [](RunConfig& c, Pending&, const std::string& v) { c.field = to_enum(v, table); } \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        Key{"scenario", "protocol", [](const RunConfig& c) { return protocol_tag(c.scenario.protocol); },
            [](RunConfig& c, Pending&, const std::string& v) { c.scenario.protocol = protocol_from_tag(v); }},
        Key{"scenario", "seed", [](const RunConfig& c) { return std::to_string(c.scenario.seed); },
            [](RunConfig& c, Pending&, const std::string& v) { c.scenario.seed = to_u64(v); }},

        Key{"system", "n_qubits", [](const RunConfig& c) { return std::to_string(c.scenario.n_qubits); },
            [](RunConfig& c, Pending&, const std::string& v) {
                const int n = to_int(v);
                if (n < 2 || n > 4) throw std::invalid_argument("n_qubits must lie in [2, 4]");
                c.scenario.n_qubits = static_cast<std::size_t>(n);
            }},
        Key{"system", "omega_q", [](const RunConfig& c) { return fmt_list(c.scenario.omega_q); },
            [](RunConfig& c, Pending&, const std::string& v) { c.scenario.omega_q = to_list(v); }},
        PB_DOUBLE("system", "g", scenario.g),
        PB_DOUBLE("system", "gamma1", scenario.gamma1),
        PB_DOUBLE("system", "gamma_phi", scenario.gamma_phi),
        Key{"system", "initial_state", [](const RunConfig& c) { return initial_state_tag(c.scenario.initial_state); },
            [](RunConfig&, Pending& p, const std::string& v) { p.initial_state = v; }},
        PB_DOUBLE("system", "initial_epsilon", initial_epsilon),

        PB_DOUBLE("time", "t_end", scenario.t_end),
        PB_INT("time", "n_steps", scenario.n_steps),

        PB_BOOL("noise", "enabled", scenario.noise_enabled),
        PB_INT("noise", "m", scenario.noise.m),
        PB_DOUBLE("noise", "s0", scenario.noise.s0),
        PB_DOUBLE("noise", "omega_c", scenario.noise.omega_c),
        PB_DOUBLE("noise", "gamma", scenario.noise.gamma_hwhm),
        PB_DOUBLE("noise", "omega_min", scenario.noise.omega_min),
        PB_DOUBLE("noise", "omega_max", scenario.noise.omega_max),

        Key{"pulse", "shape", [](const RunConfig& c) { return c.scenario.shape.tag(); },
            [](RunConfig& c, Pending&, const std::string& v) {
                const auto s = PulseShape::from_tag(v);
                c.scenario.shape.kind = s.kind;
            }},
        PB_INT("pulse", "sgp_exponent", scenario.shape.sgp_exponent),
        Key{"pulse", "agp_asymmetry",
            [](const RunConfig& c) { return fmt(c.scenario.shape.agp_asymmetry.value_or(0.0)); },
            [](RunConfig& c, Pending&, const std::string& v) {
                const double x = to_double(v);
                if (x == 0.0) {
                    c.scenario.shape.agp_asymmetry.reset();
                } else {
                    c.scenario.shape.agp_asymmetry = x;
                }
            }},
        PB_DOUBLE("pulse", "t_c", scenario.t_c),
        PB_DOUBLE("pulse", "duration", scenario.pulse_duration),
        PB_DOUBLE("pulse", "spacing", scenario.spacing),
        PB_INT("pulse", "n_pulses", scenario.n_pulses),
        PB_ENUM("pulse", "combine", scenario.multi_combine, kCombine),
        PB_DOUBLE("pulse", "amplitude", scenario.drive_amplitude),
        PB_DOUBLE("pulse", "amplitude_z", scenario.drive_amplitude_z),
        PB_DOUBLE("pulse", "omega_d", scenario.omega_d),
        PB_DOUBLE("pulse", "phase", scenario.drive_phase),
        PB_DOUBLE("pulse", "control_start", scenario.control_start),
        PB_DOUBLE("pulse", "control_end", scenario.control_end),

        PB_DOUBLE("errors", "detuning_relative", scenario.detuning_relative),
        PB_DOUBLE("errors", "amplitude_error", scenario.amplitude_error),
        PB_DOUBLE("errors", "pulse_error_sigma", scenario.pulse_error_sigma),

        PB_DOUBLE("decoupling", "tau_p", scenario.tau_p),
        PB_DOUBLE("decoupling", "m_free", scenario.m_free),
        PB_INT("decoupling", "udd_pulses", scenario.udd_pulses),
        PB_DOUBLE("decoupling", "p_qec", scenario.qec.p_qec),
        PB_DOUBLE("decoupling", "s_max", scenario.qec.s_max),
        PB_DOUBLE("decoupling", "dead_time", scenario.qec.dead_time),
        PB_ENUM("decoupling", "qec_rule", scenario.qec_rule, kQecRule),

        PB_DOUBLE("floquet", "omega", scenario.floquet_omega),
        PB_DOUBLE("floquet", "a_pulse", scenario.a_pulse),
        PB_DOUBLE("floquet", "envelope_width", scenario.envelope_width),
        Key{"floquet", "harmonic_weights", [](const RunConfig& c) { return fmt_list(c.scenario.harmonic_weights); },
            [](RunConfig& c, Pending&, const std::string& v) { c.scenario.harmonic_weights = to_list(v); }},
        PB_INT("floquet", "trials", scenario.trials),

        PB_DOUBLE("generation", "pulse_duration", scenario.gen_pulse_duration),
        PB_INT("generation", "knill_pulses", scenario.knill_pulses),

        PB_INT("walk", "n_sites", scenario.walk.n_sites),
        PB_INT("walk", "n_steps", scenario.walk.n_steps),
        PB_DOUBLE("walk", "dt_step", scenario.walk.dt_step),
        PB_DOUBLE("walk", "omega0", scenario.walk.omega0),
        PB_INT("walk", "x_target", scenario.walk.x_target),
        PB_DOUBLE("walk", "pulse_duration", scenario.walk.pulse_duration),
        PB_DOUBLE("walk", "disorder", scenario.walk.disorder_strength),
        PB_BOOL("walk", "noise_enabled", scenario.walk.noise_enabled),
        PB_INT("walk", "noise_m", scenario.walk.noise.m),
        PB_DOUBLE("walk", "noise_s0", scenario.walk.noise.s0),
        PB_DOUBLE("walk", "noise_omega_c", scenario.walk.noise.omega_c),
        PB_DOUBLE("walk", "noise_gamma", scenario.walk.noise.gamma_hwhm),
        PB_DOUBLE("walk", "noise_omega_min", scenario.walk.noise.omega_min),
        PB_DOUBLE("walk", "noise_omega_max", scenario.walk.noise.omega_max),
        PB_DOUBLE("walk", "gamma1", scenario.walk.gamma1),
        PB_DOUBLE("walk", "gamma_phi", scenario.walk.gamma_phi),
        PB_ENUM("walk", "boundary", scenario.walk.boundary, kBoundary),

        PB_DOUBLE("integrator", "rtol", scenario.rtol),
        PB_DOUBLE("integrator", "atol", scenario.atol),

        Key{"optimize", "task", [](const RunConfig& c) { return env_task_tag(c.optimize.task); },
            [](RunConfig& c, Pending&, const std::string& v) { c.optimize.task = env_task_from_tag(v); }},
        PB_ENUM("optimize", "goal", optimize.env.goal, kGoal),
        PB_ENUM("optimize", "floquet_variant", optimize.env.floquet_variant, kVariant),
        PB_INT("optimize", "horizon", optimize.env.horizon),
        PB_INT("optimize", "population", optimize.cem.population),
        PB_DOUBLE("optimize", "elite_fraction", optimize.cem.elite_fraction),
        PB_INT("optimize", "iterations", optimize.cem.iterations),
        PB_DOUBLE("optimize", "initial_sigma", optimize.cem.initial_sigma),
        PB_DOUBLE("optimize", "sigma_floor", optimize.cem.sigma_floor),
        PB_DOUBLE("optimize", "smoothing", optimize.cem.smoothing),
    };
    return table;
}

#undef PB_DOUBLE
#undef PB_INT
#undef PB_BOOL
#undef PB_ENUM

struct Line {
    int number;
    std::string section;
    std::string key;
    std::string value;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> out;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(number, "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(number, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(number, "expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(number, "missing key before '='");
        if (section.empty()) throw ConfigError(number, "key '" + key + "' appears before any [section]");
        out.push_back({number, section, key, trim(std::string_view(line).substr(eq + 1))});
    }
    return out;
}

/// Line of the last file key the validation message points at (0 when none does).
int blame_line(const std::string& message, const std::vector<Line>& lines) {
    int best = 0;
    for (const auto& l : lines) {
        const bool named = message.find(l.key) != std::string::npos;
        const bool overlap = message.find("sequential windows") != std::string::npos &&
                             l.section == "pulse" && (l.key == "combine" || l.key == "spacing" || l.key == "duration" ||
                                                      l.key == "n_pulses" || l.key == "t_c");
        if (named || overlap) best = l.number;
    }
    return best;
}

void finalize(RunConfig& c, const Pending& p, int state_line, const std::vector<Line>& lines = {}) {
    auto& s = c.scenario;
    if (!p.initial_state.empty()) {
        try {
            s.initial_state = initial_state_from_tag(p.initial_state, s.n_qubits, c.initial_epsilon);
        } catch (const std::exception& e) {
            throw ConfigError(state_line, e.what());
        }
    } else if (auto* ghz = std::get_if<PerturbedGhzState>(&s.initial_state)) {
        ghz->epsilon = c.initial_epsilon;
        ghz->n_qubits = s.n_qubits;
    } else if (auto* g = std::get_if<GhzState>(&s.initial_state)) {
        g->n_qubits = s.n_qubits;
    }
    s.walk.shape = s.shape;
    try {
        s.validate();
        c.optimize.cem.validate();
        if (c.optimize.env.horizon < 0) throw std::invalid_argument("optimize horizon must be >= 0");
    } catch (const std::exception& e) {
        throw ConfigError(blame_line(e.what(), lines), std::string("invalid configuration: ") + e.what());
    }
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

std::string preset_summary(std::string_view name) { return find_preset(name).summary; }

RunConfig preset_config(std::string_view name) {
    const auto& p = find_preset(name);
    RunConfig c;
    c.scenario.preset = p.name;
    p.apply(c);
    finalize(c, Pending{}, 0);
    return c;
}

RunConfig parse_config(std::string_view text, std::string_view default_preset) {
    const auto lines = tokenize(text);
    std::string preset(default_preset);
    int preset_line = 0;
    for (const auto& l : lines) {
        if (l.section == "scenario" && l.key == "preset") {
            if (preset_line > 0) throw ConfigError(l.number, "duplicate key 'preset'");
            preset = l.value;
            preset_line = l.number;
        }
    }
    if (preset.empty()) throw ConfigError(0, "missing required key [scenario] preset (or pass --preset)");
    RunConfig c;
    try {
        c = preset_config(preset);
    } catch (const ConfigError& e) {
        throw ConfigError(preset_line, e.what());
    }

    Pending pending;
    int state_line = 0;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& l : lines) {
        if (l.section == "scenario" && l.key == "preset") continue;
        const auto it = std::find_if(keys().begin(), keys().end(),
                                     [&](const Key& k) { return l.section == k.section && l.key == k.name; });
        if (it == keys().end()) throw ConfigError(l.number, "unknown key '" + l.key + "' in [" + l.section + "]");
        if (!seen.insert({l.section, l.key}).second) {
            throw ConfigError(l.number, "duplicate key '" + l.key + "' in [" + l.section + "]");
        }
        try {
            it->set(c, pending, l.value);
        } catch (const std::exception& e) {
            throw ConfigError(l.number, l.section + "." + l.key + ": " + e.what());
        }
        if (l.key == "initial_state") state_line = l.number;
    }
    finalize(c, pending, state_line, lines);
    return c;
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream os;
    os << "[scenario]\npreset = " << config.scenario.preset << "\n";
    std::string section = "scenario";
    for (const auto& k : keys()) {
        if (section != k.section) {
            section = k.section;
            os << "\n[" << section << "]\n";
        }
        os << k.name << " = " << k.get(config) << "\n";
    }
    return os.str();
}

InitialStateSpec initial_state_from_tag(std::string_view tag, std::size_t n_qubits, double epsilon) {
    for (const auto& spec : figure_initial_states()) {
        if (tag != initial_state_tag(spec)) continue;
        if (n_qubits != 2) throw std::invalid_argument("initial state '" + std::string(tag) + "' needs two qubits");
        return spec;
    }
    if (tag == "ghz") return GhzState{n_qubits};
    if (tag == "perturbed_ghz") {
        if (!(epsilon >= 0.0)) throw std::invalid_argument("initial_epsilon must be >= 0");
        return PerturbedGhzState{n_qubits, epsilon, 0};
    }
    throw std::invalid_argument("unknown initial state '" + std::string(tag) +
                                "' (expected 00, +0, 0+, ++, phi+, psi+, ghz, perturbed_ghz)");
}

std::string file_tag(const InitialStateSpec& spec) {
    std::string t = initial_state_tag(spec);
    std::replace(t.begin(), t.end(), '+', 'p');
    return t;
}

std::vector<InitialStateSpec> figure_initial_states() {
    return {SeparableState{SeparableLabel::ZeroZero}, SeparableState{SeparableLabel::PlusZero},
            SeparableState{SeparableLabel::ZeroPlus}, SeparableState{SeparableLabel::PlusPlus},
            BellState{BellKind::PhiPlus},             BellState{BellKind::PsiPlus}};
}

}  // namespace pulsebench::cli
