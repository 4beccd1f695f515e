#include "pulsebench/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pulsebench/metrics.hpp"
#include "pulsebench/seeding.hpp"

namespace pulsebench {

namespace {

constexpr double kPi = std::numbers::pi;

struct ProtocolName {
    ProtocolKind kind;
    const char* tag;
};

constexpr std::array<ProtocolName, 15> kProtocolNames{{
    {ProtocolKind::SinglePulse, "single_pulse"},
    {ProtocolKind::MultiPulse, "multi_pulse"},
    {ProtocolKind::SequentialLinear, "sequential_linear"},
    {ProtocolKind::SequentialCircular, "sequential_circular"},
    {ProtocolKind::DCG2, "dcg2"},
    {ProtocolKind::UDD16, "udd16"},
    {ProtocolKind::CarrPurcell, "carr_purcell"},
    {ProtocolKind::HybridQECDD, "hybrid_qec_dd"},
    {ProtocolKind::FloquetReference, "floquet_reference"},
    {ProtocolKind::FloquetOptimizedFixed, "floquet_optimized_fixed"},
    {ProtocolKind::FloquetLyapunov, "floquet_lyapunov"},
    {ProtocolKind::GenNoControl, "gen_no_control"},
    {ProtocolKind::GenHeuristic, "gen_heuristic"},
    {ProtocolKind::GenKnillDD, "gen_knill_dd"},
    {ProtocolKind::Adaptive, "adaptive"},
}};

CouplingSpec coupling(const ScenarioConfig& cfg, CouplingKind kind) {
    return CouplingSpec{kind, std::vector<double>(cfg.n_qubits - 1, cfg.g)};
}

Operator ideal_state(const ScenarioConfig& cfg) {
    return make_initial_state(GhzState{cfg.n_qubits}).matrix();
}

}  // namespace

std::vector<Operator> scenario_collapse(const ScenarioConfig& cfg) {
    return collapse_operators(LindbladSpec::uniform(cfg.n_qubits, cfg.gamma1, cfg.gamma_phi), cfg.n_qubits);
}

Operator scenario_initial_state(const ScenarioConfig& cfg) {
    InitialStateSpec spec = cfg.initial_state;
    if (auto* p = std::get_if<PerturbedGhzState>(&spec)) p->seed = cfg.seed;
    return make_initial_state(spec).matrix();
}

Hamiltonian scenario_static(const ScenarioConfig& cfg, const std::shared_ptr<const NoiseTrace>& noise) {
    SystemSpec sys;
    sys.n_qubits = cfg.n_qubits;
    sys.omega_q = cfg.omega_q;
    if (noise) {
        sys.noise.assign(cfg.n_qubits, nullptr);
        sys.noise[0] = noise;
    }
    return build_static(sys);
}

std::string protocol_tag(ProtocolKind kind) {
    for (const auto& p : kProtocolNames)
        if (p.kind == kind) return p.tag;
    throw std::invalid_argument("unknown protocol kind");
}

ProtocolKind protocol_from_tag(std::string_view tag) {
    for (const auto& p : kProtocolNames)
        if (tag == p.tag) return p.kind;
    std::ostringstream os;
    os << "unknown protocol '" << tag << "'; expected one of:";
    for (const auto& p : kProtocolNames) os << ' ' << p.tag;
    throw std::invalid_argument(os.str());
}

std::vector<ProtocolKind> all_protocols() {
    std::vector<ProtocolKind> out;
    for (const auto& p : kProtocolNames) out.push_back(p.kind);
    return out;
}

ProtocolFamily protocol_family(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::SinglePulse:
        case ProtocolKind::MultiPulse:
        case ProtocolKind::SequentialLinear:
        case ProtocolKind::SequentialCircular: return ProtocolFamily::Deterministic;
        case ProtocolKind::DCG2:
        case ProtocolKind::UDD16:
        case ProtocolKind::CarrPurcell:
        case ProtocolKind::HybridQECDD: return ProtocolFamily::Decoupling;
        case ProtocolKind::FloquetReference:
        case ProtocolKind::FloquetOptimizedFixed:
        case ProtocolKind::FloquetLyapunov: return ProtocolFamily::Floquet;
        case ProtocolKind::GenNoControl:
        case ProtocolKind::GenHeuristic:
        case ProtocolKind::GenKnillDD: return ProtocolFamily::Generation;
        case ProtocolKind::Adaptive: return ProtocolFamily::Adaptive;
    }
    throw std::invalid_argument("unknown protocol kind");
}

void QECParams::validate() const {
    if (!(p_qec >= 0.0 && p_qec <= 1.0)) throw std::invalid_argument("p_qec must lie in [0, 1]");
    if (!(s_max >= 0.0 && s_max <= 1.0)) throw std::invalid_argument("s_max must lie in [0, 1]");
    if (!(dead_time >= 0.0)) throw std::invalid_argument("dead_time must be >= 0");
}

void ScenarioConfig::validate() const {
    if (n_qubits < 2) throw std::invalid_argument("scenario needs at least two qubits");
    if (omega_q.size() != n_qubits) {
        std::ostringstream os;
        os << "omega_q has " << omega_q.size() << " entries for " << n_qubits << " qubits";
        throw std::invalid_argument(os.str());
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(gamma1 >= 0.0) || !(gamma_phi >= 0.0)) throw std::invalid_argument("decoherence rates must be >= 0");
    if (!(pulse_duration > 0.0)) throw std::invalid_argument("pulse_duration must be positive");
    if (!(spacing >= 0.0)) throw std::invalid_argument("spacing must be >= 0");
    if (!(control_end >= control_start)) throw std::invalid_argument("control window end precedes its start");
    if (n_pulses < 1) throw std::invalid_argument("n_pulses must be >= 1");
    if (!(pulse_error_sigma >= 0.0)) throw std::invalid_argument("pulse_error_sigma must be >= 0");
    if (!(tau_p > 0.0)) throw std::invalid_argument("tau_p must be positive");
    if (!(m_free > 0.0)) throw std::invalid_argument("m_free must be positive");
    if (udd_pulses < 1) throw std::invalid_argument("udd_pulses must be >= 1");
    if (!(floquet_omega > 0.0)) throw std::invalid_argument("floquet_omega must be positive");
    if (!(envelope_width >= 0.0)) throw std::invalid_argument("envelope_width must be >= 0");
    if (harmonic_weights.empty()) throw std::invalid_argument("harmonic_weights must not be empty");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(gen_pulse_duration > 0.0)) throw std::invalid_argument("gen_pulse_duration must be positive");
    if (knill_pulses < 1 || knill_pulses > n_steps) throw std::invalid_argument("knill_pulses must lie in [1, n_steps]");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("integrator tolerances must be positive");
    if (initial_state_qubits(initial_state) != n_qubits) {
        throw std::invalid_argument("initial state qubit count does not match n_qubits");
    }
    shape.validate();
    if (multi_combine == CombineMode::Sequential) {
        std::vector<PulseWindow> w;
        for (int k = 0; k < n_pulses; ++k) w.push_back({t_c + k * spacing, pulse_duration, 1.0});
        EnvelopeSchedule(shape, w, CombineMode::Sequential);
    }
    if (noise_enabled) noise.validate();
    qec.validate();
    walk.validate();
}

IntegratorConfig ScenarioConfig::integrator() const {
    IntegratorConfig ic;
    ic.rtol = rtol;
    ic.atol = atol;
    ic.grid = IntegratorConfig::uniform_grid(0.0, t_end, n_steps);
    return ic;
}

std::vector<double> udd_timings(int n_pulses, double t_total) {
    if (n_pulses < 1) throw std::invalid_argument("UDD needs at least one pulse");
    if (!(t_total > 0.0)) throw std::invalid_argument("UDD total time must be positive");
    std::vector<double> t(n_pulses);
    for (int k = 1; k <= n_pulses; ++k) {
        const double s = std::sin(kPi * k / (2.0 * (n_pulses + 1)));
        t[k - 1] = t_total * s * s;
    }
    return t;
}

Operator qec_correct(const Operator& rho, const Operator& rho_ideal, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("correction strength must lie in [0, 1]");
    if (rho.rows() != rho_ideal.rows() || rho.cols() != rho_ideal.cols()) {
        throw DimensionError("qec_correct: state dimensions differ");
    }
    const Operator mixed = (1.0 - s) * rho + s * rho_ideal;
    return mixed / mixed.trace().real();
}

QuantumState qec_correct(const QuantumState& rho, const QuantumState& rho_ideal, double s) {
    return QuantumState(qec_correct(rho.matrix(), rho_ideal.matrix(), s));
}

double lyapunov_phase(const Operator& rho, const Operator& rho_target, const Operator& o_x, const Operator& o_y) {
    if (rho.rows() != rho_target.rows() || rho.rows() != o_x.rows() || rho.rows() != o_y.rows()) {
        throw DimensionError("lyapunov_phase: dimensions differ");
    }
    const Operator m = Complex(0.0, 1.0) * (rho * rho_target - rho_target * rho);
    const double tx = (m * o_x).trace().real();
    const double ty = (m * o_y).trace().real();
    if (std::abs(tx) < 1e-12 && std::abs(ty) < 1e-12) return 0.0;
    return std::atan2(-ty, -tx);
}

Operator bond_sum(PauliAxis axis, std::size_t n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Operator o = Operator::Zero(dim, dim);
    const Operator p = pauli(axis);
    for (std::size_t j = 0; j + 1 < n_qubits; ++j) o += embed_qubit(p, j, n_qubits) * embed_qubit(p, j + 1, n_qubits);
    return o;
}

std::shared_ptr<const NoiseTrace> scenario_noise(const ScenarioConfig& cfg) {
    if (!cfg.noise_enabled) return nullptr;
    auto spec = cfg.noise;
    spec.seed = cfg.seed;
    return std::make_shared<NoiseTrace>(NoiseTrace::synthesize(spec));
}

// Deterministic shaped-pulse protocols ---------------------------------------

DeterministicSchedule deterministic_schedule(ProtocolKind kind, const ScenarioConfig& cfg) {
    const double T = cfg.pulse_duration;
    auto drive_on_a = [&](DriveFamily family, const EnvelopeSchedule& env, double amplitude) {
        DriveSpec d;
        d.family = family;
        d.n_qubits = cfg.n_qubits;
        d.qubits.push_back(QubitDrive{0, amplitude, cfg.omega_d, cfg.drive_phase, env});
        return d;
    };
    DeterministicSchedule out;
    switch (kind) {
        case ProtocolKind::SinglePulse: {
            EnvelopeSchedule s(cfg.shape, {PulseWindow{cfg.t_c, T, 1.0}});
            out.interaction = s;
            out.drives.push_back(drive_on_a(DriveFamily::CorrectedXY, s, cfg.drive_amplitude));
            break;
        }
        case ProtocolKind::MultiPulse: {
            std::vector<PulseWindow> w;
            for (int k = 0; k < cfg.n_pulses; ++k) w.push_back({cfg.t_c + k * cfg.spacing, T, 1.0});
            EnvelopeSchedule s(cfg.shape, w, cfg.multi_combine);
            out.interaction = s;
            out.drives.push_back(drive_on_a(DriveFamily::IQ, s, cfg.drive_amplitude));
            break;
        }
        case ProtocolKind::SequentialLinear: {
            const std::array<DriveFamily, 3> fam{DriveFamily::LinearX, DriveFamily::LinearY, DriveFamily::LinearZ};
            std::vector<PulseWindow> all;
            for (int k = 0; k < 3; ++k) {
                PulseWindow w{cfg.t_c + k * cfg.spacing, T, 1.0};
                all.push_back(w);
                const double amp = fam[k] == DriveFamily::LinearZ ? cfg.drive_amplitude_z : cfg.drive_amplitude;
                out.drives.push_back(drive_on_a(fam[k], EnvelopeSchedule(cfg.shape, {w}), amp));
            }
            out.interaction = EnvelopeSchedule(cfg.shape, all);
            break;
        }
        case ProtocolKind::SequentialCircular: {
            const double gap = std::max(cfg.spacing, T);
            const PulseWindow lcp{cfg.t_c, T, 1.0};
            const PulseWindow rcp{cfg.t_c + gap, T, 1.0};
            out.interaction = EnvelopeSchedule(cfg.shape, {lcp, rcp}, CombineMode::Sequential);
            out.drives.push_back(drive_on_a(DriveFamily::LCP, EnvelopeSchedule(cfg.shape, {lcp}, CombineMode::Sequential),
                                            cfg.drive_amplitude));
            out.drives.push_back(drive_on_a(DriveFamily::RCP, EnvelopeSchedule(cfg.shape, {rcp}, CombineMode::Sequential),
                                            cfg.drive_amplitude));
            break;
        }
        default: throw std::invalid_argument("deterministic_schedule: " + protocol_tag(kind) + " is not a shaped-pulse protocol");
    }
    return out;
}

namespace {

ProtocolRun run_deterministic(ProtocolKind kind, const ScenarioConfig& cfg) {
    const auto noise = scenario_noise(cfg);
    const auto sched = deterministic_schedule(kind, cfg);
    std::vector<Hamiltonian> parts{scenario_static(cfg, noise),
                                   build_interaction(coupling(cfg, CouplingKind::XY), cfg.n_qubits,
                                                     InteractionModulation{ModulationKind::Envelope, sched.interaction})};
    ErrorSpec err;
    err.amplitude_error = cfg.amplitude_error;
    for (const auto& d : sched.drives) parts.push_back(build_drive(d, err));
    if (cfg.detuning_relative != 0.0) parts.push_back(build_error(ErrorSpec{cfg.detuning(), 0.0, false, nullptr}, cfg.n_qubits));
    const Hamiltonian h = assemble(parts, 0.0, cfg.t_end);
    ProtocolRun run;
    run.trajectory = evolve(scenario_initial_state(cfg), h, scenario_collapse(cfg), cfg.integrator());
    return run;
}

}  // namespace

// Decoupling ---------------------------------------------------------------

int cp_cycles(const ScenarioConfig& cfg) {
    const int n = static_cast<int>(std::lround(cfg.n_steps / cfg.m_free));
    return std::max(n, 1);
}

std::vector<TrainPulse> decoupling_pulses(ProtocolKind kind, const ScenarioConfig& cfg) {
    std::vector<std::pair<double, double>> tp;  // (time, phase)
    const double T = cfg.t_end;
    switch (kind) {
        case ProtocolKind::DCG2:
            tp = {{T / 3.0, 0.0}, {2.0 * T / 3.0, kPi / 2.0}};
            break;
        case ProtocolKind::UDD16: {
            const auto t = udd_timings(cfg.udd_pulses, T);
            for (std::size_t k = 0; k < t.size(); ++k) tp.emplace_back(t[k], (k + 1) % 2 == 1 ? 0.0 : kPi / 2.0);
            break;
        }
        case ProtocolKind::CarrPurcell:
        case ProtocolKind::HybridQECDD: {
            const int nc = cp_cycles(cfg);
            const double len = T / nc;
            for (int c = 0; c < nc; ++c) tp.emplace_back((c + 0.5) * len, kPi / 2.0);
            break;
        }
        default: throw std::invalid_argument("decoupling_pulses: " + protocol_tag(kind) + " is not a decoupling protocol");
    }
    std::vector<TrainPulse> pulses;
    for (std::size_t k = 0; k < tp.size(); ++k) {
        const double xi = sample_pulse_error(cfg.seed, k, cfg.pulse_error_sigma);
        pulses.push_back(TrainPulse{tp[k].first, cfg.tau_p, tp[k].second, kPi, xi});
    }
    return pulses;
}

namespace {

EnvelopeSchedule pulse_schedule(const PulseShape& shape, const std::vector<TrainPulse>& pulses) {
    std::vector<PulseWindow> w;
    for (const auto& p : pulses) w.push_back({p.center, p.duration, 1.0});
    return EnvelopeSchedule(shape, w);
}

ProtocolRun run_decoupling(ProtocolKind kind, const ScenarioConfig& cfg) {
    const auto noise = scenario_noise(cfg);
    const auto pulses = decoupling_pulses(kind, cfg);
    DriveSpec drive;
    drive.family = DriveFamily::GlobalDD;
    drive.n_qubits = cfg.n_qubits;
    drive.shape = cfg.shape;
    drive.pulses = pulses;
    ErrorSpec err;
    err.detuning = cfg.detuning();
    err.amplitude_error = cfg.amplitude_error;
    const Hamiltonian stat = scenario_static(cfg, noise);
    const auto yy = coupling(cfg, CouplingKind::YYPairs);
    const Hamiltonian full = assemble(
        {stat,
         build_interaction(yy, cfg.n_qubits, InteractionModulation{ModulationKind::Gated, pulse_schedule(cfg.shape, pulses)}),
         build_drive(drive, err)},
        0.0, cfg.t_end);
    const auto collapse = scenario_collapse(cfg);
    auto ic = cfg.integrator();
    const Operator rho0 = scenario_initial_state(cfg);
    ProtocolRun run;
    run.pulses = pulses;
    if (kind != ProtocolKind::HybridQECDD) {
        run.trajectory = evolve(rho0, full, collapse, ic);
        return run;
    }
    const Hamiltonian free = assemble({stat, build_interaction(yy, cfg.n_qubits)}, 0.0, cfg.t_end);
    const int nc = cp_cycles(cfg);
    const double len = cfg.t_end / nc;
    const double dead = std::min(cfg.qec.dead_time, len);
    const Operator ideal = ideal_state(cfg);
    const StateVector psi_ideal = initial_state_vector(GhzState{cfg.n_qubits});
    std::vector<Segment> segs;
    std::vector<StateMap> maps;
    int applied = 0;
    for (int c = 0; c < nc; ++c) {
        const double c0 = c * len;
        const double c1 = c + 1 == nc ? cfg.t_end : (c + 1) * len;
        if (dead < c1 - c0) {
            segs.push_back(Segment{&full, collapse, c0, c1 - dead});
            maps.emplace_back();
        }
        if (dead > 0.0) {
            segs.push_back(Segment{&free, collapse, std::max(c0, c1 - dead), c1});
            maps.emplace_back();
        }
        std::mt19937_64 rng(derive_seed(cfg.seed, SeedStream::Correction, static_cast<std::uint64_t>(c)));
        const bool correct = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < cfg.qec.p_qec;
        if (correct) {
            ++applied;
            const auto rule = cfg.qec_rule;
            const double s_max = cfg.qec.s_max;
            maps.back() = [=](const Operator& rho, double) {
                double s = s_max;
                if (rule == QecStrengthRule::FidelityScaled) {
                    s = std::clamp(s_max * (1.0 - fidelity_pure(rho, psi_ideal)), 0.0, s_max);
                }
                return qec_correct(rho, ideal, s);
            };
        }
    }
    run.corrections = applied;
    run.trajectory = evolve_piecewise(rho0, segs, maps, ic);
    return run;
}

}  // namespace

// Step models ----------------------------------------------------------------

GenerationModel::GenerationModel(const ScenarioConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    dt_ = cfg_.step_duration();
    area_ = envelope_area(cfg_.shape, cfg_.gen_pulse_duration, true);
    const auto noise = scenario_noise(cfg_);
    base_ = scenario_static(cfg_, noise);
    if (cfg_.detuning_relative != 0.0) {
        base_.append(build_error(ErrorSpec{cfg_.detuning(), 0.0, false, nullptr}, cfg_.n_qubits));
    }
    yy_ = interaction_operator(coupling(cfg_, CouplingKind::YYPairs), cfg_.n_qubits);
    collapse_ = scenario_collapse(cfg_);
}

Hamiltonian GenerationModel::step_hamiltonian(int k, const StepAction& action) const {
    const double tp = cfg_.gen_pulse_duration;
    const TrainPulse p{step_start(k) + 3.0 * tp, tp, action.phi, action.theta,
                       sample_pulse_error(cfg_.seed, static_cast<std::uint64_t>(k), cfg_.pulse_error_sigma)};
    Hamiltonian h = base_;
    const EnvelopeSchedule gate(cfg_.shape, {PulseWindow{p.center, p.duration, 1.0}});
    h.add(yy_, [gate](double t) { return gated_coefficient(gate, t); });
    add_schedule_windows(h, gate);
    DriveSpec d;
    d.family = DriveFamily::LocalPulseTrain;
    d.n_qubits = cfg_.n_qubits;
    d.shape = cfg_.shape;
    d.pulses = {p};
    d.target_qubit = 0;
    d.pulse_area = area_;
    h.append(build_drive(d, ErrorSpec{0.0, cfg_.amplitude_error, false, nullptr}));
    return h;
}

Operator GenerationModel::step(const Operator& rho, int k, const StepAction& action) const {
    if (k < 0 || k >= cfg_.n_steps) throw std::out_of_range("generation step index out of range");
    const Hamiltonian h = step_hamiltonian(k, action);
    const double t0 = step_start(k), t1 = step_start(k + 1);
    IntegratorConfig ic;
    ic.rtol = cfg_.rtol;
    ic.atol = cfg_.atol;
    ic.grid = {t0, t1};
    return propagate(rho, h, collapse_, t0, t1, ic);
}

DecouplingStepModel::DecouplingStepModel(const ScenarioConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    dt_ = cfg_.step_duration();
    noise_ = scenario_noise(cfg_);
    base_ = scenario_static(cfg_, noise_);
    yy_ = interaction_operator(coupling(cfg_, CouplingKind::YYPairs), cfg_.n_qubits);
    if (cfg_.detuning_relative != 0.0) {
        base_.add(cfg_.detuning() * embed_qubit(pauli(PauliAxis::Z), 0, cfg_.n_qubits));
    }
    collapse_ = scenario_collapse(cfg_);
}

Operator DecouplingStepModel::step(const Operator& rho, int k, const StepAction& action) const {
    if (k < 0 || k >= cfg_.n_steps) throw std::out_of_range("decoupling step index out of range");
    const double t0 = step_start(k), t1 = step_start(k + 1);
    Hamiltonian h = base_;
    if (action.theta > 0.0) {
        const TrainPulse p{0.5 * (t0 + t1), cfg_.tau_p, action.phi, action.theta,
                           sample_pulse_error(cfg_.seed, static_cast<std::uint64_t>(k), cfg_.pulse_error_sigma)};
        const EnvelopeSchedule gate(cfg_.shape, {PulseWindow{p.center, p.duration, 1.0}});
        h.add(yy_, [gate](double t) { return gated_coefficient(gate, t); });
        add_schedule_windows(h, gate);
        DriveSpec d;
        d.family = DriveFamily::GlobalDD;
        d.n_qubits = cfg_.n_qubits;
        d.shape = cfg_.shape;
        d.pulses = {p};
        h.append(build_drive(d, ErrorSpec{0.0, cfg_.amplitude_error, false, nullptr}));
    } else {
        h.add(yy_);
    }
    IntegratorConfig ic;
    ic.rtol = cfg_.rtol;
    ic.atol = cfg_.atol;
    ic.grid = {t0, t1};
    return propagate(rho, h, collapse_, t0, t1, ic);
}

FloquetModel::FloquetModel(const ScenarioConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    dt_ = cfg_.step_duration();
    noise_ = scenario_noise(cfg_);
    base_ = scenario_static(cfg_, nullptr);
    base_.append(build_interaction(coupling(cfg_, CouplingKind::YYPairs), cfg_.n_qubits));
    base_.append(build_error(ErrorSpec{cfg_.detuning(), 0.0, false, noise_}, cfg_.n_qubits));
    ox_ = bond_sum(PauliAxis::X, cfg_.n_qubits);
    oy_ = bond_sum(PauliAxis::Y, cfg_.n_qubits);
    collapse_ = scenario_collapse(cfg_);
}

Hamiltonian FloquetModel::hamiltonian(const std::vector<FloquetHarmonic>& harmonics) const {
    Hamiltonian h = base_;
    DriveSpec d;
    d.family = DriveFamily::FloquetMultiHarmonic;
    d.n_qubits = cfg_.n_qubits;
    d.shape = cfg_.shape;
    d.floquet_omega = cfg_.floquet_omega;
    d.a_pulse = cfg_.a_pulse;
    d.envelope_width = cfg_.envelope_width;
    d.harmonics = harmonics;
    h.append(build_drive(d, ErrorSpec{0.0, cfg_.amplitude_error, false, nullptr}));
    return h;
}

Operator FloquetModel::step(const Operator& rho, int k, const std::vector<FloquetHarmonic>& harmonics) const {
    if (k < 0 || k >= cfg_.n_steps) throw std::out_of_range("Floquet step index out of range");
    const Hamiltonian h = hamiltonian(harmonics);
    const double t0 = step_start(k), t1 = step_start(k + 1);
    IntegratorConfig ic;
    ic.rtol = cfg_.rtol;
    ic.atol = cfg_.atol;
    ic.max_step = 2.0 * kPi / cfg_.floquet_omega / 20.0;
    ic.grid = {t0, t1};
    return propagate(rho, h, collapse_, t0, t1, ic);
}

Trajectory FloquetModel::run_fixed(const std::vector<FloquetHarmonic>& harmonics) const {
    const Hamiltonian h = hamiltonian(harmonics);
    auto ic = cfg_.integrator();
    ic.max_step = 2.0 * kPi / cfg_.floquet_omega / 20.0;
    return evolve(scenario_initial_state(cfg_), h, collapse_, ic);
}

// Generation -----------------------------------------------------------------

std::vector<StepAction> generation_actions(ProtocolKind kind, const ScenarioConfig& cfg) {
    std::vector<StepAction> a(cfg.n_steps);
    switch (kind) {
        case ProtocolKind::GenNoControl: break;
        case ProtocolKind::GenHeuristic:
            for (int k = 0; k < cfg.n_steps; ++k) a[k] = {(k % 2 == 0 ? 1.0 : -1.0) * kPi / 2.0, 0.0};
            break;
        case ProtocolKind::GenKnillDD: {
            const int np = cfg.knill_pulses;
            for (int j = 0; j < np; ++j) {
                const int k = static_cast<int>((2LL * j + 1) * cfg.n_steps / (2LL * np));
                a[k] = {kPi, j % 2 == 0 ? 0.0 : kPi / 2.0};
            }
            break;
        }
        default: throw std::invalid_argument("generation_actions: " + protocol_tag(kind) + " is not a generation benchmark");
    }
    return a;
}

namespace {

template <typename Model, typename Action>
Trajectory stepwise(const Model& model, const Operator& rho0, const std::vector<Action>& actions) {
    Trajectory traj;
    Operator rho = rho0;
    traj.times.push_back(model.step_start(0));
    traj.states.push_back(rho);
    for (int k = 0; k < model.n_steps(); ++k) {
        rho = model.step(rho, k, actions[k]);
        traj.times.push_back(model.step_start(k + 1));
        traj.states.push_back(rho);
    }
    return traj;
}

ProtocolRun run_generation(ProtocolKind kind, const ScenarioConfig& cfg) {
    const GenerationModel model(cfg);
    const auto actions = generation_actions(kind, cfg);
    ProtocolRun run;
    run.trajectory = stepwise(model, scenario_initial_state(cfg), actions);
    for (int k = 0; k < cfg.n_steps; ++k) {
        if (actions[k].theta == 0.0) continue;
        run.pulses.push_back(TrainPulse{model.step_start(k) + 3.0 * cfg.gen_pulse_duration, cfg.gen_pulse_duration,
                                        actions[k].phi, actions[k].theta,
                                        sample_pulse_error(cfg.seed, static_cast<std::uint64_t>(k), cfg.pulse_error_sigma)});
    }
    return run;
}

ProtocolRun run_floquet(ProtocolKind kind, const ScenarioConfig& cfg) {
    const FloquetModel model(cfg);
    ProtocolRun run;
    switch (kind) {
        case ProtocolKind::FloquetReference:
            run.harmonics = {FloquetHarmonic{1.0, 0.0, 1.0}};
            run.trajectory = model.run_fixed(run.harmonics);
            break;
        case ProtocolKind::FloquetOptimizedFixed: {
            double best = -1.0;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                std::mt19937_64 rng(derive_seed(cfg.seed, SeedStream::Trials, static_cast<std::uint64_t>(trial)));
                std::uniform_real_distribution<double> amp(0.5, 2.0), phase(-kPi, kPi), nu(0.5, 1.5);
                std::vector<FloquetHarmonic> hs;
                for (double w : cfg.harmonic_weights) {
                    FloquetHarmonic h;
                    h.amplitude = amp(rng) * w;
                    h.phase = phase(rng);
                    h.nu = nu(rng);
                    hs.push_back(h);
                }
                Trajectory t = model.run_fixed(hs);
                const double c = concurrence(t.states.back());
                if (c > best) {
                    best = c;
                    run.trajectory = std::move(t);
                    run.harmonics = hs;
                }
            }
            break;
        }
        case ProtocolKind::FloquetLyapunov: {
            const Operator target = scenario_initial_state(cfg);
            Trajectory traj;
            Operator rho = target;
            traj.times.push_back(0.0);
            traj.states.push_back(rho);
            for (int k = 0; k < cfg.n_steps; ++k) {
                const double phi = lyapunov_phase(rho, target, model.o_x(), model.o_y());
                const std::vector<FloquetHarmonic> hs{FloquetHarmonic{1.0, phi, 1.0}};
                run.harmonics.push_back(hs.front());
                rho = model.step(rho, k, hs);
                traj.times.push_back(model.step_start(k + 1));
                traj.states.push_back(rho);
            }
            run.trajectory = std::move(traj);
            break;
        }
        default: throw std::invalid_argument("not a Floquet protocol");
    }
    return run;
}

}  // namespace

void add_state_metrics(Trajectory& traj, std::size_t n_qubits) {
    std::vector<MetricFn> m;
    if (n_qubits == 2) m.push_back({"concurrence", [](const Operator& r) { return concurrence(r); }});
    m.push_back({"purity", [](const Operator& r) { return (r * r).trace().real(); }});
    traj.compute_metrics(m);
}

ProtocolRun run_protocol_detailed(ProtocolKind kind, const ScenarioConfig& cfg) {
    cfg.validate();
    ProtocolRun run;
    switch (protocol_family(kind)) {
        case ProtocolFamily::Deterministic: run = run_deterministic(kind, cfg); break;
        case ProtocolFamily::Decoupling: run = run_decoupling(kind, cfg); break;
        case ProtocolFamily::Floquet: run = run_floquet(kind, cfg); break;
        case ProtocolFamily::Generation: run = run_generation(kind, cfg); break;
        case ProtocolFamily::Adaptive:
            throw std::invalid_argument("adaptive scenarios run through the optimizer, not run_protocol");
    }
    add_state_metrics(run.trajectory, cfg.n_qubits);
    return run;
}

Trajectory run_protocol(ProtocolKind kind, const ScenarioConfig& cfg) {
    return run_protocol_detailed(kind, cfg).trajectory;
}

}  // namespace pulsebench
