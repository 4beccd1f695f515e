#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pulsebench/dynamics.hpp"
#include "pulsebench/hamiltonians.hpp"
#include "pulsebench/noise.hpp"
#include "pulsebench/pulses.hpp"
#include "pulsebench/qstate.hpp"
#include "pulsebench/qwalk.hpp"

namespace pulsebench {

enum class ProtocolKind {
    SinglePulse,
    MultiPulse,
    SequentialLinear,
    SequentialCircular,
    DCG2,
    UDD16,
    CarrPurcell,
    HybridQECDD,
    FloquetReference,
    FloquetOptimizedFixed,
    FloquetLyapunov,
    GenNoControl,
    GenHeuristic,
    GenKnillDD,
    Adaptive,
};

std::string protocol_tag(ProtocolKind kind);
ProtocolKind protocol_from_tag(std::string_view tag);
std::vector<ProtocolKind> all_protocols();

enum class ProtocolFamily { Deterministic, Decoupling, Floquet, Generation, Adaptive };
ProtocolFamily protocol_family(ProtocolKind kind);

struct QECParams {
    double p_qec = 0.8;
    double s_max = 0.3;
    double dead_time = 0.01;

    void validate() const;
};

/// FidelityScaled: s = s_max (1 - F) clamped to [0, s_max]. Constant: s = s_max.
enum class QecStrengthRule { FidelityScaled, Constant };

struct ScenarioConfig {
    std::string preset;
    ProtocolKind protocol = ProtocolKind::SinglePulse;

    // System
    std::size_t n_qubits = 2;
    std::vector<double> omega_q{4.8, 4.8};
    double g = 0.5;
    double gamma1 = 0.001;
    double gamma_phi = 0.001;
    bool noise_enabled = true;
    LorentzianNoiseSpec noise;
    InitialStateSpec initial_state = BellState{BellKind::PhiPlus};

    // Time grid
    double t_end = 40.0;
    int n_steps = 400;

    // Shaped-pulse protocols
    PulseShape shape;
    double t_c = 7.0;
    double pulse_duration = 15.0;
    double spacing = 7.5;
    int n_pulses = 1;
    CombineMode multi_combine = CombineMode::Superpose;  // window combination of the multi-pulse drive
    double drive_amplitude = 1.0;    // lambda_d or Omega_0
    double drive_amplitude_z = 1.0;  // Omega_z,0
    double omega_d = 5.0;
    double drive_phase = 0.0;
    double control_start = 10.0;  // adaptive control window
    double control_end = 30.0;

    // Errors
    double detuning_relative = 0.0;  // detuning / omega_q[0]
    double amplitude_error = 0.0;    // systematic epsilon_A
    double pulse_error_sigma = 0.0;  // xi ~ N(1, sigma^2) per pulse

    // Decoupling
    double tau_p = 0.15;
    double m_free = 2.0;
    int udd_pulses = 16;
    QECParams qec;
    QecStrengthRule qec_rule = QecStrengthRule::FidelityScaled;

    // Floquet
    double floquet_omega = 5.0;
    double a_pulse = 1.0;
    double envelope_width = 0.0;  // 0 selects T_Omega / 6
    std::vector<double> harmonic_weights{1.0, 0.5, 0.3};
    int trials = 50;

    // Generation
    double gen_pulse_duration = 0.05;
    int knill_pulses = 12;

    WalkConfig walk;

    double rtol = 1e-8;
    double atol = 1e-10;
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] double step_duration() const { return t_end / n_steps; }
    [[nodiscard]] double detuning() const { return detuning_relative * omega_q.at(0); }
    [[nodiscard]] IntegratorConfig integrator() const;
};

/// t_k = T sin^2(pi k / (2 (N_p + 1))), k = 1..N_p.
std::vector<double> udd_timings(int n_pulses, double t_total);

/// ((1 - s) rho + s rho_ideal) / trace.
Operator qec_correct(const Operator& rho, const Operator& rho_ideal, double s);
QuantumState qec_correct(const QuantumState& rho, const QuantumState& rho_ideal, double s);

/// phi = atan2(-Re Tr[M O_y], -Re Tr[M O_x]) with M = i (rho rho_t - rho_t rho).
double lyapunov_phase(const Operator& rho, const Operator& rho_target, const Operator& o_x, const Operator& o_y);

/// Sum over nearest-neighbour bonds of sigma_a (x) sigma_a.
Operator bond_sum(PauliAxis axis, std::size_t n_qubits);

struct DeterministicSchedule {
    EnvelopeSchedule interaction;
    std::vector<DriveSpec> drives;
};

DeterministicSchedule deterministic_schedule(ProtocolKind kind, const ScenarioConfig& cfg);

/// Global pi-pulse train of a decoupling protocol (errors xi already drawn).
std::vector<TrainPulse> decoupling_pulses(ProtocolKind kind, const ScenarioConfig& cfg);

/// Number of Carr-Purcell cycles n_steps / m_free and their duration.
int cp_cycles(const ScenarioConfig& cfg);

struct StepAction {
    double theta = 0.0;
    double phi = 0.0;
};

/// Per-step actions of a generation benchmark.
std::vector<StepAction> generation_actions(ProtocolKind kind, const ScenarioConfig& cfg);

/// Shared noise realization on qubit 0 (null when disabled).
std::shared_ptr<const NoiseTrace> scenario_noise(const ScenarioConfig& cfg);
/// Initial density matrix; a perturbed GHZ state draws its perturbation from the scenario seed.
Operator scenario_initial_state(const ScenarioConfig& cfg);
/// sum_k omega_k/2 sigma_z,k with the noise trace (if any) on qubit 0 at full weight.
Hamiltonian scenario_static(const ScenarioConfig& cfg, const std::shared_ptr<const NoiseTrace>& noise);
std::vector<Operator> scenario_collapse(const ScenarioConfig& cfg);

/// Local pulse train on qubit 0 with gated YY coupling, integrated one step at a time.
class GenerationModel {
public:
    explicit GenerationModel(const ScenarioConfig& cfg);

    [[nodiscard]] Operator step(const Operator& rho, int k, const StepAction& action) const;
    [[nodiscard]] Hamiltonian step_hamiltonian(int k, const StepAction& action) const;
    [[nodiscard]] double step_start(int k) const { return k * dt_; }
    [[nodiscard]] int n_steps() const { return cfg_.n_steps; }
    [[nodiscard]] const std::vector<Operator>& collapse() const { return collapse_; }

private:
    ScenarioConfig cfg_;
    double dt_;
    double area_;
    Hamiltonian base_;
    Operator yy_;
    std::vector<Operator> collapse_;
};

/// Global pulse per step centered mid-step, tails truncated to the step.
class DecouplingStepModel {
public:
    explicit DecouplingStepModel(const ScenarioConfig& cfg);

    [[nodiscard]] Operator step(const Operator& rho, int k, const StepAction& action) const;
    [[nodiscard]] int n_steps() const { return cfg_.n_steps; }
    [[nodiscard]] double step_start(int k) const { return k * dt_; }
    [[nodiscard]] const std::shared_ptr<const NoiseTrace>& noise() const { return noise_; }

private:
    ScenarioConfig cfg_;
    double dt_;
    std::shared_ptr<const NoiseTrace> noise_;
    Hamiltonian base_;
    Operator yy_;
    std::vector<Operator> collapse_;
};

/// Multi-harmonic Floquet drive with piecewise-constant parameters per step.
class FloquetModel {
public:
    explicit FloquetModel(const ScenarioConfig& cfg);

    [[nodiscard]] Operator step(const Operator& rho, int k, const std::vector<FloquetHarmonic>& harmonics) const;
    [[nodiscard]] Trajectory run_fixed(const std::vector<FloquetHarmonic>& harmonics) const;
    [[nodiscard]] int n_steps() const { return cfg_.n_steps; }
    [[nodiscard]] double step_start(int k) const { return k * dt_; }
    [[nodiscard]] const Operator& o_x() const { return ox_; }
    [[nodiscard]] const Operator& o_y() const { return oy_; }
    [[nodiscard]] const std::shared_ptr<const NoiseTrace>& noise() const { return noise_; }

private:
    [[nodiscard]] Hamiltonian hamiltonian(const std::vector<FloquetHarmonic>& harmonics) const;

    ScenarioConfig cfg_;
    double dt_;
    std::shared_ptr<const NoiseTrace> noise_;
    Hamiltonian base_;
    Operator ox_, oy_;
    std::vector<Operator> collapse_;
};

struct ProtocolRun {
    Trajectory trajectory;
    std::vector<TrainPulse> pulses;          // applied global or local pulses
    std::vector<FloquetHarmonic> harmonics;  // Floquet parameters used (best trial when optimized)
    int corrections = 0;                     // QEC maps actually applied
};

/// Full simulation of one protocol; records concurrence (two qubits) and purity per grid point.
ProtocolRun run_protocol_detailed(ProtocolKind kind, const ScenarioConfig& cfg);
Trajectory run_protocol(ProtocolKind kind, const ScenarioConfig& cfg);

/// Concurrence (when two qubits) and purity.
void add_state_metrics(Trajectory& traj, std::size_t n_qubits);

}  // namespace pulsebench
