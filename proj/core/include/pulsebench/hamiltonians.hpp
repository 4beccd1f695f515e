#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "pulsebench/noise.hpp"
#include "pulsebench/pulses.hpp"
#include "pulsebench/qstate.hpp"

namespace pulsebench {

using ScalarFn = std::function<double(double)>;

/// Interval where the integrator must keep steps at or below max_step; the
/// edges are treated as hard breakpoints (coefficients may jump there).
struct RefinementWindow {
    double t0 = 0.0;
    double t1 = 0.0;
    double max_step = 0.0;
};

/// H(t) = sum_k c_k(t) O_k with constant operators and scalar coefficients.
class Hamiltonian {
public:
    struct Term {
        Operator op;
        ScalarFn coeff;  // empty means constant 1
    };

    Hamiltonian() = default;
    explicit Hamiltonian(Eigen::Index dim) : dim_(dim) {}

    void add(Operator op, ScalarFn coeff = {});
    void add_window(RefinementWindow w) { windows_.push_back(w); }
    /// Sum of parts; dimensions must agree.
    void append(const Hamiltonian& other);

    /// Writes H(t) into `out` (resized if needed).
    void evaluate(double t, Operator& out) const;
    [[nodiscard]] Operator operator()(double t) const;

    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] const std::vector<RefinementWindow>& windows() const { return windows_; }

private:
    Eigen::Index dim_ = 0;
    Operator constant_;
    std::vector<Term> terms_;
    std::vector<RefinementWindow> windows_;
};

/// Refinement windows covering every pulse window of a schedule, max step T/20.
void add_schedule_windows(Hamiltonian& h, const EnvelopeSchedule& schedule);

// Static part ---------------------------------------------------------------

struct SystemSpec {
    std::size_t n_qubits = 2;
    std::vector<double> omega_q;                              // one per qubit
    std::vector<std::shared_ptr<const NoiseTrace>> noise;     // empty or one (possibly null) per qubit
};

/// sum_k (omega_k/2 + delta_omega_k(t)) sigma_z,k.
Hamiltonian build_static(const SystemSpec& spec);

// Interaction ---------------------------------------------------------------

enum class CouplingKind { XY, YYPairs };

struct CouplingSpec {
    CouplingKind kind = CouplingKind::XY;
    std::vector<double> g;  // one per bond, N - 1 entries
};

enum class ModulationKind { None, Envelope, Gated };

/// Envelope: H_i(t) = E(t) H_base. Gated: g f(...) while any window's
/// [t_c - 3T, t_c + 3T] support is active, bare g otherwise.
struct InteractionModulation {
    ModulationKind kind = ModulationKind::None;
    EnvelopeSchedule schedule;
};

Operator interaction_operator(const CouplingSpec& spec, std::size_t n_qubits);
Hamiltonian build_interaction(const CouplingSpec& spec, std::size_t n_qubits, const InteractionModulation& mod = {});
double gated_coefficient(const EnvelopeSchedule& schedule, double t);

// Drives --------------------------------------------------------------------

enum class DriveFamily {
    CorrectedXY,
    IQ,
    LinearX,
    LinearY,
    LinearZ,
    LCP,
    RCP,
    GlobalDD,
    FloquetMultiHarmonic,
    LocalPulseTrain,
};

struct QubitDrive {
    std::size_t qubit = 0;
    double amplitude = 1.0;  // lambda_d, Omega_0 or Omega_z,0
    double omega_d = 1.0;
    double phase = 0.0;
    EnvelopeSchedule envelope;
};

/// One shaped pulse of a global or local pulse train. `theta` is the nominal
/// amplitude factor and `error` the stochastic multiplier xi.
struct TrainPulse {
    double center = 0.0;
    double duration = 1.0;
    double phase = 0.0;
    double theta = 0.0;
    double error = 1.0;
};

struct FloquetHarmonic {
    double amplitude = 1.0;
    double phase = 0.0;
    double nu = 1.0;
};

struct DriveSpec {
    DriveFamily family = DriveFamily::CorrectedXY;
    std::size_t n_qubits = 2;
    std::vector<QubitDrive> qubits;  // local families
    PulseShape shape;                // GlobalDD, Floquet and LocalPulseTrain
    std::vector<TrainPulse> pulses;  // GlobalDD and LocalPulseTrain
    std::size_t target_qubit = 0;    // LocalPulseTrain
    double pulse_area = 1.0;         // LocalPulseTrain: |f| area used to convert theta to amplitude
    // Floquet
    double floquet_omega = 5.0;
    double a_pulse = 1.0;
    double envelope_width = 0.0;     // 0 selects T_Omega / 6
    std::vector<FloquetHarmonic> harmonics;
};

struct ErrorSpec {
    double detuning = 0.0;         // Delta_err or delta_det, rad/time
    double amplitude_error = 0.0;  // systematic epsilon_A
    bool stochastic_pulse_error = false;
    std::shared_ptr<const NoiseTrace> noise;  // half-weight detuning noise on qubit 0 (Floquet form)
};

Hamiltonian build_drive(const DriveSpec& spec, const ErrorSpec& errors = {});

/// Delta/2 sigma_z,0 + delta_omega(t)/2 sigma_z,0.
Hamiltonian build_error(const ErrorSpec& errors, std::size_t n_qubits);

/// Floquet envelope value f((t mod T_Omega - T_Omega/2)/width).
double floquet_envelope(const PulseShape& shape, double t, double omega, double width);

/// Pointwise sum; rejects mismatched dimensions, asserts hermiticity on a sample grid.
Hamiltonian assemble(const std::vector<Hamiltonian>& parts, double t_begin = 0.0, double t_end = 1.0,
                     int samples = 16);

}  // namespace pulsebench
