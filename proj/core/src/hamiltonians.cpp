#include "pulsebench/hamiltonians.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pulsebench {

namespace {

void check_dim(Eigen::Index expected, const Operator& op) {
    if (op.rows() != expected || op.cols() != expected) {
        std::ostringstream os;
        os << "operator dimension " << op.rows() << "x" << op.cols() << " does not match Hamiltonian dimension "
           << expected;
        throw DimensionError(os.str());
    }
}

Eigen::Index register_dim(std::size_t n_qubits) {
    if (n_qubits < 1) throw DimensionError("at least one qubit required");
    return Eigen::Index{1} << n_qubits;
}

void check_qubit(std::size_t q, std::size_t n) {
    if (q >= n) {
        std::ostringstream os;
        os << "qubit index " << q << " out of range for " << n << " qubits";
        throw DimensionError(os.str());
    }
}

void add_pulse_windows(Hamiltonian& h, const std::vector<TrainPulse>& pulses) {
    for (const auto& p : pulses) {
        h.add_window({p.center - 3.0 * p.duration, p.center + 3.0 * p.duration, p.duration / 20.0});
    }
}

}  // namespace

void Hamiltonian::add(Operator op, ScalarFn coeff) {
    if (dim_ == 0) dim_ = op.rows();
    check_dim(dim_, op);
    if (!coeff) {
        if (constant_.size() == 0) constant_ = Operator::Zero(dim_, dim_);
        constant_ += op;
        return;
    }
    terms_.push_back({std::move(op), std::move(coeff)});
}

void Hamiltonian::append(const Hamiltonian& other) {
    if (other.dim_ == 0) return;
    if (dim_ == 0) dim_ = other.dim_;
    if (other.dim_ != dim_) {
        std::ostringstream os;
        os << "cannot assemble parts of dimension " << dim_ << " and " << other.dim_;
        throw DimensionError(os.str());
    }
    if (other.constant_.size() != 0) add(other.constant_);
    for (const auto& t : other.terms_) terms_.push_back(t);
    for (const auto& w : other.windows_) windows_.push_back(w);
}

void Hamiltonian::evaluate(double t, Operator& out) const {
    if (constant_.size() != 0) {
        out = constant_;
    } else {
        out.setZero(dim_, dim_);
    }
    for (const auto& term : terms_) {
        const double c = term.coeff(t);
        if (c != 0.0) out.noalias() += c * term.op;
    }
}

Operator Hamiltonian::operator()(double t) const {
    Operator out;
    evaluate(t, out);
    return out;
}

void add_schedule_windows(Hamiltonian& h, const EnvelopeSchedule& schedule) {
    for (const auto& w : schedule.windows()) {
        h.add_window({w.center - 3.0 * w.duration, w.center + 3.0 * w.duration, w.duration / 20.0});
    }
}

Hamiltonian build_static(const SystemSpec& spec) {
    const Eigen::Index dim = register_dim(spec.n_qubits);
    if (spec.omega_q.size() != spec.n_qubits) throw DimensionError("omega_q needs one entry per qubit");
    if (!spec.noise.empty() && spec.noise.size() != spec.n_qubits) {
        throw DimensionError("noise traces must be empty or one per qubit");
    }
    Hamiltonian h(dim);
    Operator base = Operator::Zero(dim, dim);
    for (std::size_t k = 0; k < spec.n_qubits; ++k) {
        if (!std::isfinite(spec.omega_q[k])) throw std::invalid_argument("qubit frequency must be finite");
        base += 0.5 * spec.omega_q[k] * embed_qubit(pauli(PauliAxis::Z), k, spec.n_qubits);
    }
    h.add(base);
    for (std::size_t k = 0; k < spec.noise.size(); ++k) {
        if (!spec.noise[k]) continue;
        auto trace = spec.noise[k];
        h.add(embed_qubit(pauli(PauliAxis::Z), k, spec.n_qubits), [trace](double t) { return (*trace)(t); });
    }
    return h;
}

Operator interaction_operator(const CouplingSpec& spec, std::size_t n_qubits) {
    const Eigen::Index dim = register_dim(n_qubits);
    if (spec.g.size() + 1 != n_qubits) {
        std::ostringstream os;
        os << "coupling needs " << n_qubits - 1 << " bond strengths, got " << spec.g.size();
        throw DimensionError(os.str());
    }
    Operator h = Operator::Zero(dim, dim);
    for (std::size_t k = 0; k + 1 < n_qubits; ++k) {
        if (spec.kind == CouplingKind::XY) {
            const Operator sp_k = embed_qubit(sigma_plus(), k, n_qubits);
            const Operator sm_k = embed_qubit(sigma_minus(), k, n_qubits);
            const Operator sp_n = embed_qubit(sigma_plus(), k + 1, n_qubits);
            const Operator sm_n = embed_qubit(sigma_minus(), k + 1, n_qubits);
            h += spec.g[k] * (sp_k * sm_n + sm_k * sp_n);
        } else {
            h += spec.g[k] * embed_qubit(pauli(PauliAxis::Y), k, n_qubits) *
                 embed_qubit(pauli(PauliAxis::Y), k + 1, n_qubits);
        }
    }
    return h;
}

double gated_coefficient(const EnvelopeSchedule& schedule, double t) {
    bool during = false;
    double v = 0.0;
    for (const auto& w : schedule.windows()) {
        if (w.active(t)) {
            during = true;
            v += w.amplitude_scale * eval_envelope(schedule.shape(), w.normalized(t), w.duration);
        }
    }
    return during ? v : 1.0;
}

Hamiltonian build_interaction(const CouplingSpec& spec, std::size_t n_qubits, const InteractionModulation& mod) {
    Operator base = interaction_operator(spec, n_qubits);
    Hamiltonian h(base.rows());
    switch (mod.kind) {
        case ModulationKind::None: h.add(std::move(base)); break;
        case ModulationKind::Envelope: {
            auto sched = mod.schedule;
            h.add(std::move(base), [sched](double t) { return sched.value(t); });
            add_schedule_windows(h, mod.schedule);
            break;
        }
        case ModulationKind::Gated: {
            auto sched = mod.schedule;
            h.add(std::move(base), [sched](double t) { return gated_coefficient(sched, t); });
            add_schedule_windows(h, mod.schedule);
            break;
        }
    }
    return h;
}

double floquet_envelope(const PulseShape& shape, double t, double omega, double width) {
    const double period = 2.0 * std::numbers::pi / omega;
    double tp = std::fmod(t, period);
    if (tp < 0.0) tp += period;
    return eval_envelope(shape, (tp - 0.5 * period) / width, width);
}

Hamiltonian build_drive(const DriveSpec& spec, const ErrorSpec& errors) {
    const std::size_t n = spec.n_qubits;
    const Eigen::Index dim = register_dim(n);
    Hamiltonian h(dim);
    const Operator X = pauli(PauliAxis::X);
    const Operator Y = pauli(PauliAxis::Y);
    const Operator Z = pauli(PauliAxis::Z);
    const double amp_err = 1.0 + errors.amplitude_error;

    switch (spec.family) {
        case DriveFamily::CorrectedXY:
            for (const auto& q : spec.qubits) {
                check_qubit(q.qubit, n);
                if (q.omega_d == 0.0) throw std::invalid_argument("corrected drive requires a nonzero drive frequency");
                const double a = 0.5 * q.amplitude * amp_err;
                const auto env = q.envelope;
                const double w = q.omega_d, ph = q.phase;
                h.add(embed_qubit(X, q.qubit, n), [=](double t) { return a * env.value(t) * std::cos(w * t + ph); });
                h.add(embed_qubit(Y, q.qubit, n),
                      [=](double t) { return a / w * env.derivative(t) * std::cos(w * t + ph); });
                add_schedule_windows(h, q.envelope);
            }
            break;
        case DriveFamily::IQ:
            for (const auto& q : spec.qubits) {
                check_qubit(q.qubit, n);
                const double a = 0.5 * q.amplitude * amp_err;
                const auto env = q.envelope;
                const double w = q.omega_d, ph = q.phase;
                h.add(embed_qubit(X, q.qubit, n), [=](double t) { return a * env.value(t) * std::cos(w * t + ph); });
                h.add(embed_qubit(Y, q.qubit, n), [=](double t) { return a * env.value(t) * std::sin(w * t + ph); });
                add_schedule_windows(h, q.envelope);
            }
            break;
        case DriveFamily::LinearX:
        case DriveFamily::LinearY:
        case DriveFamily::LinearZ:
            for (const auto& q : spec.qubits) {
                check_qubit(q.qubit, n);
                const double a = q.amplitude * amp_err;
                const auto env = q.envelope;
                const double w = q.omega_d;
                if (spec.family == DriveFamily::LinearY) {
                    h.add(embed_qubit(Y, q.qubit, n), [=](double t) { return a * env.value(t) * std::sin(w * t); });
                } else {
                    const Operator& axis = spec.family == DriveFamily::LinearX ? X : Z;
                    h.add(embed_qubit(axis, q.qubit, n), [=](double t) { return a * env.value(t) * std::cos(w * t); });
                }
                add_schedule_windows(h, q.envelope);
            }
            break;
        case DriveFamily::LCP:
        case DriveFamily::RCP: {
            const double sgn = spec.family == DriveFamily::LCP ? 1.0 : -1.0;
            for (const auto& q : spec.qubits) {
                check_qubit(q.qubit, n);
                const double a = q.amplitude * amp_err;
                const auto env = q.envelope;
                const double w = q.omega_d;
                h.add(embed_qubit(X, q.qubit, n), [=](double t) { return a * env.value(t) * std::cos(w * t); });
                h.add(embed_qubit(Y, q.qubit, n),
                      [=](double t) { return sgn * a * env.value(t) * std::sin(w * t); });
                add_schedule_windows(h, q.envelope);
            }
            break;
        }
        case DriveFamily::GlobalDD: {
            const Operator xx = pauli_power(PauliAxis::X, n);
            const Operator yy = pauli_power(PauliAxis::Y, n);
            for (const auto& p : spec.pulses) {
                const double c = p.theta * p.error * amp_err / (2.0 * p.duration);
                const auto shape = spec.shape;
                const double tc = p.center, T = p.duration;
                const Operator axis = std::cos(p.phase) * xx + std::sin(p.phase) * yy;
                h.add(axis, [=](double t) { return c * eval_envelope(shape, (t - tc) / T, T); });
            }
            add_pulse_windows(h, spec.pulses);
            if (errors.detuning != 0.0) h.add(errors.detuning * embed_qubit(Z, 0, n));
            break;
        }
        case DriveFamily::FloquetMultiHarmonic: {
            if (spec.harmonics.empty()) throw std::invalid_argument("Floquet drive requires at least one harmonic");
            if (!(spec.floquet_omega > 0.0)) throw std::invalid_argument("Floquet drive frequency must be positive");
            Operator ox = Operator::Zero(dim, dim), oy = Operator::Zero(dim, dim);
            for (std::size_t j = 0; j + 1 < n; ++j) {
                ox += embed_qubit(X, j, n) * embed_qubit(X, j + 1, n);
                oy += embed_qubit(Y, j, n) * embed_qubit(Y, j + 1, n);
            }
            const double period = 2.0 * std::numbers::pi / spec.floquet_omega;
            const double width = spec.envelope_width > 0.0 ? spec.envelope_width : period / 6.0;
            const auto shape = spec.shape;
            const double omega = spec.floquet_omega;
            for (const auto& hm : spec.harmonics) {
                const double a = 0.5 * spec.a_pulse * hm.amplitude * amp_err;
                const double nu = hm.nu;
                h.add(std::cos(hm.phase) * ox + std::sin(hm.phase) * oy, [=](double t) {
                    return a * floquet_envelope(shape, t, omega, width) * std::cos(nu * omega * t);
                });
            }
            break;
        }
        case DriveFamily::LocalPulseTrain: {
            check_qubit(spec.target_qubit, n);
            if (!(spec.pulse_area > 0.0)) throw std::invalid_argument("pulse area must be positive");
            const Operator x1 = embed_qubit(X, spec.target_qubit, n);
            const Operator y1 = embed_qubit(Y, spec.target_qubit, n);
            for (const auto& p : spec.pulses) {
                if (p.theta == 0.0) continue;
                const double c = 0.5 * p.theta * p.error * amp_err / (p.duration * spec.pulse_area);
                const auto shape = spec.shape;
                const double tc = p.center, T = p.duration;
                h.add(std::cos(p.phase) * x1 + std::sin(p.phase) * y1,
                      [=](double t) { return c * eval_envelope(shape, (t - tc) / T, T); });
            }
            add_pulse_windows(h, spec.pulses);
            break;
        }
    }
    return h;
}

Hamiltonian build_error(const ErrorSpec& errors, std::size_t n_qubits) {
    const Eigen::Index dim = register_dim(n_qubits);
    Hamiltonian h(dim);
    const Operator z0 = embed_qubit(pauli(PauliAxis::Z), 0, n_qubits);
    if (errors.detuning != 0.0) h.add(0.5 * errors.detuning * z0);
    if (errors.noise) {
        auto trace = errors.noise;
        h.add(0.5 * z0, [trace](double t) { return (*trace)(t); });
    }
    return h;
}

Hamiltonian assemble(const std::vector<Hamiltonian>& parts, double t_begin, double t_end, int samples) {
    Hamiltonian h;
    for (const auto& p : parts) h.append(p);
    if (h.dim() == 0) throw DimensionError("cannot assemble an empty Hamiltonian");
    Operator m;
    for (int i = 0; i < samples; ++i) {
        const double t = samples > 1 ? t_begin + (t_end - t_begin) * i / (samples - 1) : t_begin;
        h.evaluate(t, m);
        const double r = hermiticity_residual(m);
        if (r > 1e-10) {
            std::ostringstream os;
            os << "assembled Hamiltonian is not Hermitian at t=" << t << " (residual " << r << ")";
            throw InvariantError(os.str());
        }
    }
    return h;
}

}  // namespace pulsebench
