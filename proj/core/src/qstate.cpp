#include "pulsebench/qstate.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "pulsebench/seeding.hpp"

namespace pulsebench {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t qubits_for_dim(Eigen::Index dim) {
    std::size_t n = 0;
    Eigen::Index d = 1;
    while (d < dim) {
        d *= 2;
        ++n;
    }
    if (d != dim) {
        std::ostringstream os;
        os << "dimension " << dim << " is not a power of two";
        throw DimensionError(os.str());
    }
    return n;
}

}  // namespace

double hermiticity_residual(const Operator& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Operator& rho) {
    Operator h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void validate_density(const Operator& rho, const StateTolerances& tol, double expected_trace) {
    if (rho.rows() == 0 || rho.rows() != rho.cols()) {
        throw DimensionError("density matrix must be square and non-empty");
    }
    if (!rho.allFinite()) throw InvariantError("density matrix has non-finite entries");
    const double herm = hermiticity_residual(rho);
    if (herm > tol.hermiticity) {
        std::ostringstream os;
        os << "hermiticity violated: residual " << herm;
        throw InvariantError(os.str());
    }
    const double tr = rho.trace().real();
    if (std::abs(tr - expected_trace) > tol.trace) {
        std::ostringstream os;
        os << "trace violated: Tr rho = " << tr << ", expected " << expected_trace;
        throw InvariantError(os.str());
    }
    const double lmin = min_eigenvalue(rho);
    if (lmin < -tol.positivity) {
        std::ostringstream os;
        os << "positivity violated: min eigenvalue " << lmin;
        throw InvariantError(os.str());
    }
}

QuantumState::QuantumState(Operator rho, const StateTolerances& tol) : rho_(std::move(rho)) {
    validate_density(rho_, tol);
}

QuantumState QuantumState::from_pure(const StateVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw InvariantError("zero state vector");
    StateVector v = psi / n;
    return QuantumState(v * v.adjoint());
}

Operator pauli(PauliAxis axis) {
    Operator m(2, 2);
    switch (axis) {
        case PauliAxis::I: m << 1, 0, 0, 1; break;
        case PauliAxis::X: m << 0, 1, 1, 0; break;
        case PauliAxis::Y: m << 0, -kI, kI, 0; break;
        case PauliAxis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

Operator sigma_plus() {
    return 0.5 * (pauli(PauliAxis::X) + kI * pauli(PauliAxis::Y));
}

Operator sigma_minus() {
    return 0.5 * (pauli(PauliAxis::X) - kI * pauli(PauliAxis::Y));
}

Operator identity(Eigen::Index dim) {
    return Operator::Identity(dim, dim);
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator tensor_embed(const Operator& op, std::size_t site, std::span<const Eigen::Index> local_dims) {
    if (site >= local_dims.size()) {
        std::ostringstream os;
        os << "site " << site << " out of range for " << local_dims.size() << " subsystems";
        throw DimensionError(os.str());
    }
    if (op.rows() != local_dims[site] || op.cols() != local_dims[site]) {
        std::ostringstream os;
        os << "operator of dimension " << op.rows() << "x" << op.cols() << " does not match local dimension "
           << local_dims[site] << " at site " << site;
        throw DimensionError(os.str());
    }
    Eigen::Index left = 1;
    Eigen::Index right = 1;
    for (std::size_t k = 0; k < site; ++k) left *= local_dims[k];
    for (std::size_t k = site + 1; k < local_dims.size(); ++k) right *= local_dims[k];
    return kron(kron(identity(left), op), identity(right));
}

Operator embed_qubit(const Operator& op, std::size_t site, std::size_t n_qubits) {
    std::vector<Eigen::Index> dims(n_qubits, 2);
    return tensor_embed(op, site, dims);
}

Operator pauli_power(PauliAxis axis, std::size_t n_qubits) {
    Operator out = identity(1);
    const Operator p = pauli(axis);
    for (std::size_t k = 0; k < n_qubits; ++k) out = kron(out, p);
    return out;
}

std::vector<PauliAxis> pauli_string(std::size_t index, std::size_t n_qubits) {
    std::vector<PauliAxis> s(n_qubits);
    for (std::size_t k = n_qubits; k-- > 0;) {
        s[k] = static_cast<PauliAxis>(index % 4);
        index /= 4;
    }
    return s;
}

Operator pauli_string_operator(std::span<const PauliAxis> string) {
    Operator out = identity(1);
    for (auto a : string) out = kron(out, pauli(a));
    return out;
}

std::vector<double> pauli_expectations(const Operator& rho, std::size_t n_qubits) {
    if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
    if (qubits_for_dim(rho.rows()) != n_qubits) {
        std::ostringstream os;
        os << "dimension " << rho.rows() << " does not match " << n_qubits << " qubits";
        throw DimensionError(os.str());
    }
    std::size_t count = 1;
    for (std::size_t k = 0; k < n_qubits; ++k) count *= 4;
    std::vector<double> out;
    out.reserve(count - 1);
    for (std::size_t i = 1; i < count; ++i) {
        const auto s = pauli_string(i, n_qubits);
        out.push_back((rho * pauli_string_operator(s)).trace().real());
    }
    return out;
}

Operator partial_trace(const Operator& rho, std::span<const std::size_t> keep, std::span<const Eigen::Index> dims) {
    if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
    const Eigen::Index total =
        std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
    if (total != rho.rows() || rho.rows() != rho.cols()) {
        std::ostringstream os;
        os << "partial_trace: subsystem dimensions multiply to " << total << " but state has dimension "
           << rho.rows();
        throw DimensionError(os.str());
    }
    const std::size_t n = dims.size();
    std::vector<bool> kept(n, false);
    for (std::size_t k : keep) {
        if (k >= n) throw DimensionError("partial_trace: subsystem index out of range");
        kept[k] = true;
    }
    Eigen::Index dk = 1;
    Eigen::Index dt = 1;
    for (std::size_t k = 0; k < n; ++k) (kept[k] ? dk : dt) *= dims[k];

    // Split each full index into kept and traced multi-indices.
    std::vector<Eigen::Index> kept_index(total), traced_index(total);
    for (Eigen::Index i = 0; i < total; ++i) {
        Eigen::Index rem = i;
        Eigen::Index ki = 0, ti = 0, kstride = 1, tstride = 1;
        for (std::size_t k = n; k-- > 0;) {
            const Eigen::Index digit = rem % dims[k];
            rem /= dims[k];
            if (kept[k]) {
                ki += digit * kstride;
                kstride *= dims[k];
            } else {
                ti += digit * tstride;
                tstride *= dims[k];
            }
        }
        kept_index[i] = ki;
        traced_index[i] = ti;
    }
    Operator out = Operator::Zero(dk, dk);
    for (Eigen::Index i = 0; i < total; ++i) {
        for (Eigen::Index j = 0; j < total; ++j) {
            if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += rho(i, j);
        }
    }
    return out;
}

StateVector initial_state_vector(const InitialStateSpec& spec) {
    const double r = 1.0 / std::sqrt(2.0);
    return std::visit(
        [&](const auto& s) -> StateVector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SeparableState>) {
                StateVector zero(2), plus(2);
                zero << 1, 0;
                plus << r, r;
                StateVector a = (s.label == SeparableLabel::PlusZero || s.label == SeparableLabel::PlusPlus) ? plus : zero;
                StateVector b = (s.label == SeparableLabel::ZeroPlus || s.label == SeparableLabel::PlusPlus) ? plus : zero;
                StateVector out(4);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
                return out;
            } else if constexpr (std::is_same_v<T, BellState>) {
                StateVector out = StateVector::Zero(4);
                if (s.kind == BellKind::PhiPlus) {
                    out(0) = r;
                    out(3) = r;
                } else {
                    out(1) = r;
                    out(2) = r;
                }
                return out;
            } else if constexpr (std::is_same_v<T, GhzState>) {
                if (s.n_qubits < 1) throw DimensionError("GHZ state needs at least one qubit");
                const Eigen::Index dim = Eigen::Index{1} << s.n_qubits;
                StateVector out = StateVector::Zero(dim);
                out(0) = r;
                out(dim - 1) = r;
                return out;
            } else {
                if (s.n_qubits < 1) throw DimensionError("GHZ state needs at least one qubit");
                if (!(s.epsilon >= 0.0)) throw std::invalid_argument("perturbation epsilon must be >= 0");
                const Eigen::Index dim = Eigen::Index{1} << s.n_qubits;
                StateVector out = StateVector::Zero(dim);
                out(0) = r;
                out(dim - 1) = r;
                std::mt19937_64 rng(derive_seed(s.seed, SeedStream::InitialState));
                std::normal_distribution<double> normal(0.0, 1.0);
                StateVector delta(dim);
                for (Eigen::Index i = 0; i < dim; ++i) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    delta(i) = Complex(re, im);
                }
                delta /= delta.norm();
                out += s.epsilon * delta;
                return out / out.norm();
            }
        },
        spec);
}

QuantumState make_initial_state(const InitialStateSpec& spec) {
    return QuantumState::from_pure(initial_state_vector(spec));
}

std::size_t initial_state_qubits(const InitialStateSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GhzState> || std::is_same_v<T, PerturbedGhzState>) {
                return s.n_qubits;
            } else {
                return 2;
            }
        },
        spec);
}

std::string initial_state_tag(const InitialStateSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SeparableState>) {
                switch (s.label) {
                    case SeparableLabel::ZeroZero: return "00";
                    case SeparableLabel::PlusZero: return "+0";
                    case SeparableLabel::ZeroPlus: return "0+";
                    case SeparableLabel::PlusPlus: return "++";
                }
                return "00";
            } else if constexpr (std::is_same_v<T, BellState>) {
                return s.kind == BellKind::PhiPlus ? "phi+" : "psi+";
            } else if constexpr (std::is_same_v<T, GhzState>) {
                return "ghz";
            } else {
                return "perturbed_ghz";
            }
        },
        spec);
}

}  // namespace pulsebench
