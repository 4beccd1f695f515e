#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace pulsebench {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Raised when a dimension or structural precondition is violated.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a density matrix fails its hermiticity/trace/positivity checks.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StateTolerances {
    double hermiticity = 1e-9;
    double trace = 1e-8;
    double positivity = 1e-8;
};

/// Throws InvariantError naming the first violated invariant. `expected_trace`
/// is 1 for physical states; sub-normalized walk states pass their own value.
void validate_density(const Operator& rho, const StateTolerances& tol = {}, double expected_trace = 1.0);

double hermiticity_residual(const Operator& m);
double min_eigenvalue(const Operator& rho);

/// Density matrix with unit trace, hermiticity and positivity checked at construction.
class QuantumState {
public:
    explicit QuantumState(Operator rho, const StateTolerances& tol = {});

    static QuantumState from_pure(const StateVector& psi);

    [[nodiscard]] Eigen::Index dim() const { return rho_.rows(); }
    [[nodiscard]] const Operator& matrix() const { return rho_; }
    [[nodiscard]] Complex operator()(Eigen::Index r, Eigen::Index c) const { return rho_(r, c); }

private:
    Operator rho_;
};

enum class PauliAxis { I, X, Y, Z };

Operator pauli(PauliAxis axis);
Operator sigma_plus();   // |0><1| in the convention sigma_+ = (X + iY)/2
Operator sigma_minus();  // |1><0|
Operator identity(Eigen::Index dim);
Operator kron(const Operator& a, const Operator& b);

/// I (x) ... (x) op (x) ... (x) I with `op` at `site`; local_dims[k] is the
/// dimension of subsystem k.
Operator tensor_embed(const Operator& op, std::size_t site, std::span<const Eigen::Index> local_dims);

/// Qubit-register shorthand for tensor_embed with n_qubits local dimensions of 2.
Operator embed_qubit(const Operator& op, std::size_t site, std::size_t n_qubits);

/// sigma_a (x) sigma_a (x) ... over all n qubits.
Operator pauli_power(PauliAxis axis, std::size_t n_qubits);

/// Pauli string for lexicographic index over {I,X,Y,Z}^n (index 0 is identity).
std::vector<PauliAxis> pauli_string(std::size_t index, std::size_t n_qubits);
Operator pauli_string_operator(std::span<const PauliAxis> string);

/// Tr(rho P_i) for every non-identity Pauli string, lexicographic order.
std::vector<double> pauli_expectations(const Operator& rho, std::size_t n_qubits);

/// Reduced density matrix over the subsystems listed in `keep` (ascending order).
Operator partial_trace(const Operator& rho, std::span<const std::size_t> keep, std::span<const Eigen::Index> dims);

// Initial states -----------------------------------------------------------

enum class SeparableLabel { ZeroZero, PlusZero, ZeroPlus, PlusPlus };
enum class BellKind { PhiPlus, PsiPlus };

struct SeparableState { SeparableLabel label; };
struct BellState { BellKind kind; };
struct GhzState { std::size_t n_qubits; };
struct PerturbedGhzState {
    std::size_t n_qubits;
    double epsilon;
    std::uint64_t seed;
};

using InitialStateSpec = std::variant<SeparableState, BellState, GhzState, PerturbedGhzState>;

StateVector initial_state_vector(const InitialStateSpec& spec);
QuantumState make_initial_state(const InitialStateSpec& spec);
std::size_t initial_state_qubits(const InitialStateSpec& spec);

/// Config tag round trip: "00", "+0", "0+", "++", "phi+", "psi+", "ghz", "perturbed_ghz".
std::string initial_state_tag(const InitialStateSpec& spec);

}  // namespace pulsebench
