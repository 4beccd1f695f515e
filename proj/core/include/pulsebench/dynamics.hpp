#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsebench/hamiltonians.hpp"
#include "pulsebench/qstate.hpp"

namespace pulsebench {

/// Raised when the integrator cannot continue (step underflow, invariant loss).
class IntegratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LindbladSpec {
    std::vector<double> gamma1;    // amplitude damping rate per qubit
    std::vector<double> gamma_phi; // dephasing rate per qubit

    static LindbladSpec uniform(std::size_t n_qubits, double gamma1, double gamma_phi);
    /// gamma1 = 1/T1, gamma_phi = 1/T2* - gamma1/2 (must be >= 0).
    static LindbladSpec from_times(const std::vector<double>& t1, const std::vector<double>& t2_star);
    void validate(std::size_t n_qubits) const;
};

/// sqrt(g1) sigma_-,k and sqrt(g_phi) sigma_z,k for each qubit; zero rates omitted.
std::vector<Operator> collapse_operators(const LindbladSpec& spec, std::size_t n_qubits);

/// Lindblad generator with preallocated workspaces.
class LindbladGenerator {
public:
    LindbladGenerator(const Hamiltonian& h, std::vector<Operator> collapse);

    void operator()(double t, const Operator& rho, Operator& drho);
    [[nodiscard]] Eigen::Index dim() const { return dim_; }

private:
    const Hamiltonian& h_;
    std::vector<Operator> ls_;
    std::vector<Operator> ls_dag_;
    Operator decay_;  // (1/2) sum L^dag L
    Operator h_buf_, heff_, tmp_;
    Eigen::Index dim_;
};

/// -i[H, rho] + sum_L (L rho L^dag - {L^dag L, rho}/2).
Operator lindblad_rhs(const Operator& h, const Operator& rho, const std::vector<Operator>& collapse);

struct IntegratorConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;         // 0 means unlimited apart from refinement windows
    std::vector<double> grid;      // strictly increasing output times
    double validation_tol = 1e-6;  // invariant check at grid points

    static std::vector<double> uniform_grid(double t0, double t1, int steps);
    void validate() const;
};

/// Named metric evaluated on each stored state.
struct MetricFn {
    std::string name;
    std::function<double(const Operator&)> fn;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Operator> states;
    std::vector<std::string> metric_names;
    std::vector<std::vector<double>> metric_values;  // [metric][sample]

    void add_metric(const std::string& name, std::vector<double> values);
    void compute_metrics(const std::vector<MetricFn>& metrics);
    [[nodiscard]] const std::vector<double>& metric(const std::string& name) const;
    [[nodiscard]] bool has_metric(const std::string& name) const;
    void append(const Trajectory& other, bool skip_first);
};

/// Writes `t` then metric columns with 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj, const std::string& time_column = "t");

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of the Lindblad equation with dense
/// output on the config grid. The initial state is validated against its own trace.
Trajectory evolve(const Operator& rho0, const Hamiltonian& h, const std::vector<Operator>& collapse,
                  const IntegratorConfig& config, IntegratorStats* stats = nullptr);

inline Trajectory evolve(const QuantumState& rho0, const Hamiltonian& h, const std::vector<Operator>& collapse,
                         const IntegratorConfig& config, IntegratorStats* stats = nullptr) {
    return evolve(rho0.matrix(), h, collapse, config, stats);
}

/// Final state only, integrating [t0, t1].
Operator propagate(const Operator& rho0, const Hamiltonian& h, const std::vector<Operator>& collapse, double t0,
                   double t1, const IntegratorConfig& config, IntegratorStats* stats = nullptr);

struct Segment {
    const Hamiltonian* hamiltonian = nullptr;
    std::vector<Operator> collapse;
    double t0 = 0.0;
    double t1 = 0.0;
};

/// Map applied at a segment boundary: (state, boundary time) -> state.
using StateMap = std::function<Operator(const Operator&, double)>;

/// Segments must be contiguous. maps[i] (if set) is applied after segment i;
/// a grid point on a boundary records the post-map state.
Trajectory evolve_piecewise(const Operator& rho0, const std::vector<Segment>& segments,
                            const std::vector<StateMap>& maps, const IntegratorConfig& config,
                            IntegratorStats* stats = nullptr);

}  // namespace pulsebench
