#pragma once

#include "pulsebench/qstate.hpp"

namespace pulsebench {

/// Wootters concurrence of a two-qubit density matrix, clamped to [0, 1].
double concurrence(const Operator& rho);
inline double concurrence(const QuantumState& rho) { return concurrence(rho.matrix()); }

/// -sum lambda log lambda (natural log), with 0 log 0 = 0. The state is
/// normalized by its trace first so sub-normalized walk states are handled.
double von_neumann_entropy(const Operator& rho);

/// Walk helpers assume the coin (dimension 2) is the first tensor factor.
Operator walk_position_state(const Operator& rho);
Operator walk_coin_state(const Operator& rho);

double walk_entanglement_entropy(const Operator& rho);
double mutual_information(const Operator& rho);

/// <x| Tr_coin rho |x> for site label x in [-(N_s-1)/2, (N_s-1)/2].
double target_site_probability(const Operator& rho, int site);

/// Position distribution p(x) indexed from the leftmost site.
std::vector<double> position_distribution(const Operator& rho);

/// <psi| rho |psi>.
double fidelity_pure(const Operator& rho, const StateVector& psi);

}  // namespace pulsebench
