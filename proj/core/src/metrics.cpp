#include "pulsebench/metrics.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pulsebench {

namespace {

Eigen::Index walk_sites(const Operator& rho) {
    if (rho.rows() != rho.cols() || rho.rows() % 2 != 0 || rho.rows() < 2) {
        std::ostringstream os;
        os << "walk state dimension " << rho.rows() << " is not 2 * N_s";
        throw DimensionError(os.str());
    }
    return rho.rows() / 2;
}

}  // namespace

double concurrence(const Operator& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("concurrence requires a 4x4 two-qubit state");
    const Operator yy = kron(pauli(PauliAxis::Y), pauli(PauliAxis::Y));
    // With rho = W W^dagger, the lambdas are the singular values of W^T (Y x Y) W; this avoids
    // square roots of eigenvalues that are zero up to rounding.
    Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()));
    Operator w = es.eigenvectors();
    for (int k = 0; k < 4; ++k) w.col(k) *= std::sqrt(std::max(es.eigenvalues()(k), 0.0));
    const Operator tau = w.transpose() * yy * w;
    const Eigen::JacobiSVD<Operator> svd(tau);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[i] = svd.singularValues()(i);
    std::sort(lam.begin(), lam.end(), std::greater<>());
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    return std::clamp(c, 0.0, 1.0);
}

double von_neumann_entropy(const Operator& rho) {
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) return 0.0;
    Operator h = 0.5 * (rho + rho.adjoint()) / tr;
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l > 0.0) s -= l * std::log(l);
    }
    return std::max(s, 0.0);
}

Operator walk_position_state(const Operator& rho) {
    const Eigen::Index ns = walk_sites(rho);
    return rho.topLeftCorner(ns, ns) + rho.bottomRightCorner(ns, ns);
}

Operator walk_coin_state(const Operator& rho) {
    const Eigen::Index ns = walk_sites(rho);
    Operator c(2, 2);
    c(0, 0) = rho.topLeftCorner(ns, ns).trace();
    c(0, 1) = rho.topRightCorner(ns, ns).trace();
    c(1, 0) = rho.bottomLeftCorner(ns, ns).trace();
    c(1, 1) = rho.bottomRightCorner(ns, ns).trace();
    return c;
}

double walk_entanglement_entropy(const Operator& rho) {
    return von_neumann_entropy(walk_position_state(rho));
}

double mutual_information(const Operator& rho) {
    const double mi =
        von_neumann_entropy(walk_coin_state(rho)) + von_neumann_entropy(walk_position_state(rho)) - von_neumann_entropy(rho);
    return mi;
}

double target_site_probability(const Operator& rho, int site) {
    const Eigen::Index ns = walk_sites(rho);
    const int half = static_cast<int>((ns - 1) / 2);
    if (site < -half || site > half) {
        std::ostringstream os;
        os << "site " << site << " outside [" << -half << ", " << half << "]";
        throw DimensionError(os.str());
    }
    const Eigen::Index idx = site + half;
    return (rho(idx, idx) + rho(ns + idx, ns + idx)).real();
}

std::vector<double> position_distribution(const Operator& rho) {
    const Eigen::Index ns = walk_sites(rho);
    std::vector<double> p(ns);
    for (Eigen::Index i = 0; i < ns; ++i) p[i] = (rho(i, i) + rho(ns + i, ns + i)).real();
    return p;
}

double fidelity_pure(const Operator& rho, const StateVector& psi) {
    if (psi.size() != rho.rows()) throw DimensionError("fidelity: state dimensions differ");
    const Complex f = psi.adjoint() * rho * psi;
    return f.real();
}

}  // namespace pulsebench
