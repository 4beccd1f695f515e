#include <gtest/gtest.h>

#include <random>

#include "pulsebench/metrics.hpp"
#include "pulsebench/qwalk.hpp"
#include "support.hpp"

using namespace pulsebench;
using namespace pulsebench::testing;

namespace {

/// Wootters via the Hermitian form sqrt(sqrt(rho) rho~ sqrt(rho)), an independent route.
double concurrence_oracle(const Operator& rho) {
    const Operator yy = kron(pauli(PauliAxis::Y), pauli(PauliAxis::Y));
    const Operator tilde = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Operator> es(rho);
    const Operator sq = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                        es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Operator> r(sq * tilde * sq);
    Eigen::VectorXd l = r.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(l.data(), l.data() + l.size(), std::greater<>());
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

Operator product(const Operator& a, const Operator& b) { return kron(a, b); }

}  // namespace

TEST(Concurrence, BellAndProduct) {
    EXPECT_NEAR(concurrence(make_initial_state(BellState{BellKind::PhiPlus})), 1.0, 1e-12);
    EXPECT_NEAR(concurrence(make_initial_state(BellState{BellKind::PsiPlus})), 1.0, 1e-12);
    EXPECT_NEAR(concurrence(make_initial_state(SeparableState{SeparableLabel::ZeroZero})), 0.0, 1e-12);
}

TEST(Concurrence, WernerClosedForm) {
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        EXPECT_NEAR(concurrence(werner(p)), std::max(0.0, (3.0 * p - 1.0) / 2.0), 1e-8) << p;
    }
    EXPECT_NEAR(concurrence(werner(0.5)), 0.25, 1e-12);
}

TEST(Concurrence, MatchesIndependentEvaluation) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const Operator rho = random_density(4, rng);
        EXPECT_NEAR(concurrence(rho), concurrence_oracle(rho), 1e-8);
        const StateVector psi = random_pure(4, rng);
        // Pure state: C = 2 |a d - b c|.
        const double pure = 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
        EXPECT_NEAR(concurrence(Operator(psi * psi.adjoint())), pure, 1e-8);
    }
}

TEST(Concurrence, LocalUnitaryInvariance) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const Operator rho = random_density(4, rng);
        const Operator u = kron(random_unitary2(rng), random_unitary2(rng));
        EXPECT_NEAR(concurrence(Operator(u * rho * u.adjoint())), concurrence(rho), 1e-8);
    }
}

TEST(Concurrence, SeparableMixturesVanish) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Operator rho = Operator::Zero(4, 4);
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double w = u(rng);
            const StateVector a = random_pure(2, rng), b = random_pure(2, rng);
            rho += w * product(a * a.adjoint(), b * b.adjoint());
            total += w;
        }
        EXPECT_NEAR(concurrence(Operator(rho / total)), 0.0, 1e-8);
    }
}

TEST(Concurrence, RejectsWrongDimension) { EXPECT_THROW(concurrence(identity(2) / 2.0), DimensionError); }

TEST(Entropy, ReferenceValues) {
    std::mt19937_64 rng(24);
    const StateVector psi = random_pure(4, rng);
    EXPECT_NEAR(von_neumann_entropy(psi * psi.adjoint()), 0.0, 1e-10);
    EXPECT_NEAR(von_neumann_entropy(identity(2) / 2.0), std::log(2.0), 1e-14);
    EXPECT_NEAR(von_neumann_entropy(identity(4) / 4.0), std::log(4.0), 1e-14);
}

TEST(WalkMetrics, InitialState) {
    const Operator rho = walk_initial_state(11);
    EXPECT_NEAR(walk_entanglement_entropy(rho), 0.0, 1e-10);
    EXPECT_NEAR(mutual_information(rho), 0.0, 1e-10);
    EXPECT_NEAR(target_site_probability(rho, 0), 1.0, 1e-15);
    EXPECT_NEAR(target_site_probability(rho, -3), 0.0, 1e-15);
    const auto p = position_distribution(rho);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-10);
}

TEST(WalkMetrics, MaximallyMixedPosition) {
    const Operator rho = kron(identity(2) / 2.0, identity(11) / 11.0);
    EXPECT_NEAR(walk_entanglement_entropy(rho), std::log(11.0), 1e-12);
    EXPECT_NEAR(mutual_information(rho), 0.0, 1e-12);
}

TEST(WalkMetrics, ProductStateHasNoMutualInformation) {
    std::mt19937_64 rng(25);
    EXPECT_NEAR(mutual_information(kron(random_density(2, rng), random_density(11, rng))), 0.0, 1e-10);
}

TEST(WalkMetrics, MaximallyEntangledTwoSiteWalk) {
    StateVector psi = StateVector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);  // coin 0 at left site, coin 1 at right site
    EXPECT_NEAR(mutual_information(psi * psi.adjoint()), 2.0 * std::log(2.0), 1e-12);
}

TEST(WalkMetrics, RandomStatesRespectBounds) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 30; ++trial) {
        const Operator rho = random_density(22, rng);
        EXPECT_GE(mutual_information(rho), -1e-9);
        EXPECT_LE(mutual_information(rho), 2.0 * std::log(2.0) + 1e-9);
        EXPECT_LE(walk_entanglement_entropy(rho), std::log(11.0) + 1e-12);
        const auto p = position_distribution(rho);
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-10);
        for (int x = -5; x <= 5; ++x) {
            EXPECT_NEAR(target_site_probability(rho, x), p[static_cast<std::size_t>(x + 5)], 1e-15);
        }
    }
}

TEST(Fidelity, PureReferenceValues) {
    const StateVector phi = phi_plus();
    EXPECT_NEAR(fidelity_pure(phi * phi.adjoint(), phi), 1.0, 1e-15);
    StateVector psi = StateVector::Zero(4);
    psi(1) = 1.0;
    EXPECT_NEAR(fidelity_pure(phi * phi.adjoint(), psi), 0.0, 1e-15);
    EXPECT_NEAR(fidelity_pure(werner(0.5), phi), 0.625, 1e-15);
    EXPECT_THROW(fidelity_pure(werner(0.5), StateVector::Zero(2)), DimensionError);
}
