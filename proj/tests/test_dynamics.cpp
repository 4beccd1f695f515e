#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pulsebench/dynamics.hpp"
#include "pulsebench/metrics.hpp"
#include "pulsebench/protocols.hpp"
#include "support.hpp"

using namespace pulsebench;
using namespace pulsebench::testing;

namespace {

Operator excited_single() {
    // sigma_- = |1><0| lowers index 0, so index 0 is the excited level.
    Operator rho = Operator::Zero(2, 2);
    rho(0, 0) = 1.0;
    return rho;
}

}  // namespace

TEST(Collapse, ZeroRatesGiveNoOperators) {
    EXPECT_TRUE(collapse_operators(LindbladSpec::uniform(2, 0.0, 0.0), 2).empty());
}

TEST(Collapse, TwoQubitsGiveFour) {
    const auto ls = collapse_operators(LindbladSpec::uniform(2, 0.001, 0.001), 2);
    ASSERT_EQ(ls.size(), 4u);
}

TEST(Collapse, DampingNormIsSqrtGamma) {
    const auto ls = collapse_operators(LindbladSpec{{0.05}, {0.0}}, 1);
    ASSERT_EQ(ls.size(), 1u);
    Eigen::JacobiSVD<Operator> svd(ls[0]);
    EXPECT_NEAR(svd.singularValues()(0), std::sqrt(0.05), 1e-15);
}

TEST(Collapse, RatesFromTimes) {
    const auto spec = LindbladSpec::from_times({10.0}, {8.0});
    EXPECT_NEAR(spec.gamma1[0], 0.1, 1e-15);
    EXPECT_NEAR(spec.gamma_phi[0], 1.0 / 8.0 - 0.05, 1e-15);
    EXPECT_THROW(LindbladSpec::from_times({1.0}, {3.0}), std::invalid_argument);
    EXPECT_THROW(LindbladSpec::uniform(2, -1.0, 0.0).validate(2), std::invalid_argument);
}

TEST(LindbladRhs, ZeroGeneratorIsZero) {
    std::mt19937_64 rng(2);
    const Operator rho = random_density(4, rng);
    EXPECT_EQ(lindblad_rhs(Operator::Zero(4, 4), rho, {}).norm(), 0.0);
}

TEST(LindbladRhs, ExcitedPopulationDecaysAtGamma) {
    const double g = 0.3;
    const Operator d = lindblad_rhs(Operator::Zero(2, 2), excited_single(), {std::sqrt(g) * sigma_minus()});
    EXPECT_NEAR(d(0, 0).real(), -g, 1e-15);
    EXPECT_NEAR(d(1, 1).real(), g, 1e-15);
}

TEST(LindbladRhs, Traceless) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator h = random_hermitian(4, rng);
        const Operator rho = random_density(4, rng);
        std::vector<Operator> ls;
        for (int k = 0; k < 3; ++k) ls.push_back(random_hermitian(4, rng) + Complex(0.0, 1.0) * random_hermitian(4, rng));
        EXPECT_LT(std::abs(lindblad_rhs(h, rho, ls).trace()), 1e-12);
    }
}

TEST(LindbladRhs, GeneratorMatchesFreeFunction) {
    std::mt19937_64 rng(6);
    const Operator hm = random_hermitian(4, rng);
    Hamiltonian h(4);
    h.add(hm);
    const auto ls = collapse_operators(LindbladSpec::uniform(2, 0.1, 0.2), 2);
    LindbladGenerator gen(h, ls);
    const Operator rho = random_density(4, rng);
    Operator d;
    gen(0.0, rho, d);
    EXPECT_LT((d - lindblad_rhs(hm, rho, ls)).norm(), 1e-13);
}

TEST(Evolve, NoGeneratorKeepsState) {
    std::mt19937_64 rng(7);
    const Operator rho0 = random_density(4, rng);
    IntegratorConfig ic;
    ic.grid = IntegratorConfig::uniform_grid(0.0, 10.0, 20);
    const auto traj = evolve(rho0, Hamiltonian(4), {}, ic);
    for (const auto& s : traj.states) EXPECT_LT((s - rho0).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolve, AmplitudeDampingClosedForm) {
    const double g = 0.05;
    IntegratorConfig ic;
    ic.grid = IntegratorConfig::uniform_grid(0.0, 42.0, 420);
    const auto traj = evolve(excited_single(), build_static(SystemSpec{1, {2.0}, {}}),
                             collapse_operators(LindbladSpec{{g}, {0.0}}, 1), ic);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        EXPECT_NEAR(traj.states[i](0, 0).real(), std::exp(-g * traj.times[i]), 1e-6);
    }
}

TEST(Evolve, BellDephasingConcurrence) {
    const double ga = 0.01, gb = 0.02;
    IntegratorConfig ic;
    ic.grid = IntegratorConfig::uniform_grid(0.0, 40.0, 200);
    const auto traj = evolve(make_initial_state(BellState{BellKind::PhiPlus}), build_static(SystemSpec{2, {4.8, 4.8}, {}}),
                             collapse_operators(LindbladSpec{{0.0, 0.0}, {ga, gb}}, 2), ic);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        EXPECT_NEAR(concurrence(traj.states[i]), std::exp(-2.0 * (ga + gb) * traj.times[i]), 1e-5);
    }
}

TEST(Evolve, TraceAndPositivityOnShapedPulseScenario) {
    ScenarioConfig cfg;
    cfg.seed = 1;
    const auto traj = run_protocol(ProtocolKind::SinglePulse, cfg);
    for (const auto& s : traj.states) {
        EXPECT_LE(std::abs(s.trace().real() - 1.0), 1e-8);
        EXPECT_GE(min_eigenvalue(s), -1e-7);
    }
}

TEST(Evolve, TighterToleranceConverges) {
    ScenarioConfig cfg;
    cfg.seed = 2;
    cfg.t_end = 20.0;
    cfg.n_steps = 50;
    const auto loose = run_protocol(ProtocolKind::SinglePulse, cfg).states.back();
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    const auto reference = run_protocol(ProtocolKind::SinglePulse, cfg).states.back();
    EXPECT_LT((loose - reference).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Evolve, RejectsBadConfig) {
    IntegratorConfig ic;
    ic.grid = {0.0, 1.0, 1.0};
    EXPECT_THROW(ic.validate(), std::invalid_argument);
    ic.grid = {0.0, 1.0};
    ic.rtol = 0.0;
    EXPECT_THROW(ic.validate(), std::invalid_argument);
    IntegratorConfig ok;
    ok.grid = {0.0, 1.0};
    EXPECT_THROW(evolve(identity(2) / 2.0, Hamiltonian(4), {}, ok), DimensionError);
}

TEST(Evolve, StepUnderflowAborts) {
    Hamiltonian h(2);
    h.add(pauli(PauliAxis::X), [](double t) { return 1e30 * std::sin(1e12 * t); });
    IntegratorConfig ic;
    ic.grid = {1.0, 2.0};
    EXPECT_THROW(evolve(excited_single(), h, {}, ic), IntegratorError);
}

TEST(Evolve, BreakpointsWithinRoundingOfTheEndsAreMerged) {
    Hamiltonian h = build_static(SystemSpec{1, {2.0}, {}});
    const double t0 = 4.0 / 3.0, t1 = 8.0 / 3.0;
    h.add_window(RefinementWindow{std::nextafter(t0, 2.0), std::nextafter(t1, 0.0), 0.1});
    IntegratorConfig ic;
    ic.grid = {t0, t1};
    const auto traj = evolve(excited_single(), h, {}, ic);
    EXPECT_NEAR(traj.states.back()(0, 0).real(), 1.0, 1e-12);
}

TEST(Piecewise, SingleSegmentMatchesEvolve) {
    const auto h = build_static(SystemSpec{2, {4.8, 3.0}, {}});
    Hamiltonian full = h;
    full.append(build_interaction(CouplingSpec{CouplingKind::XY, {0.5}}, 2));
    const auto ls = collapse_operators(LindbladSpec::uniform(2, 0.01, 0.02), 2);
    const Operator rho0 = make_initial_state(SeparableState{SeparableLabel::PlusZero}).matrix();
    IntegratorConfig ic;
    ic.grid = IntegratorConfig::uniform_grid(0.0, 5.0, 10);
    const auto a = evolve(rho0, full, ls, ic);
    const auto b = evolve_piecewise(rho0, {Segment{&full, ls, 0.0, 5.0}}, {}, ic);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_LT((a.states[i] - b.states[i]).norm(), 1e-14);
}

TEST(Piecewise, IdentityMapsMatchSingleSpan) {
    Hamiltonian full = build_static(SystemSpec{2, {4.8, 3.0}, {}});
    full.append(build_interaction(CouplingSpec{CouplingKind::XY, {0.5}}, 2));
    const auto ls = collapse_operators(LindbladSpec::uniform(2, 0.01, 0.02), 2);
    const Operator rho0 = make_initial_state(SeparableState{SeparableLabel::PlusZero}).matrix();
    IntegratorConfig ic;
    ic.grid = IntegratorConfig::uniform_grid(0.0, 6.0, 12);
    const auto a = evolve(rho0, full, ls, ic);
    const StateMap id = [](const Operator& r, double) { return r; };
    const auto b = evolve_piecewise(rho0, {Segment{&full, ls, 0.0, 2.0}, Segment{&full, ls, 2.0, 4.0}, Segment{&full, ls, 4.0, 6.0}},
                                    {id, id, id}, ic);
    for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_LT((a.states[i] - b.states[i]).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Piecewise, ReplacementMapYieldsIdealState) {
    const Operator ideal = make_initial_state(BellState{BellKind::PhiPlus}).matrix();
    Hamiltonian h = build_static(SystemSpec{2, {4.8, 4.8}, {}});
    const auto ls = collapse_operators(LindbladSpec::uniform(2, 0.05, 0.05), 2);
    IntegratorConfig ic;
    ic.grid = {0.0, 1.0, 2.0};
    const StateMap replace = [&](const Operator& r, double) { return qec_correct(r, ideal, 1.0); };
    const auto traj = evolve_piecewise(ideal, {Segment{&h, ls, 0.0, 1.0}, Segment{&h, ls, 1.0, 2.0}}, {replace, {}}, ic);
    EXPECT_LT((traj.states[1] - ideal).norm(), 1e-15);
    EXPECT_LT(concurrence(traj.states[2]), 1.0);
}

TEST(Piecewise, RejectsGaps) {
    Hamiltonian h(2);
    IntegratorConfig ic;
    ic.grid = {0.0, 2.0};
    EXPECT_THROW(evolve_piecewise(excited_single(), {Segment{&h, {}, 0.0, 1.0}, Segment{&h, {}, 1.5, 2.0}}, {}, ic),
                 std::invalid_argument);
}

TEST(Trajectory, CsvHasHeaderAndSeventeenDigits) {
    Trajectory t;
    t.times = {0.0, 0.1};
    t.add_metric("concurrence", {1.0, 1.0 / 3.0});
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(), "t,concurrence\n0,1\n0.10000000000000001,0.33333333333333331\n");
    EXPECT_THROW(t.metric("ee"), std::out_of_range);
}
