#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "pulsebench/hamiltonians.hpp"
#include "pulsebench/protocols.hpp"
#include "support.hpp"

using namespace pulsebench;
using namespace pulsebench::testing;

namespace {

Operator diag(std::initializer_list<double> v) {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d(i++) = x;
    return d.asDiagonal();
}

QubitDrive drive_on(std::size_t q, double amp, double omega_d, EnvelopeSchedule env) {
    QubitDrive d;
    d.qubit = q;
    d.amplitude = amp;
    d.omega_d = omega_d;
    d.envelope = std::move(env);
    return d;
}

EnvelopeSchedule gp_window(double tc, double T) { return EnvelopeSchedule(PulseShape{ShapeKind::GP}, {PulseWindow{tc, T, 1.0}}); }

}  // namespace

TEST(Static, SingleQubitNoNoise) {
    const auto h = build_static(SystemSpec{1, {2.0}, {}});
    for (double t : {0.0, 3.0, 17.0}) EXPECT_LT((h(t) - pauli(PauliAxis::Z)).norm(), 1e-15);
}

TEST(Static, TwoQubitZeemanDiagonal) {
    const auto h = build_static(SystemSpec{2, {4.8, 4.8}, {}});
    EXPECT_LT((h(0.0) - diag({4.8, 0.0, 0.0, -4.8})).norm(), 1e-14);
}

TEST(Static, NoiseOnlyOnQubitZero) {
    auto trace = std::make_shared<NoiseTrace>(NoiseTrace::synthesize(LorentzianNoiseSpec{}));
    const auto h = build_static(SystemSpec{2, {4.8, 4.8}, {trace, nullptr}});
    const Operator d = h(1.3) - h(7.9);
    const Operator z0 = embed_qubit(pauli(PauliAxis::Z), 0, 2);
    EXPECT_LT((d - ((*trace)(1.3) - (*trace)(7.9)) * z0).norm(), 1e-13);
}

TEST(Interaction, XYCouplingMatrix) {
    const auto h = build_interaction(CouplingSpec{CouplingKind::XY, {0.5}}, 2);
    Operator expect = Operator::Zero(4, 4);
    expect(1, 2) = expect(2, 1) = 0.5;
    EXPECT_LT((h(0.0) - expect).norm(), 1e-15);
}

TEST(Interaction, YYPairsAntidiagonal) {
    const double g = 0.7;
    const auto h = build_interaction(CouplingSpec{CouplingKind::YYPairs, {g}}, 2);
    Operator expect = Operator::Zero(4, 4);
    expect(0, 3) = -g;
    expect(1, 2) = g;
    expect(2, 1) = g;
    expect(3, 0) = -g;
    EXPECT_LT((h(0.0) - expect).norm(), 1e-15);
}

TEST(Interaction, ZeroEnvelopeGivesZeroOperator) {
    InteractionModulation mod{ModulationKind::Envelope, EnvelopeSchedule(PulseShape{ShapeKind::GP}, {})};
    const auto h = build_interaction(CouplingSpec{CouplingKind::XY, {0.5}}, 2, mod);
    EXPECT_EQ(h(3.0).norm(), 0.0);
}

TEST(Interaction, EnvelopeScalesBase) {
    InteractionModulation mod{ModulationKind::Envelope, gp_window(7.0, 15.0)};
    const auto h = build_interaction(CouplingSpec{CouplingKind::XY, {0.5}}, 2, mod);
    const Operator base = interaction_operator(CouplingSpec{CouplingKind::XY, {0.5}}, 2);
    EXPECT_LT((h(7.0) - base / std::sqrt(kPi)).norm(), 1e-15);
}

TEST(Interaction, RejectsWrongBondCount) {
    EXPECT_THROW(build_interaction(CouplingSpec{CouplingKind::XY, {0.5, 0.5}}, 2), DimensionError);
}

TEST(Drive, LinearZZeroAmplitudeIsZero) {
    DriveSpec d;
    d.family = DriveFamily::LinearZ;
    d.qubits = {drive_on(0, 0.0, 1.0, gp_window(2.0, 1.0))};
    const auto h = build_drive(d);
    for (double t : {0.0, 2.0, 3.5}) EXPECT_EQ(h(t).norm(), 0.0);
}

TEST(Drive, CircularDifferenceIsSigmaY) {
    const double amp = 0.8, w = 4.8;
    DriveSpec l;
    l.family = DriveFamily::LCP;
    l.qubits = {drive_on(0, amp, w, gp_window(10.0, 5.0)), drive_on(1, amp, w, gp_window(10.0, 5.0))};
    DriveSpec r = l;
    r.family = DriveFamily::RCP;
    const auto hl = build_drive(l), hr = build_drive(r);
    for (double t : {8.0, 10.0, 11.3}) {
        const double e = gp_window(10.0, 5.0).value(t);
        const Operator expect =
            2.0 * amp * e * std::sin(w * t) * (embed_qubit(pauli(PauliAxis::Y), 0, 2) + embed_qubit(pauli(PauliAxis::Y), 1, 2));
        EXPECT_LT((hl(t) - hr(t) - expect).norm(), 1e-13);
    }
}

TEST(Drive, CorrectedXYHasNoCorrectionAtCenter) {
    DriveSpec d;
    d.family = DriveFamily::CorrectedXY;
    d.qubits = {drive_on(0, 1.0, 4.8, gp_window(7.0, 15.0))};
    const Operator h = build_drive(d)(7.0);
    const Operator y0 = embed_qubit(pauli(PauliAxis::Y), 0, 2);
    EXPECT_NEAR(std::abs((h * y0).trace()), 0.0, 1e-15);
    // Away from the center the corrective sigma_y term follows the envelope derivative.
    const double t = 9.0;
    const Operator h2 = build_drive(d)(t);
    const double expect = 0.5 / 4.8 * gp_window(7.0, 15.0).derivative(t) * std::cos(4.8 * t);
    EXPECT_NEAR((h2 * y0).trace().real() / 4.0, expect, 1e-15);
}

TEST(Drive, CorrectedXYRejectsZeroFrequency) {
    DriveSpec d;
    d.family = DriveFamily::CorrectedXY;
    d.qubits = {drive_on(0, 1.0, 0.0, gp_window(7.0, 15.0))};
    EXPECT_THROW(build_drive(d), std::invalid_argument);
}

TEST(Drive, LinearFamiliesActOnTheirAxis) {
    const std::pair<DriveFamily, PauliAxis> cases[] = {
        {DriveFamily::LinearX, PauliAxis::X}, {DriveFamily::LinearY, PauliAxis::Y}, {DriveFamily::LinearZ, PauliAxis::Z}};
    for (const auto& [family, axis] : cases) {
        DriveSpec d;
        d.family = family;
        d.qubits = {drive_on(1, 0.9, 4.8, gp_window(5.0, 3.0))};
        const auto h = build_drive(d);
        const Operator p = embed_qubit(pauli(axis), 1, 2);
        for (double t : {3.1, 5.0, 6.7}) {
            const Operator m = h(t);
            EXPECT_LT((m * p - p * m).norm(), 1e-14);
            EXPECT_GT(m.norm(), 1e-6);
        }
    }
}

TEST(Drive, GlobalDDUsesTensorPowers) {
    DriveSpec d;
    d.family = DriveFamily::GlobalDD;
    d.shape = PulseShape{ShapeKind::GP};
    d.pulses = {TrainPulse{1.0, 0.15, 0.0, kPi, 1.0}};
    const Operator h = build_drive(d, ErrorSpec{0.2, 0.0, false, nullptr})(1.0);
    const Operator xx = kron(pauli(PauliAxis::X), pauli(PauliAxis::X));
    const Operator z0 = embed_qubit(pauli(PauliAxis::Z), 0, 2);
    const Operator expect = kPi / (2.0 * 0.15) / std::sqrt(kPi) * xx + 0.2 * z0;
    EXPECT_LT((h - expect).norm(), 1e-12);
}

TEST(Drive, FloquetRequiresHarmonics) {
    DriveSpec d;
    d.family = DriveFamily::FloquetMultiHarmonic;
    EXPECT_THROW(build_drive(d), std::invalid_argument);
}

TEST(Drive, FloquetPeriodicForIntegerHarmonics) {
    DriveSpec d;
    d.family = DriveFamily::FloquetMultiHarmonic;
    d.floquet_omega = 5.0;
    d.harmonics = {{1.0, 0.3, 1.0}, {0.5, -1.1, 2.0}, {0.3, 2.0, 3.0}};
    const auto h = build_drive(d, ErrorSpec{0.0, 0.01, false, nullptr});
    const double period = 2.0 * kPi / 5.0;
    for (double t : {0.1, 0.77, 3.4, 12.9}) EXPECT_LT((h(t) - h(t + period)).norm(), 1e-10);
}

TEST(Drive, FloquetAmplitudeErrorScalesHarmonics) {
    DriveSpec d;
    d.family = DriveFamily::FloquetMultiHarmonic;
    d.harmonics = {{1.0, 0.0, 1.0}};
    const auto h0 = build_drive(d);
    const auto h1 = build_drive(d, ErrorSpec{0.0, 0.01, false, nullptr});
    const double t = 0.6;
    EXPECT_LT((h1(t) - 1.01 * h0(t)).norm(), 1e-14);
}

TEST(Error, DetuningShiftsFirstDiagonalEntry) {
    const double omega = 3.5, delta = 0.01 * omega;
    const auto h = build_error(ErrorSpec{delta, 0.0, false, nullptr}, 2);
    EXPECT_NEAR(h(0.0)(0, 0).real(), delta / 2.0, 1e-16);
}

TEST(Assemble, SinglePartPassthrough) {
    const auto part = build_static(SystemSpec{2, {4.8, 4.8}, {}});
    const auto h = assemble({part});
    EXPECT_LT((h(2.0) - part(2.0)).norm(), 1e-15);
}

TEST(Assemble, ShapedPulseScenarioIsHermitian) {
    ScenarioConfig cfg;
    cfg.seed = 3;
    const auto noise = scenario_noise(cfg);
    const auto sched = deterministic_schedule(ProtocolKind::SinglePulse, cfg);
    std::vector<Hamiltonian> parts{scenario_static(cfg, noise),
                                   build_interaction(CouplingSpec{CouplingKind::XY, {cfg.g}}, 2,
                                                     InteractionModulation{ModulationKind::Envelope, sched.interaction})};
    for (const auto& d : sched.drives) parts.push_back(build_drive(d));
    const auto h = assemble(parts, 0.0, 40.0, 100);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    for (int i = 0; i < 100; ++i) EXPECT_LT(hermiticity_residual(h(u(rng))), 1e-10);
}

TEST(Assemble, RejectsDimensionMismatch) {
    EXPECT_THROW(assemble({build_static(SystemSpec{1, {1.0}, {}}), build_static(SystemSpec{2, {1.0, 1.0}, {}})}),
                 DimensionError);
    EXPECT_THROW(assemble({}), DimensionError);
}

TEST(Assemble, RejectsNonHermitianPart) {
    Hamiltonian bad(2);
    bad.add(sigma_plus());
    EXPECT_THROW(assemble({bad}), InvariantError);
}
