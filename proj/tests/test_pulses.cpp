#include <gtest/gtest.h>

#include <cmath>

#include "pulsebench/pulses.hpp"
#include "support.hpp"

using namespace pulsebench;
using namespace pulsebench::testing;

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

double central_difference(const PulseShape& s, double c, double duration) {
    const double h = 1e-6 * duration;
    const double t = c * duration;
    return (eval_envelope(s, (t + h) / duration, duration) - eval_envelope(s, (t - h) / duration, duration)) / (2.0 * h);
}

class EveryShape : public ::testing::TestWithParam<ShapeKind> {};

}  // namespace

TEST(Envelope, CenterValues) {
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::GP}, 0.0), kInvSqrtPi, 1e-15);
    EXPECT_EQ(eval_envelope(PulseShape{ShapeKind::LGP}, 0.0), 0.0);
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::OGP}, 0.0), kInvSqrtPi, 1e-15);
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::SGP}, 0.0), 1.0, 1e-15);
    EXPECT_EQ(eval_envelope(PulseShape{ShapeKind::HGP}, 0.0), 0.0);
}

TEST(Envelope, ClosedFormsAwayFromCenter) {
    const double c = 0.37;
    const double g = std::exp(-c * c);
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::GP}, c), g / std::sqrt(kPi), 1e-15);
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::SGP}, c), std::exp(-std::pow(c, 4)), 1e-15);
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::OGP}, c), g * std::cos(5.0 * kPi * c) / std::sqrt(kPi), 1e-15);
    EXPECT_NEAR(eval_envelope(PulseShape{ShapeKind::LGP}, -c), c * g, 1e-15);
    PulseShape agp{ShapeKind::AGP};
    agp.agp_asymmetry = 2.0;
    EXPECT_NEAR(eval_envelope(agp, c, 10.0), 0.5 * g * (1.0 + std::erf(c * 10.0 / 2.0)), 1e-15);
}

TEST(EnvelopeDerivative, CenterValues) {
    EXPECT_EQ(eval_envelope_derivative(PulseShape{ShapeKind::GP}, 0.0, 15.0), -0.0);
    const double t = 4.0;
    EXPECT_NEAR(eval_envelope_derivative(PulseShape{ShapeKind::HGP}, 0.0, t), 2.0 * std::sqrt(2.0) / t, 1e-15);
}

TEST_P(EveryShape, DerivativeMatchesFiniteDifference) {
    const PulseShape s{GetParam()};
    for (double duration : {0.15, 1.0, 15.0}) {
        for (int i = 0; i < 1000; ++i) {
            const double c = -3.0 + 6.0 * i / 999.0;
            const double analytic = eval_envelope_derivative(s, c, duration);
            const double fd = central_difference(s, c, duration);
            EXPECT_LT(std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)), 1e-6)
                << shape_tag(s.kind) << " C=" << c << " T=" << duration;
        }
    }
}

TEST_P(EveryShape, DecaysOutsideSixWidths) {
    const PulseShape s{GetParam()};
    for (double c : {6.0, 7.5, 10.0, -6.0, -8.0}) EXPECT_LT(std::abs(eval_envelope(s, c, 1.0)), 1e-10) << c;
}

TEST_P(EveryShape, ScheduleIsLinearInScale) {
    const PulseShape s{GetParam()};
    const EnvelopeSchedule one(s, {PulseWindow{3.0, 2.0, 1.0}});
    const EnvelopeSchedule three(s, {PulseWindow{3.0, 2.0, 3.0}});
    for (double t = -2.0; t < 8.0; t += 0.37) EXPECT_NEAR(three.value(t), 3.0 * one.value(t), 1e-14);
}

INSTANTIATE_TEST_SUITE_P(Shapes, EveryShape, ::testing::ValuesIn(kAllShapes),
                         [](const auto& info) { return shape_tag(info.param); });

TEST(Envelope, Parity) {
    for (double c = 0.05; c < 4.0; c += 0.13) {
        for (auto k : {ShapeKind::GP, ShapeKind::SGP, ShapeKind::OGP, ShapeKind::LGP}) {
            EXPECT_EQ(eval_envelope(PulseShape{k}, c), eval_envelope(PulseShape{k}, -c)) << shape_tag(k);
        }
        EXPECT_EQ(eval_envelope(PulseShape{ShapeKind::HGP}, -c), -eval_envelope(PulseShape{ShapeKind::HGP}, c));
    }
}

TEST(Envelope, SgpExponentMustBeEvenAboveTwo) {
    PulseShape s{ShapeKind::SGP};
    s.sgp_exponent = 3;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.sgp_exponent = 2;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.sgp_exponent = 6;
    EXPECT_NO_THROW(s.validate());
}

TEST(Envelope, TagsRoundTrip) {
    for (auto k : kAllShapes) EXPECT_EQ(PulseShape::from_tag(shape_tag(k)).kind, k);
    EXPECT_THROW(PulseShape::from_tag("square"), std::invalid_argument);
}

TEST(Schedule, SingleWindowAtCenter) {
    const EnvelopeSchedule s(PulseShape{ShapeKind::GP}, {PulseWindow{7.0, 15.0, 1.0}});
    EXPECT_NEAR(s.value(7.0), kInvSqrtPi, 1e-15);
}

TEST(Schedule, EmptyIsZero) {
    const EnvelopeSchedule s(PulseShape{ShapeKind::GP}, {});
    for (double t : {-5.0, 0.0, 3.0, 100.0}) {
        EXPECT_EQ(s.value(t), 0.0);
        EXPECT_EQ(s.derivative(t), 0.0);
    }
}

TEST(Schedule, SuperposedCopiesDouble) {
    const EnvelopeSchedule one(PulseShape{ShapeKind::GP}, {PulseWindow{7.0, 15.0, 1.0}});
    const EnvelopeSchedule two(PulseShape{ShapeKind::GP}, {PulseWindow{7.0, 15.0, 1.0}, PulseWindow{7.0, 15.0, 1.0}});
    for (double t = 0.0; t < 20.0; t += 0.7) EXPECT_NEAR(two.value(t), 2.0 * one.value(t), 1e-15);
}

TEST(Schedule, SequentialPicksActiveWindow) {
    const EnvelopeSchedule s(PulseShape{ShapeKind::GP}, {PulseWindow{5.0, 2.0, 1.0}, PulseWindow{10.0, 2.0, 2.0}},
                             CombineMode::Sequential);
    EXPECT_NEAR(s.value(5.0), kInvSqrtPi, 1e-15);
    EXPECT_NEAR(s.value(10.0), 2.0 * kInvSqrtPi, 1e-15);
    EXPECT_EQ(s.value(7.5), 0.0);
}

TEST(Schedule, SequentialOverlapRejectedAtConstruction) {
    EXPECT_THROW(EnvelopeSchedule(PulseShape{ShapeKind::GP}, {PulseWindow{5.0, 5.0, 1.0}, PulseWindow{7.0, 5.0, 1.0}},
                                  CombineMode::Sequential),
                 std::invalid_argument);
    EXPECT_NO_THROW(EnvelopeSchedule(PulseShape{ShapeKind::GP}, {PulseWindow{5.0, 5.0, 1.0}, PulseWindow{7.0, 5.0, 1.0}},
                                     CombineMode::Superpose));
}

TEST(Schedule, RejectsNonPositiveDuration) {
    EXPECT_THROW(EnvelopeSchedule(PulseShape{ShapeKind::GP}, {PulseWindow{5.0, 0.0, 1.0}}), std::invalid_argument);
}

TEST(Envelope, AreaOfGaussianIsOne) {
    EXPECT_NEAR(envelope_area(PulseShape{ShapeKind::GP}, 1.0, false), std::erf(3.0), 1e-12);
}
