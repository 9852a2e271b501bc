#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lambdacav/model.hpp"

using namespace lambdacav;

namespace {

PhysicalParams consistent(double delta, double Omega1, double Omega2, double g12, double g22)
{
    PhysicalParams params;
    params.Omega1 = Omega1;
    params.Omega2 = Omega2;
    params.delta = delta;
    params.g12 = g12;
    params.g22 = g22;
    params.g11 = delta * g12;
    params.g21 = delta * g22;
    params.gff = consistent_gff(delta, Omega1, Omega2);
    params.p = 2.0;
    return params;
}

} // namespace

TEST(RotationAngle, ZeroCouplingIsIdentity)
{
    PhysicalParams params;
    params.Omega1 = 1.0;
    params.Omega2 = 6.0;
    params.gff = 0.0;
    EXPECT_EQ(rotation_angle(params), 0.0);
}

TEST(RotationAngle, HalfSplittingGivesPiOverEight)
{
    PhysicalParams params;
    params.Omega1 = 2.0;
    params.Omega2 = 5.0;
    params.gff = 1.5;
    EXPECT_NEAR(rotation_angle(params), std::numbers::pi / 8.0, 1e-15);
}

TEST(RotationAngle, EqualFrequenciesGivePiOverFour)
{
    PhysicalParams params;
    params.Omega1 = 3.0;
    params.Omega2 = 3.0;
    params.gff = 0.2;
    EXPECT_NEAR(rotation_angle(params), std::numbers::pi / 4.0, 1e-15);
}

TEST(ConsistentGff, Values)
{
    EXPECT_EQ(consistent_gff(0.0, 1.0, 9.0), 0.0);
    EXPECT_NEAR(consistent_gff(0.5, 1.0, 4.0), 2.0, 1e-15);
    EXPECT_THROW(consistent_gff(1.0, 1.0, 4.0), PoleError);
    EXPECT_THROW(consistent_gff(-1.0, 1.0, 4.0), PoleError);
}

TEST(Transform, DecouplesFirstModeAtHalfDelta)
{
    const PhysicalParams params = consistent(0.5, 1.0, 4.0, 1.0, 1.0);
    const TransformedParams tp = transform(params);
    EXPECT_NEAR(tp.mu11, 0.0, 1e-15);
    EXPECT_NEAR(tp.mu21, 0.0, 1e-15);
    EXPECT_NEAR(tp.mu, std::sqrt(1.25), 1e-15);
    EXPECT_NEAR(tp.gamma, 1.0, 1e-15);
    EXPECT_NEAR(std::tan(tp.theta), 0.5, 1e-15);
}

TEST(Transform, ZeroDeltaIsIdentityRotation)
{
    PhysicalParams params;
    params.Omega1 = 3.0;
    params.Omega2 = 8.0;
    params.g12 = 1.0;
    params.g22 = 1.7;
    const TransformedParams tp = transform(params);
    EXPECT_EQ(tp.theta, 0.0);
    EXPECT_EQ(tp.OmegaT1, 3.0);
    EXPECT_EQ(tp.OmegaT2, 8.0);
    EXPECT_EQ(tp.mu11, 0.0);
    EXPECT_EQ(tp.mu12, 1.0);
    EXPECT_EQ(tp.mu21, 0.0);
    EXPECT_EQ(tp.mu22, 1.7);
    EXPECT_EQ(tp.gamma, 1.7);
}

TEST(Transform, ExactResonanceByConstruction)
{
    PhysicalParams params;
    params.omega1 = 10.0;
    params.Omega1 = 4.0;
    params.Omega2 = 10.0;
    const TransformedParams tp = transform(params);
    EXPECT_EQ(tp.OmegaT2, 10.0);
    EXPECT_EQ(tp.Delta2, 0.0);
    EXPECT_EQ(tp.Delta3, 0.0);
}

TEST(Transform, RejectsInconsistentFieldCoupling)
{
    PhysicalParams params = consistent(0.5, 1.0, 4.0, 1.0, 1.0);
    params.gff += 1e-6;
    EXPECT_THROW(transform(params), DecouplingViolation);
}

TEST(Transform, RejectsBadParameterSets)
{
    PhysicalParams ratio = consistent(0.5, 1.0, 4.0, 1.0, 1.0);
    ratio.g21 = 0.7;
    EXPECT_THROW(transform(ratio), InvalidParams);

    PhysicalParams pole;
    pole.delta = 1.0;
    pole.g11 = 1.0;
    pole.g21 = 1.0;
    EXPECT_THROW(transform(pole), PoleError);

    PhysicalParams p_zero;
    p_zero.p = 0.0;
    EXPECT_THROW(transform(p_zero), InvalidParams);
}

TEST(Transform, DegenerateModesWithNonzeroDelta)
{
    // Omega1 == Omega2 forces gff = 0; the decoupling angle is still atan(delta)
    const PhysicalParams params = consistent(0.3, 5.0, 5.0, 1.0, 2.0);
    const TransformedParams tp = transform(params);
    EXPECT_NEAR(std::tan(tp.theta), 0.3, 1e-15);
    EXPECT_NEAR(tp.mu11, 0.0, 1e-15);
    EXPECT_NEAR(tp.OmegaT2, 5.0, 1e-14);
}

TEST(ModelProperties, RandomConsistentDraws)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> freq(-50.0, 50.0);
    std::uniform_real_distribution<double> ratio(-3.0, 3.0);
    std::uniform_real_distribution<double> coupling(0.2, 3.0);
    for (int trial = 0; trial < 2000; ++trial) {
        double delta = ratio(rng);
        if (std::abs(1.0 - delta * delta) < 1e-2) {
            continue;
        }
        const double Omega1 = freq(rng);
        const double Omega2 = freq(rng);
        const PhysicalParams params = consistent(delta, Omega1, Omega2, 1.0, coupling(rng));
        const TransformedParams tp = transform(params);

        EXPECT_NEAR(std::tan(tp.theta), delta, 1e-12);
        EXPECT_LT(std::abs(tp.mu11), 1e-12);
        EXPECT_LT(std::abs(tp.mu21), 1e-12);
        EXPECT_NEAR(tp.OmegaT1 + tp.OmegaT2, Omega1 + Omega2, 1e-12 * std::max(1.0, std::abs(Omega1 + Omega2)));
        EXPECT_NEAR(tp.mu, std::sqrt(1.0 + delta * delta), 1e-12);
        EXPECT_GT(tp.theta, -std::numbers::pi / 2);
        EXPECT_LE(tp.theta, std::numbers::pi / 2);

        // the raw diagonalising angle agrees on the principal branch
        if (Omega2 > Omega1 && std::abs(delta) < 1.0) {
            EXPECT_NEAR(std::tan(rotation_angle(params)), delta, 1e-12);
        }
    }
}

TEST(ModelProperties, RotationIsOrthogonal)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 2, std::numbers::pi / 2);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto r = rotation_matrix(angle(rng));
        EXPECT_NEAR(r[0][0] * r[0][0] + r[1][0] * r[1][0], 1.0, 1e-14);
        EXPECT_NEAR(r[0][1] * r[0][1] + r[1][1] * r[1][1], 1.0, 1e-14);
        EXPECT_NEAR(r[0][0] * r[0][1] + r[1][0] * r[1][1], 0.0, 1e-14);
    }
}

TEST(PhysicalFromEffective, ReproducesRequestedFrame)
{
    for (double delta : {0.0, 0.4, -0.7, 2.5}) {
        const TransformedParams tp = transform(physical_from_effective({7.0, 15.0, 2.0, 5.0, delta}));
        EXPECT_NEAR(tp.Delta2, 7.0, 1e-12);
        EXPECT_NEAR(tp.Delta3, 15.0, 1e-12);
        EXPECT_NEAR(tp.gamma, 2.0, 1e-12);
        EXPECT_NEAR(tp.mu, std::sqrt(1.0 + delta * delta), 1e-12);
    }
}
