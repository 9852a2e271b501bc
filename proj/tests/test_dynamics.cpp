#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lambdacav/dynamics.hpp"
#include "lambdacav/quadrature.hpp"

using namespace lambdacav;

namespace {

TransformedParams effective(double mu, double gamma, double Delta2, double Delta3)
{
    TransformedParams tp;
    tp.mu = mu;
    tp.gamma = gamma;
    tp.Delta2 = Delta2;
    tp.Delta3 = Delta3;
    return tp;
}

double theta_gap(const ThetaPair& x, const ThetaPair& y)
{
    return std::max(std::abs(x.theta1 - y.theta1), std::abs(x.theta2 - y.theta2));
}

} // namespace

TEST(Quadrature, PolynomialAndOscillatory)
{
    auto cubic = [](double x) { return cplx{x * x * x, -x}; };
    const auto r = quad::integrate(cubic, 0.0, 2.0);
    EXPECT_NEAR(r.value.real(), 4.0, 1e-14);
    EXPECT_NEAR(r.value.imag(), -2.0, 1e-14);

    auto wave = [](double x) { return std::polar(1.0, 30.0 * x); };
    const auto w = quad::integrate(wave, 0.0, 3.0);
    const cplx exact = (std::polar(1.0, 90.0) - 1.0) / cplx{0.0, 30.0};
    EXPECT_LT(std::abs(w.value - exact), 1e-12);
}

TEST(Quadrature, BudgetExhaustionThrows)
{
    auto wave = [](double x) { return std::polar(1.0, 400.0 * x * x); };
    quad::Options opts;
    opts.max_panels = 4;
    EXPECT_THROW(quad::integrate(wave, 0.0, 10.0, opts), ConvergenceError);
}

TEST(ThetaClosedForm, VanishesAtZeroTime)
{
    const ThetaPair t = theta_closed_form(effective(1.3, 2.0, 7.0, 15.0), 2.0, 0.0);
    EXPECT_EQ(std::abs(t.theta1), 0.0);
    EXPECT_EQ(std::abs(t.theta2), 0.0);
}

TEST(ThetaClosedForm, ResonantCollapseToSineSquared)
{
    // Delta = 0: Theta1 = 2 mu sin^2(p tau / 2) / p, zero at p tau = 2 pi
    const ThetaPair t = theta_closed_form(effective(1.0, 1.0, 0.0, 0.0), 2.0, std::numbers::pi);
    EXPECT_NEAR(std::abs(t.theta1), 0.0, 1e-15);
    const ThetaPair half = theta_closed_form(effective(1.0, 1.0, 0.0, 0.0), 2.0, 0.5);
    EXPECT_NEAR(half.theta1.real(), 2.0 * std::pow(std::sin(0.5), 2) / 2.0, 1e-15);
    EXPECT_NEAR(half.theta1.imag(), 0.0, 1e-15);
}

TEST(ThetaClosedForm, DetunedExampleMatchesIndependentQuadrature)
{
    // mpmath quadrature of mu int sin(2t) e^{-i Delta t} dt, tests/oracles/frozen_values.py
    const ThetaPair t = theta_closed_form(effective(std::sqrt(2.0), 2.0, 7.0, 15.0), 2.0, 1.3);
    EXPECT_NEAR(t.theta1.real(), 0.024376436794700626, 1e-13);
    EXPECT_NEAR(t.theta1.imag(), -0.090289644840463507, 1e-13);
    EXPECT_NEAR(t.theta2.real(), 0.016874571668108591, 1e-13);
    EXPECT_NEAR(t.theta2.imag(), 0.092037994356826885, 1e-13);

    const ThetaPair q = theta_quadrature(effective(std::sqrt(2.0), 2.0, 7.0, 15.0), ShapeFunction::sinusoidal(2.0), 1.3);
    EXPECT_LT(theta_gap(t, q), 1e-9);
}

TEST(ThetaQuadrature, TrivialCases)
{
    const TransformedParams tp = effective(1.0, 2.0, 3.0, 4.0);
    EXPECT_EQ(std::abs(theta_quadrature(tp, ShapeFunction::sinusoidal(2.0), 0.0).theta1), 0.0);
    const auto zero = ShapeFunction::custom([](double) { return 0.0; });
    for (double tau : {0.0, 1.0, 17.5}) {
        const ThetaPair t = theta_quadrature(tp, zero, tau);
        EXPECT_EQ(std::abs(t.theta1), 0.0);
        EXPECT_EQ(std::abs(t.theta2), 0.0);
    }
}

TEST(ThetaQuadrature, AntiderivativeOfSine)
{
    const ThetaPair t = theta_quadrature(effective(1.0, 1.0, 0.0, 0.0), ShapeFunction::sinusoidal(2.0), 1.0);
    EXPECT_NEAR(t.theta1.real(), 0.7080734182735712, 1e-13);
    EXPECT_NEAR(t.theta1.imag(), 0.0, 1e-13);
}

TEST(ThetaQuadrature, CustomShapeUsesCallable)
{
    // f = 1: Theta1 = mu (1 - e^{-i Delta tau}) / (i Delta)
    const auto flat = ShapeFunction::custom([](double) { return 1.0; });
    const TransformedParams tp = effective(0.8, 1.5, 3.0, 0.0);
    const double tau = 2.2;
    const ThetaPair t = theta_quadrature(tp, flat, tau);
    const cplx expected1 = 0.8 * (1.0 - std::polar(1.0, -3.0 * tau)) / cplx{0.0, 3.0};
    EXPECT_LT(std::abs(t.theta1 - expected1), 1e-12);
    EXPECT_LT(std::abs(t.theta2 - cplx{1.5 * 0.8 * tau, 0.0}), 1e-12);
}

TEST(ThetaProperties, ClosedFormMatchesQuadratureIncludingNearResonance)
{
    for (double p : {2.0, 5.0}) {
        for (double gap : {0.0, 1e-10, 1e-6, 1.0}) {
            const TransformedParams tp = effective(1.0, 2.0, p - gap, -(p - gap));
            const ShapeFunction f = ShapeFunction::sinusoidal(p);
            for (double tau = 0.0; tau <= 50.0; tau += 2.5) {
                EXPECT_LT(theta_gap(theta_closed_form(tp, p, tau), theta_quadrature(tp, f, tau)), 1e-9)
                    << "p=" << p << " gap=" << gap << " tau=" << tau;
            }
        }
    }
}

TEST(ThetaProperties, ContinuousAcrossResonanceSwitch)
{
    const double p = 2.0;
    for (double tau : {1.0, 10.0, 50.0}) {
        const ThetaPair below = theta_closed_form(effective(1.0, 1.0, p - 0.999999e-8, p), p, tau);
        const ThetaPair above = theta_closed_form(effective(1.0, 1.0, p - 1.000001e-8, p), p, tau);
        EXPECT_LT(theta_gap(below, above), 1e-9);
    }
}

TEST(ThetaProperties, EqualDetuningsMakeThetasProportional)
{
    const TransformedParams tp = effective(1.1, 2.5, 3.0, 3.0);
    for (double tau : {0.3, 4.0, 21.0}) {
        const ThetaPair t = theta_closed_form(tp, 5.0, tau);
        EXPECT_LT(std::abs(t.theta2 - 2.5 * t.theta1), 1e-14);
    }
}

TEST(Amplitudes, NoEvolution)
{
    for (std::size_t m : {0u, 3u, 40u}) {
        const Amplitudes a = amplitudes({}, m);
        EXPECT_EQ(a.A, cplx(1.0, 0.0));
        EXPECT_EQ(a.B, cplx());
        EXPECT_EQ(a.C, cplx());
    }
}

TEST(Amplitudes, HandEvaluatedExample)
{
    const Amplitudes a = amplitudes({cplx{0.0, 0.3}, cplx{0.0, 0.4}}, 0);
    EXPECT_NEAR(a.A.real(), std::cos(0.5), 1e-15);
    EXPECT_NEAR(std::abs(a.B), 0.6 * std::sin(0.5), 1e-15);
    EXPECT_NEAR(std::abs(a.C), 0.8 * std::sin(0.5), 1e-15);
    // Theta^* / i = (-0.3 i) / i = -0.3
    EXPECT_NEAR(a.B.real(), -0.6 * std::sin(0.5), 1e-15);
}

TEST(Amplitudes, EqualCouplingsGiveEqualBranches)
{
    const TransformedParams tp = effective(1.0, 1.0, 2.0, 2.0);
    for (double tau : {0.7, 3.3}) {
        const ThetaPair t = theta_closed_form(tp, 2.0, tau);
        for (std::size_t m : {0u, 5u}) {
            const Amplitudes a = amplitudes(t, m);
            EXPECT_EQ(a.B, a.C);
        }
    }
}

TEST(AmplitudeProperties, UnitNormForRandomThetas)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> comp(-20.0, 20.0);
    std::uniform_int_distribution<std::size_t> occupation(0, 200);
    for (int trial = 0; trial < 10000; ++trial) {
        const ThetaPair t{{comp(rng), comp(rng)}, {comp(rng), comp(rng)}};
        const Amplitudes a = amplitudes(t, occupation(rng));
        EXPECT_NEAR(std::norm(a.A) + std::norm(a.B) + std::norm(a.C), 1.0, 1e-12);
    }
}

TEST(CoherentWeights, Vacuum)
{
    const CoherentWeights w = coherent_weights({}, {}, 1e-12);
    EXPECT_EQ(w.nmax, 0u);
    EXPECT_EQ(w.mmax, 0u);
    EXPECT_EQ(w.qn[0], cplx(1.0, 0.0));
}

TEST(CoherentWeights, TailBoundAndPeak)
{
    const CoherentWeights w = coherent_weights({std::sqrt(10.0), 0.0}, {std::sqrt(10.0), 0.0}, 1e-12);
    double kept = 0.0;
    for (const auto& q : w.qm) {
        kept += std::norm(q);
    }
    EXPECT_GE(kept, 1.0 - 0.5e-12);
    // per-mode budget 5e-13: scipy poisson.sf(39, 10) = 7.34e-13, poisson.sf(40, 10) = 1.78e-13
    EXPECT_EQ(w.mmax, 40u);
    // Poisson pmf at mean 10, n = 10
    EXPECT_NEAR(std::norm(w.qn[10]), 0.1251100357211333, 1e-14);

    // smallest cutoff: dropping the last element breaks the bound
    EXPECT_LT(kept - std::norm(w.qm.back()), 1.0 - 0.5e-12);
}

TEST(CoherentWeights, MatchesRecurrenceAndPhase)
{
    const cplx alpha = std::polar(1.7, 0.6);
    const CoherentWeights w = coherent_weights(alpha, alpha, 1e-12);
    cplx q = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n <= w.nmax; ++n) {
        EXPECT_LT(std::abs(w.qn[n] - q), 1e-15);
        q *= alpha / std::sqrt(static_cast<double>(n) + 1.0);
    }
}

TEST(CoherentWeights, Errors)
{
    EXPECT_THROW(coherent_weights({101.0, 0.0}, {}, 1e-12), OverflowGuard);
    EXPECT_THROW(coherent_weights({}, {}, 0.0), InvalidParams);
    EXPECT_THROW(coherent_weights({}, {}, 1.0), InvalidParams);
}

TEST(Evolve, InitialStateIsProductWithUpperLevel)
{
    const CoherentWeights w = coherent_weights({1.2, 0.0}, {2.0, 0.0}, 1e-12);
    const JointState s = evolve(w, effective(1.0, 2.0, 7.0, 15.0), ShapeFunction::sinusoidal(2.0), 0.0);
    for (std::size_t n = 0; n <= s.nmax; ++n) {
        for (std::size_t m = 0; m <= s.mmax; ++m) {
            EXPECT_EQ(s.a(n, m), w.qn[n] * w.qm[m]);
            EXPECT_EQ(s.b(n, m), cplx());
            EXPECT_EQ(s.c(n, m), cplx());
        }
    }
    EXPECT_THROW(evolve(w, effective(1.0, 1.0, 0.0, 0.0), ShapeFunction::sinusoidal(2.0), -1.0), InvalidParams);
}

TEST(EvolveProperties, NormAndModeOneIndependence)
{
    const CoherentWeights w = coherent_weights({std::sqrt(3.0), 0.0}, {std::sqrt(10.0), 0.0}, 1e-12);
    const TransformedParams tp = effective(1.0, 2.0, 7.0, 15.0);
    for (double tau : {0.5, 3.0, 19.0}) {
        const JointState s = evolve(w, tp, ShapeFunction::sinusoidal(2.0), tau);
        EXPECT_NEAR(s.norm(), 1.0, 2e-12);
        for (std::size_t m = 0; m <= s.mmax; ++m) {
            const cplx ref = s.a(0, m) / w.qn[0];
            for (std::size_t n = 1; n <= s.nmax; ++n) {
                if (std::abs(w.qn[n]) > 1e-150) {
                    EXPECT_LT(std::abs(s.a(n, m) / w.qn[n] - ref), 1e-14);
                }
            }
        }
    }
}

TEST(EvolveProperties, CustomShapeRoutesThroughQuadrature)
{
    const CoherentWeights w = coherent_weights({1.0, 0.0}, {1.0, 0.0}, 1e-12);
    const TransformedParams tp = effective(1.0, 1.0, 0.5, 0.5);
    const auto custom = ShapeFunction::custom([](double t) { return std::sin(2.0 * t); });
    const JointState a = evolve(w, tp, custom, 4.0);
    const JointState b = evolve(w, tp, ShapeFunction::sinusoidal(2.0), 4.0);
    for (std::size_t i = 0; i < a.a_amp.size(); ++i) {
        EXPECT_LT(std::abs(a.b_amp[i] - b.b_amp[i]), 1e-10);
    }
}
