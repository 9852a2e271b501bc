#pragma once

// Brute-force checks for the analytic solution: fixed-step RK4 integration of
// the interaction-picture equations per photon block, and a library
// eigensolver for the reduced density matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "dynamics.hpp"
#include "observables.hpp"

namespace lambdacav::oracle {

/// One (n, m) manifold {|1,n,m>, |2,n,m+1>, |3,n,m+1>}. The interaction never
/// couples different manifolds, so each is integrated on its own.
struct BlockODE {
    std::size_t m = 0;
    double mu = 1.0;
    double gamma = 1.0;
    double Delta2 = 0.0;
    double Delta3 = 0.0;
    ShapeFunction f = ShapeFunction::sinusoidal(1.0);

    static BlockODE from(const TransformedParams& tp, const ShapeFunction& f, std::size_t m)
    {
        return {m, tp.mu, tp.gamma, tp.Delta2, tp.Delta3, f};
    }

    double coupling() const { return mu * std::sqrt(static_cast<double>(m) + 1.0); }
};

inline constexpr double kNormDriftBound = 1e-8;

namespace detail {

using Vec3 = std::array<cplx, 3>;

// dc/dtau = -i V(tau) c
inline Vec3 rhs(const BlockODE& block, double tau, const Vec3& c)
{
    const double amp = block.coupling() * block.f(tau);
    const cplx v12 = amp * std::polar(1.0, -block.Delta2 * tau);
    const cplx v13 = block.gamma * amp * std::polar(1.0, -block.Delta3 * tau);
    return {
        -kI * (v12 * c[1] + v13 * c[2]),
        -kI * (std::conj(v12) * c[0]),
        -kI * (std::conj(v13) * c[0]),
    };
}

inline Vec3 axpy(const Vec3& c, double h, const Vec3& k)
{
    return {c[0] + h * k[0], c[1] + h * k[1], c[2] + h * k[2]};
}

inline void rk4_step(const BlockODE& block, double tau, double h, Vec3& c)
{
    const Vec3 k1 = rhs(block, tau, c);
    const Vec3 k2 = rhs(block, tau + 0.5 * h, axpy(c, 0.5 * h, k1));
    const Vec3 k3 = rhs(block, tau + 0.5 * h, axpy(c, 0.5 * h, k2));
    const Vec3 k4 = rhs(block, tau + h, axpy(c, h, k3));
    for (std::size_t i = 0; i < 3; ++i) {
        c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

inline void check_norm(const Vec3& c, double tau)
{
    const double drift = std::abs(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]) - 1.0);
    if (drift > kNormDriftBound) {
        std::ostringstream msg;
        msg << "propagate_block: norm drift " << drift << " at tau=" << tau << " exceeds " << kNormDriftBound;
        throw StepTooLarge(msg.str());
    }
}

} // namespace detail

/// Integrates the block from (1, 0, 0) and records the amplitudes at each of
/// `sample_times` (non-decreasing, >= 0). Steps never exceed `step` and land
/// exactly on every sample time.
inline std::vector<Amplitudes> propagate_block_samples(const BlockODE& block, std::span<const double> sample_times,
                                                       double step)
{
    if (!(step > 0.0)) {
        throw InvalidParams("propagate_block: step must be positive");
    }
    std::vector<Amplitudes> out;
    out.reserve(sample_times.size());

    detail::Vec3 c{cplx{1.0, 0.0}, cplx{}, cplx{}};
    double tau = 0.0;
    for (double target : sample_times) {
        if (target < tau) {
            throw InvalidParams("propagate_block: sample times must be non-decreasing and non-negative");
        }
        const double span = target - tau;
        const auto steps = static_cast<std::size_t>(std::ceil(span / step));
        const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
        for (std::size_t i = 0; i < steps; ++i) {
            detail::rk4_step(block, tau + static_cast<double>(i) * h, h, c);
        }
        tau = target;
        detail::check_norm(c, tau);
        out.push_back({c[0], c[1], c[2]});
    }
    return out;
}

inline Amplitudes propagate_block(const BlockODE& block, double tau_end, double step)
{
    if (!(tau_end >= 0.0)) {
        throw InvalidParams("propagate_block: tau_end must be non-negative");
    }
    const double times[] = {tau_end};
    return propagate_block_samples(block, times, step).front();
}

/// min(1e-3, 0.05 / (mu sqrt(mmax+1) max(1, p, |Delta2|, |Delta3|))).
inline double default_step(const TransformedParams& tp, double p, std::size_t mmax)
{
    const double fastest = std::max({1.0, p, std::abs(tp.Delta2), std::abs(tp.Delta3)});
    const double coupling = std::abs(tp.mu) * std::sqrt(static_cast<double>(mmax) + 1.0);
    return std::min(1e-3, 0.05 / (coupling * fastest));
}

/// Joint state built from independently integrated blocks.
inline JointState numeric_state(const CoherentWeights& weights, const TransformedParams& tp, const ShapeFunction& f,
                                double tau, double step)
{
    return assemble(weights, tau,
                    [&](std::size_t m) { return propagate_block(BlockODE::from(tp, f, m), tau, step); });
}

struct StateComparison {
    double max_amplitude_error = 0.0;
    double analytic_norm = 0.0;
    double numeric_norm = 0.0;
};

inline StateComparison compare_states(const JointState& analytic, const JointState& numeric)
{
    if (analytic.nmax != numeric.nmax || analytic.mmax != numeric.mmax ||
        analytic.a_amp.size() != numeric.a_amp.size()) {
        throw ShapeMismatch("compare_states: grids differ in shape");
    }
    if (analytic.time != numeric.time) {
        throw ShapeMismatch("compare_states: states are at different times");
    }
    StateComparison report;
    for (std::size_t i = 0; i < analytic.a_amp.size(); ++i) {
        report.max_amplitude_error = std::max({report.max_amplitude_error,
                                               std::abs(analytic.a_amp[i] - numeric.a_amp[i]),
                                               std::abs(analytic.b_amp[i] - numeric.b_amp[i]),
                                               std::abs(analytic.c_amp[i] - numeric.c_amp[i])});
    }
    report.analytic_norm = analytic.norm();
    report.numeric_norm = numeric.norm();
    return report;
}

/// Largest componentwise difference between two amplitude triples.
inline double amplitude_distance(const Amplitudes& x, const Amplitudes& y)
{
    return std::max({std::abs(x.A - y.A), std::abs(x.B - y.B), std::abs(x.C - y.C)});
}

/// Ascending eigenvalues from Eigen's iterative self-adjoint solver
/// (tridiagonalisation + implicit QR), independent of the cubic formula.
inline std::array<double, 3> reference_eigenvalues(const AtomicDensityMatrix& rho)
{
    Eigen::Matrix3cd mat;
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            mat(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(mat, Eigen::EigenvaluesOnly);
    const auto& values = solver.eigenvalues();
    return {values(0), values(1), values(2)};
}

/// Max |difference| between the sorted Cardano roots and the reference solver.
inline double eigenvalue_discrepancy(const AtomicDensityMatrix& rho)
{
    std::array<double, 3> cardano = cardano_eigenvalues(rho).zeta;
    std::sort(cardano.begin(), cardano.end());
    const std::array<double, 3> reference = reference_eigenvalues(rho);
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(cardano[i] - reference[i]));
    }
    return worst;
}

} // namespace lambdacav::oracle
