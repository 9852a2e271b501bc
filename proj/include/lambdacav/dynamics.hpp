#pragma once

// Accumulated-interaction integrals, atomic amplitudes and the time-evolved
// joint atom-field state on a truncated double Fock grid.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "quadrature.hpp"

namespace lambdacav {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Mode function seen by the moving atom as a function of scaled time.
class ShapeFunction {
public:
    enum class Kind { SinusoidalMode, Custom };

    /// f(tau) = sin(p tau), the TEM mode crossed at velocity v = gL/pi.
    static ShapeFunction sinusoidal(double p)
    {
        ShapeFunction f;
        f.kind_ = Kind::SinusoidalMode;
        f.p_ = p;
        return f;
    }

    static ShapeFunction custom(std::function<double(double)> fn)
    {
        ShapeFunction f;
        f.kind_ = Kind::Custom;
        f.fn_ = std::move(fn);
        return f;
    }

    double operator()(double tau) const
    {
        return kind_ == Kind::SinusoidalMode ? std::sin(p_ * tau) : fn_(tau);
    }

    Kind kind() const { return kind_; }
    double p() const { return p_; }

private:
    Kind kind_ = Kind::SinusoidalMode;
    double p_ = 1.0;
    std::function<double(double)> fn_;
};

struct ThetaPair {
    cplx theta1;
    cplx theta2;
};

/// Below this |p -+ Delta| the 0/0 term is replaced by its analytic limit.
inline constexpr double kResonanceThreshold = 1e-8;

namespace detail {

// sin(x tau/2) / (i x) * exp(sign * i x tau / 2)
inline cplx half_phase_term(double x, double tau, double sign)
{
    const double half_phase = 0.5 * x * tau;
    const cplx phase = std::polar(1.0, sign * half_phase);
    if (std::abs(x) < kResonanceThreshold) {
        return tau / (2.0 * kI) * phase;
    }
    return std::sin(half_phase) / (kI * x) * phase;
}

inline cplx sinusoidal_integral(double p, double detuning, double tau)
{
    return half_phase_term(p - detuning, tau, +1.0) - half_phase_term(p + detuning, tau, -1.0);
}

} // namespace detail

/// Closed-form accumulated interaction for f(tau) = sin(p tau):
/// Theta_1 = mu int_0^tau sin(p t) e^{-i Delta2 t} dt, Theta_2 likewise with gamma and Delta3.
inline ThetaPair theta_closed_form(const TransformedParams& tp, double p, double tau)
{
    return {
        tp.mu * detail::sinusoidal_integral(p, tp.Delta2, tau),
        tp.gamma * tp.mu * detail::sinusoidal_integral(p, tp.Delta3, tau),
    };
}

/// Same integrals by adaptive quadrature, valid for any bounded shape.
inline ThetaPair theta_quadrature(const TransformedParams& tp, const ShapeFunction& f, double tau,
                                  const quad::Options& opts = {})
{
    auto integral = [&](double detuning) {
        auto integrand = [&](double t) { return f(t) * std::polar(1.0, -detuning * t); };
        return quad::integrate(integrand, 0.0, tau, opts).value;
    };
    return {tp.mu * integral(tp.Delta2), tp.gamma * tp.mu * integral(tp.Delta3)};
}

inline ThetaPair compute_theta(const TransformedParams& tp, const ShapeFunction& f, double tau)
{
    if (f.kind() == ShapeFunction::Kind::SinusoidalMode) {
        return theta_closed_form(tp, f.p(), tau);
    }
    return theta_quadrature(tp, f, tau);
}

/// Amplitudes of |1,n,m>, |2,n,m+1>, |3,n,m+1> for an atom started in |1>.
struct Amplitudes {
    cplx A{1.0, 0.0};
    cplx B;
    cplx C;
};

/// A = cos(R sqrt(m+1)), B = Theta1^* sin(R sqrt(m+1)) / (iR),
/// C = Theta2^* sin(R sqrt(m+1)) / (iR), with R^2 = |Theta1|^2 + |Theta2|^2.
/// Independent of the mode-1 occupation n.
inline Amplitudes amplitudes(const ThetaPair& theta, std::size_t m)
{
    const double R = std::hypot(std::abs(theta.theta1), std::abs(theta.theta2));
    if (R < 1e-14) {
        return {};
    }
    const double angle = R * std::sqrt(static_cast<double>(m) + 1.0);
    const double s = std::sin(angle);
    return {
        cplx{std::cos(angle), 0.0},
        std::conj(theta.theta1) / (kI * R) * s,
        std::conj(theta.theta2) / (kI * R) * s,
    };
}

/// Truncated Fock-space amplitudes of the two-mode coherent state |alpha, beta>.
struct CoherentWeights {
    cplx alpha;
    cplx beta;
    std::size_t nmax = 0;
    std::size_t mmax = 0;
    std::vector<cplx> qn; ///< size nmax + 1
    std::vector<cplx> qm; ///< size mmax + 1
};

inline constexpr double kMaxMeanPhotons = 1e4;

namespace detail {

// e^{-|a|^2/2} a^n / sqrt(n!), evaluated in log-magnitude so that the seed
// e^{-|a|^2/2} cannot underflow at large mean photon number.
inline cplx coherent_amplitude(cplx a, std::size_t n)
{
    const double mean = std::norm(a);
    if (mean == 0.0) {
        return n == 0 ? cplx{1.0, 0.0} : cplx{};
    }
    const double nd = static_cast<double>(n);
    const double log_mag = -0.5 * mean + nd * std::log(std::abs(a)) - 0.5 * std::lgamma(nd + 1.0);
    return std::polar(std::exp(log_mag), nd * std::arg(a));
}

inline void check_mean(cplx a, const char* name)
{
    if (std::norm(a) > kMaxMeanPhotons) {
        std::ostringstream msg;
        msg << "coherent_weights: |" << name << "|^2 = " << std::norm(a) << " exceeds " << kMaxMeanPhotons;
        throw OverflowGuard(msg.str());
    }
}

inline std::vector<cplx> coherent_column(cplx a, std::size_t cutoff)
{
    std::vector<cplx> q(cutoff + 1);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        q[n] = coherent_amplitude(a, n);
    }
    return q;
}

// Smallest cutoff whose discarded Poisson mass is below tail_tol.
inline std::size_t tail_cutoff(cplx a, double tail_tol)
{
    double kept = 0.0;
    for (std::size_t n = 0;; ++n) {
        kept += std::norm(coherent_amplitude(a, n));
        if (1.0 - kept < tail_tol) {
            return n;
        }
    }
}

} // namespace detail

/// Coherent weights with truncation chosen from the Poisson tail mass.
/// Each mode discards less than tail_tol / 2, so the joint grid keeps at
/// least 1 - tail_tol of the norm.
inline CoherentWeights coherent_weights(cplx alpha, cplx beta, double tail_tol = 1e-12)
{
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw InvalidParams("coherent_weights: tail_tol must lie in (0, 1)");
    }
    detail::check_mean(alpha, "alpha");
    detail::check_mean(beta, "beta");

    CoherentWeights w;
    w.alpha = alpha;
    w.beta = beta;
    w.nmax = detail::tail_cutoff(alpha, 0.5 * tail_tol);
    w.mmax = detail::tail_cutoff(beta, 0.5 * tail_tol);
    w.qn = detail::coherent_column(alpha, w.nmax);
    w.qm = detail::coherent_column(beta, w.mmax);
    return w;
}

/// Coherent weights with caller-fixed truncation bounds.
inline CoherentWeights coherent_weights_truncated(cplx alpha, cplx beta, std::size_t nmax, std::size_t mmax)
{
    detail::check_mean(alpha, "alpha");
    detail::check_mean(beta, "beta");
    CoherentWeights w;
    w.alpha = alpha;
    w.beta = beta;
    w.nmax = nmax;
    w.mmax = mmax;
    w.qn = detail::coherent_column(alpha, nmax);
    w.qm = detail::coherent_column(beta, mmax);
    return w;
}

/// Coefficients of the evolved state on the (n, m) grid:
/// a(n,m) on |1,n,m>, b(n,m) on |2,n,m+1>, c(n,m) on |3,n,m+1>.
struct JointState {
    double time = 0.0;
    std::size_t nmax = 0;
    std::size_t mmax = 0;
    std::vector<cplx> a_amp;
    std::vector<cplx> b_amp;
    std::vector<cplx> c_amp;

    std::size_t index(std::size_t n, std::size_t m) const { return n * (mmax + 1) + m; }
    cplx a(std::size_t n, std::size_t m) const { return a_amp[index(n, m)]; }
    cplx b(std::size_t n, std::size_t m) const { return b_amp[index(n, m)]; }
    cplx c(std::size_t n, std::size_t m) const { return c_amp[index(n, m)]; }

    double norm() const
    {
        double total = 0.0;
        for (std::size_t i = 0; i < a_amp.size(); ++i) {
            total += std::norm(a_amp[i]) + std::norm(b_amp[i]) + std::norm(c_amp[i]);
        }
        return total;
    }
};

/// Fills the grid from per-m amplitudes; `block(m)` must return Amplitudes.
template <class BlockAmplitudes>
JointState assemble(const CoherentWeights& weights, double tau, BlockAmplitudes&& block)
{
    JointState state;
    state.time = tau;
    state.nmax = weights.nmax;
    state.mmax = weights.mmax;
    const std::size_t cells = (weights.nmax + 1) * (weights.mmax + 1);
    state.a_amp.resize(cells);
    state.b_amp.resize(cells);
    state.c_amp.resize(cells);

    for (std::size_t m = 0; m <= weights.mmax; ++m) {
        const Amplitudes amp = block(m);
        for (std::size_t n = 0; n <= weights.nmax; ++n) {
            const cplx q = weights.qn[n] * weights.qm[m];
            const std::size_t i = state.index(n, m);
            state.a_amp[i] = q * amp.A;
            state.b_amp[i] = q * amp.B;
            state.c_amp[i] = q * amp.C;
        }
    }
    return state;
}

inline JointState evolve(const CoherentWeights& weights, const TransformedParams& tp, const ShapeFunction& f,
                         double tau)
{
    if (!(tau >= 0.0)) {
        throw InvalidParams("evolve: tau must be non-negative");
    }
    const ThetaPair theta = compute_theta(tp, f, tau);
    return assemble(weights, tau, [&](std::size_t m) { return amplitudes(theta, m); });
}

} // namespace lambdacav
