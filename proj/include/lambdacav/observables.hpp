#pragma once

// Reduced atomic state and the quantities plotted against scaled time:
// population inversion, von Neumann entropy and linear entropy.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>

#include <quadmath.h>

#include "dynamics.hpp"

namespace lambdacav {

/// 3x3 atomic density matrix in the basis {|1>, |2>, |3>}.
struct AtomicDensityMatrix {
    std::array<std::array<cplx, 3>, 3> rho{};

    cplx operator()(std::size_t i, std::size_t j) const { return rho[i][j]; }
    cplx& operator()(std::size_t i, std::size_t j) { return rho[i][j]; }

    double trace() const { return rho[0][0].real() + rho[1][1].real() + rho[2][2].real(); }

    static AtomicDensityMatrix diagonal(double r11, double r22, double r33)
    {
        AtomicDensityMatrix out;
        out.rho[0][0] = r11;
        out.rho[1][1] = r22;
        out.rho[2][2] = r33;
        return out;
    }
};

/// Traces the field out of the joint state.
///
/// |2> and |3> components sitting at field index m are stored at grid entry
/// m - 1, so the coherences pair a(n, m) with b(n, m - 1) and c(n, m - 1).
/// Only the upper triangle is accumulated; the lower one is its conjugate.
inline AtomicDensityMatrix reduce(const JointState& state)
{
    double r11 = 0.0;
    double r22 = 0.0;
    double r33 = 0.0;
    cplx r12;
    cplx r13;
    cplx r23;
    for (std::size_t n = 0; n <= state.nmax; ++n) {
        for (std::size_t m = 0; m <= state.mmax; ++m) {
            const cplx a = state.a(n, m);
            const cplx b = state.b(n, m);
            const cplx c = state.c(n, m);
            r11 += std::norm(a);
            r22 += std::norm(b);
            r33 += std::norm(c);
            r23 += b * std::conj(c);
            if (m >= 1) {
                r12 += a * std::conj(state.b(n, m - 1));
                r13 += a * std::conj(state.c(n, m - 1));
            }
        }
    }

    AtomicDensityMatrix out;
    out.rho[0][0] = r11;
    out.rho[1][1] = r22;
    out.rho[2][2] = r33;
    out.rho[0][1] = r12;
    out.rho[1][0] = std::conj(r12);
    out.rho[0][2] = r13;
    out.rho[2][0] = std::conj(r13);
    out.rho[1][2] = r23;
    out.rho[2][1] = std::conj(r23);
    return out;
}

/// rho11 - (rho22 + rho33).
inline double inversion(const AtomicDensityMatrix& rho)
{
    return rho(0, 0).real() - (rho(1, 1).real() + rho(2, 2).real());
}

/// Eigenvalues of a 3x3 density matrix with the coefficients they came from.
/// The characteristic polynomial is z^3 + xi1 z^2 + xi2 z + xi3.
struct EigenTriple {
    std::array<double, 3> zeta{};
    double xi1 = 0.0;
    double xi2 = 0.0;
    double xi3 = 0.0;
    double varrho = 0.0; ///< Cardano angle
};

/// Below this spread (xi1^2 - 3 xi2 = 1/2 sum_{i<j} (zeta_i - zeta_j)^2) the
/// three roots are returned equal.
inline constexpr double kDegenerateSpread = 1e-28;

/// Trigonometric (Cardano) roots of the characteristic cubic.
///
/// The reported xi coefficients are the principal-minor expansions. The
/// arccos argument 27 det(B) / (2 (xi1^2 - 3 xi2)^{3/2}) and the spread are
/// evaluated on the traceless shift B = rho - tr(rho)/3 in quad precision:
/// near a double root the root error scales like sqrt(eps) of the argument
/// error, and the direct xi-polynomial form loses digits to cancellation.
inline EigenTriple cardano_eigenvalues(const AtomicDensityMatrix& rho)
{
    using quad = __float128;

    const double r11 = rho(0, 0).real();
    const double r22 = rho(1, 1).real();
    const double r33 = rho(2, 2).real();
    const cplx r12 = rho(0, 1);
    const cplx r13 = rho(0, 2);
    const cplx r23 = rho(1, 2);

    EigenTriple out;
    out.xi1 = -r11 - r22 - r33;
    out.xi2 = r11 * r22 + r22 * r33 + r33 * r11 - std::norm(r12) - std::norm(r23) - std::norm(r13);
    // rho12 rho23 rho31 + rho13 rho32 rho21 = 2 Re(rho12 rho23 rho31)
    out.xi3 = -r11 * r22 * r33 - 2.0 * (r12 * r23 * std::conj(r13)).real() + r11 * std::norm(r23) +
              r22 * std::norm(r13) + r33 * std::norm(r12);

    const quad shift = (quad(r11) + quad(r22) + quad(r33)) / 3;
    const quad b11 = quad(r11) - shift;
    const quad b22 = quad(r22) - shift;
    const quad b33 = quad(r33) - shift;
    const quad x12 = r12.real(), y12 = r12.imag();
    const quad x13 = r13.real(), y13 = r13.imag();
    const quad x23 = r23.real(), y23 = r23.imag();
    const quad n12 = x12 * x12 + y12 * y12;
    const quad n13 = x13 * x13 + y13 * y13;
    const quad n23 = x23 * x23 + y23 * y23;

    // xi1^2 - 3 xi2 = 3/2 tr(B^2)
    const quad spread = (b11 * b11 + b22 * b22 + b33 * b33) / 2 * 3 + (n12 + n13 + n23) * 3;
    if (spread < quad(kDegenerateSpread)) {
        const double mean = static_cast<double>(shift);
        out.zeta = {mean, mean, mean};
        out.varrho = 0.0;
        return out;
    }

    // Re(b12 b23 b31) with b31 = conj(b13)
    const quad re_cycle = (x12 * x23 - y12 * y23) * x13 + (x12 * y23 + y12 * x23) * y13;
    const quad det = b11 * b22 * b33 + 2 * re_cycle - b11 * n23 - b22 * n13 - b33 * n12;

    const quad root_spread = sqrtq(spread);
    quad arg = 27 * det / (2 * spread * root_spread);
    if (arg > 1) {
        arg = 1;
    } else if (arg < -1) {
        arg = -1;
    }
    const quad varrho = acosq(arg) / 3;
    const quad two_pi_third = 2 * acosq(quad(-1)) / 3;

    out.varrho = static_cast<double>(varrho);
    for (int j = 0; j < 3; ++j) {
        const quad zeta = shift + 2 * root_spread / 3 * cosq(varrho + two_pi_third * j);
        out.zeta[static_cast<std::size_t>(j)] = static_cast<double>(zeta);
    }
    return out;
}

/// Clamp window for roundoff-negative eigenvalues.
inline constexpr double kNegativeEigenvalueWindow = 1e-10;

/// -sum zeta ln zeta in nats, with 0 ln 0 = 0. Eigenvalues inside
/// [-kNegativeEigenvalueWindow, 0] count as zero; anything below throws.
inline double von_neumann_entropy(const EigenTriple& eigs)
{
    double entropy = 0.0;
    for (double zeta : eigs.zeta) {
        if (zeta < -kNegativeEigenvalueWindow) {
            std::ostringstream msg;
            msg << "von_neumann_entropy: eigenvalue " << zeta << " is below the roundoff window";
            throw ConvergenceError(msg.str());
        }
        if (zeta <= 0.0) {
            continue;
        }
        entropy -= zeta * std::log(zeta);
    }
    return entropy;
}

/// Tr[rho (1 - rho)] = Tr rho - Tr rho^2.
inline double linear_entropy(const AtomicDensityMatrix& rho)
{
    double purity = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            purity += std::norm(rho(i, j));
        }
    }
    return rho.trace() - purity;
}

} // namespace lambdacav
