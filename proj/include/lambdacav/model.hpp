#pragma once

// Laboratory-frame parameters of the Lambda atom + two-mode cavity and the
// mode rotation that removes the field-field coupling.
//
// All frequencies are in units of the reference coupling g = g_1^{(2)};
// time is the scaled time tau = g t.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace lambdacav {

struct PhysicalParams {
    // atomic level energies; |1> is the upper level
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega3 = 0.0;
    // bare cavity mode frequencies
    double Omega1 = 0.0;
    double Omega2 = 0.0;
    // g_k^{(j)} stored as g<k><j>: k = transition (1: |1>-|2>, 2: |1>-|3>), j = mode
    double g11 = 0.0;
    double g12 = 1.0;
    double g21 = 0.0;
    double g22 = 1.0;
    double gff = 0.0; ///< field-field (parametric conversion) coupling
    double p = 1.0;   ///< half-wavelengths of the mode traversed by the atom
    double delta = 0.0; ///< g11/g12 = g21/g22
};

struct TransformedParams {
    double theta = 0.0;
    double OmegaT1 = 0.0;
    double OmegaT2 = 0.0;
    double mu11 = 0.0;
    double mu12 = 0.0;
    double mu21 = 0.0;
    double mu22 = 0.0;
    double mu = 0.0;    ///< effective coupling of the surviving mode
    double gamma = 0.0; ///< mu22 / mu12
    double Delta2 = 0.0;
    double Delta3 = 0.0;
};

inline constexpr double kRatioTolerance = 1e-12;
inline constexpr double kPoleTolerance = 1e-14;
inline constexpr double kDecouplingTolerance = 1e-10;

/// Throws InvalidParams unless the coupling ratios share a single delta,
/// |delta| != 1 and p > 0.
inline void validate(const PhysicalParams& params)
{
    auto fail = [](const std::string& what) { throw InvalidParams("invalid physical parameters: " + what); };
    if (!(params.p > 0.0)) {
        fail("p must be positive");
    }
    if (std::abs(1.0 - params.delta * params.delta) < kPoleTolerance) {
        throw PoleError("|delta| = 1 is a pole of the consistent field-field coupling");
    }
    const double scale1 = std::max(1.0, std::abs(params.g12));
    const double scale2 = std::max(1.0, std::abs(params.g22));
    if (std::abs(params.g11 - params.delta * params.g12) > kRatioTolerance * scale1 ||
        std::abs(params.g21 - params.delta * params.g22) > kRatioTolerance * scale2) {
        std::ostringstream msg;
        msg << "g11/g12 and g21/g22 must both equal delta=" << params.delta;
        fail(msg.str());
    }
    if (params.g12 == 0.0) {
        fail("g12 must be nonzero (it sets the unit of frequency)");
    }
}

/// Angle diagonalising the bare field Hamiltonian, 1/2 atan2(2 gff, Omega2 - Omega1).
/// The two-argument form stays continuous through Omega1 == Omega2; the result
/// lies in (-pi/2, pi/2].
inline double rotation_angle(const PhysicalParams& params)
{
    return 0.5 * std::atan2(2.0 * params.gff, params.Omega2 - params.Omega1);
}

/// Field-field coupling for which the first rotated mode decouples from the atom.
inline double consistent_gff(double delta, double Omega1, double Omega2)
{
    const double denom = 1.0 - delta * delta;
    if (std::abs(denom) < kPoleTolerance) {
        throw PoleError("consistent_gff: |delta| = 1");
    }
    return delta * (Omega2 - Omega1) / denom;
}

/// 2x2 rotation taking (b1, b2) to (a1, a2): a1 = c b1 + s b2, a2 = -s b1 + c b2.
inline std::array<std::array<double, 2>, 2> rotation_matrix(double theta)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {{{c, s}, {-s, c}}};
}

/// Rotated-frame parameters.
///
/// Every angle theta0 + k pi/2 diagonalises the field part; the branch kept is
/// the one on which the first rotated mode decouples (tan theta = delta), so
/// that the single-mode interaction picture applies. When Omega1 == Omega2 and
/// gff == 0 any angle diagonalises and theta = atan(delta) is taken directly.
inline TransformedParams transform(const PhysicalParams& params)
{
    validate(params);

    const double expected = consistent_gff(params.delta, params.Omega1, params.Omega2);
    const double scale = std::max({1.0, std::abs(expected), std::abs(params.gff)});
    if (std::abs(params.gff - expected) > kDecouplingTolerance * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "field-field coupling gff=" << params.gff << " does not match the decoupling value "
            << expected << " for delta=" << params.delta;
        throw DecouplingViolation(msg.str());
    }

    double theta = rotation_angle(params);
    if (params.gff == 0.0 && params.Omega1 == params.Omega2) {
        theta = std::atan(params.delta);
    } else {
        // pick the quarter-turn branch with tan(theta) = delta
        const double target = std::atan(params.delta);
        const double half_pi = 0.5 * std::numbers::pi;
        const double k = std::round((target - theta) / half_pi);
        theta += k * half_pi;
    }

    const double c = std::cos(theta);
    const double s = std::sin(theta);

    TransformedParams out;
    out.theta = theta;
    out.OmegaT1 = params.Omega1 * c * c + params.Omega2 * s * s - params.gff * std::sin(2.0 * theta);
    out.OmegaT2 = params.Omega1 * s * s + params.Omega2 * c * c + params.gff * std::sin(2.0 * theta);
    out.mu11 = params.g11 * c - params.g12 * s;
    out.mu12 = params.g11 * s + params.g12 * c;
    out.mu21 = params.g21 * c - params.g22 * s;
    out.mu22 = params.g21 * s + params.g22 * c;
    out.mu = out.mu12;
    out.gamma = out.mu22 / out.mu12;
    out.Delta2 = out.OmegaT2 - (params.omega1 - params.omega2);
    out.Delta3 = out.OmegaT2 - (params.omega1 - params.omega3);
    return out;
}

/// Effective-frame knobs used by presets and configs.
struct EffectiveParams {
    double Delta2 = 0.0;
    double Delta3 = 0.0;
    double gamma = 1.0;
    double p = 2.0;
    double delta = 0.0;
};

/// Builds a laboratory parameter set whose rotated frame reproduces `eff`.
///
/// Bare modes sit at Omega1 = 100, Omega2 = 101 (units of g), g12 = 1,
/// the lower level |2> is the energy zero and gff follows from delta.
inline PhysicalParams physical_from_effective(const EffectiveParams& eff)
{
    PhysicalParams params;
    params.Omega1 = 100.0;
    params.Omega2 = 101.0;
    params.delta = eff.delta;
    params.gff = consistent_gff(eff.delta, params.Omega1, params.Omega2);
    params.g12 = 1.0;
    params.g11 = eff.delta;
    params.g22 = eff.gamma;
    params.g21 = eff.gamma * eff.delta;
    params.p = eff.p;

    const double theta = std::atan(eff.delta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double OmegaT2 = params.Omega1 * s * s + params.Omega2 * c * c + params.gff * std::sin(2.0 * theta);
    params.omega2 = 0.0;
    params.omega1 = OmegaT2 - eff.Delta2;
    params.omega3 = params.omega1 - OmegaT2 + eff.Delta3;
    return params;
}

} // namespace lambdacav
