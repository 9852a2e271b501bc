#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration of complex-valued
// functions of one real variable.

#include <array>
#include <complex>
#include <cstddef>
#include <queue>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace lambdacav::quad {

namespace detail {

// Kronrod abscissae on [0, 1); odd indices are the Gauss-7 nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};

// Gauss-7 weights at kKronrodNodes[1], [3], [5] and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double lo;
    double hi;
    std::complex<double> value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double lo, double hi)
{
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const std::complex<double> fc = f(centre);
    std::complex<double> kronrod = fc * kKronrodWeights[7];
    std::complex<double> gauss = fc * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const std::complex<double> pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) {
            gauss += kGaussWeights[i / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    return Panel{lo, hi, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

struct Result {
    std::complex<double> value;
    double error = 0.0;      ///< summed |K15 - G7| over the final panels
    std::size_t panels = 0;
};

struct Options {
    double abs_tol = 1e-12;
    std::size_t max_panels = 1'000'000;
};

/// Integrates f over [lo, hi], bisecting the worst panel until the summed
/// error estimate drops below opts.abs_tol. Throws ConvergenceError when the
/// panel budget is exhausted or a panel can no longer be split.
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opts = {})
{
    if (lo == hi) {
        return {};
    }

    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod_15(f, lo, hi));
    double total_error = panels.top().error;

    while (total_error > opts.abs_tol) {
        if (panels.size() >= opts.max_panels) {
            std::ostringstream msg;
            msg << "quadrature: panel budget " << opts.max_panels << " exhausted with error estimate " << total_error;
            throw ConvergenceError(msg.str());
        }
        const detail::Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            throw ConvergenceError("quadrature: panel width reached machine resolution");
        }
        panels.pop();
        const detail::Panel left = detail::gauss_kronrod_15(f, worst.lo, mid);
        const detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.hi);
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from scratch so the running error bookkeeping cannot drift.
    Result result;
    result.panels = panels.size();
    std::vector<detail::Panel> all;
    all.reserve(panels.size());
    while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
    }
    for (const auto& panel : all) {
        result.value += panel.value;
        result.error += panel.error;
    }
    return result;
}

} // namespace lambdacav::quad
