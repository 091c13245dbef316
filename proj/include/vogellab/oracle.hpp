#pragma once

/// Brute-force numerical counterparts of the closed forms: tabulated
/// densities, trapezoidal transforms and moments, and the Wigner-to-marginal
/// projection. Deliberately plain quadrature so the checks stay auditable;
/// the Gaussian-type integrands make the trapezoid rule converge far below
/// every tolerance used in the tests.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vogellab/states.hpp"

namespace vogellab::oracle {

struct TabulatedDensity {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    std::vector<double> values;
};

/// Sample marginal_pdf on a uniform grid over [-half_width, half_width].
inline TabulatedDensity tabulate_marginal(const FockDiagonalState& s, double half_width = 8.0,
                                          std::size_t points_per_unit = 512) {
    if (!(half_width > 0.0) || points_per_unit == 0)
        throw std::invalid_argument("tabulate_marginal: bad grid");
    TabulatedDensity d;
    d.lo = -half_width;
    d.hi = half_width;
    d.step = 1.0 / static_cast<double>(points_per_unit);
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width * points_per_unit)) + 1;
    d.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.values[i] = marginal_pdf(s, d.lo + static_cast<double>(i) * d.step);
    return d;
}

inline double trapezoid(const TabulatedDensity& d, const std::vector<double>& integrand) {
    double acc = 0.5 * (integrand.front() + integrand.back());
    for (std::size_t i = 1; i + 1 < integrand.size(); ++i) acc += integrand[i];
    return acc * d.step;
}

/// Direct Fourier integral of a tabulated density (libm trig, independent
/// of the estimator path).
inline std::complex<double> numeric_char_fn(const TabulatedDensity& d, double nu) {
    if (!std::isfinite(nu)) throw std::invalid_argument("numeric_char_fn: non-finite nu");
    std::vector<double> re(d.values.size()), im(d.values.size());
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double x = d.lo + static_cast<double>(i) * d.step;
        re[i] = d.values[i] * std::cos(nu * x);
        im[i] = d.values[i] * std::sin(nu * x);
    }
    return {trapezoid(d, re), trapezoid(d, im)};
}

/// Projection integral of the Wigner function over p, at fixed x.
inline double numeric_marginal_from_wigner(const FockDiagonalState& s, double x, double step = 1.0 / 512) {
    const double half_width = 8.0;
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / step)) + 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = -half_width + static_cast<double>(i) * step;
        const double w = wigner(s, x, p);
        acc += (i == 0 || i + 1 == n) ? 0.5 * w : w;
    }
    return acc * step;
}

inline double numeric_moment(const TabulatedDensity& d, int order) {
    if (order < 0 || order > 8)
        throw std::invalid_argument("numeric_moment: order must be in [0, 8]");
    std::vector<double> f(d.values.size());
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double x = d.lo + static_cast<double>(i) * d.step;
        f[i] = d.values[i] * std::pow(x, order);
    }
    return trapezoid(d, f);
}

}  // namespace vogellab::oracle
