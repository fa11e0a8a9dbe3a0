#pragma once

// Adaptive Gauss-Kronrod integration over a list of panels.

#include "cslmeson/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace cslmeson::detail
{

inline constexpr double kRelTol = 1e-10;
inline constexpr double kAbsFloor = 1e-16;
inline constexpr unsigned kMaxDepth = 30;

template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = kRelTol)
{
    if (a == b)
    {
        return 0.0;
    }
    // Boost compares an unscaled error estimate against a scaled tolerance,
    // so short intervals recurse to full depth. Integrate on [0, 1] instead.
    const double width = b - a;
    auto unit = [&](double u) { return f(a + width * u); };
    double error = 0.0;
    double l1 = 0.0;
    const double value = width * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(unit, 0.0, 1.0, kMaxDepth,
                                                                                                rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > 10.0 * std::max(rel_tol * l1, kAbsFloor))
    {
        throw NumericError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "] did not reach tolerance");
    }
    return value;
}

/// Sums integrate() over consecutive panels [nodes[i], nodes[i+1]].
template <typename F>
double integrate_panels(F&& f, std::span<const double> nodes, double rel_tol = kRelTol)
{
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    {
        sum += integrate(f, nodes[i], nodes[i + 1], rel_tol);
    }
    return sum;
}

} // namespace cslmeson::detail
