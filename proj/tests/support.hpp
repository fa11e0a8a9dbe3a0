#pragma once

#include "cslmeson/units.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

namespace testing
{

inline bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Kaon with the shipped inputs.
inline const cslmeson::MesonSpecies& kaon() { return cslmeson::default_registry().species("K0"); }

/// Kaon-like species with both widths set to zero.
inline cslmeson::MesonSpecies stable_kaon()
{
    auto s = kaon();
    s.gamma_light_mev = 0.0;
    s.gamma_heavy_mev = 0.0;
    return s;
}

/// Composite Simpson rule with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, std::size_t n)
{
    const double h = (b - a) / static_cast<double>(n);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
    {
        sum += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    }
    return sum * h / 3.0;
}

} // namespace testing
