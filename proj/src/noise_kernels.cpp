#include "cslmeson/noise_kernels.hpp"

#include "cslmeson/error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cslmeson
{
namespace
{

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Beyond this many correlation times the kernel is below 1e-30 of its peak.
// Going further reaches subnormal values, where the quadrature error
// estimate never meets a relative tolerance.
constexpr double kExponentialSupport = 70.0;
constexpr double kGaussianSupport = 12.0;

// Upper limit on panels for oscillatory integrands.
constexpr double kMaxPanels = 4e6;

void require_tau(double tau)
{
    if (!(tau > 0.0) || !std::isfinite(tau))
    {
        throw DomainError("kernel correlation time must be positive");
    }
}

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t))
    {
        throw DomainError("negative or non-finite time");
    }
}

double tabulated_value(const NoiseKernel::Tabulated& k, double s)
{
    const auto& v = k.samples;
    s = std::abs(s);
    if (s <= v.front().s)
    {
        return v.front().f;
    }
    if (s > v.back().s)
    {
        return 0.0;
    }
    auto hi = std::lower_bound(v.begin(), v.end(), s, [](const TabulatedSample& a, double x) { return a.s < x; });
    auto lo = hi - 1;
    const double w = (s - lo->s) / (hi->s - lo->s);
    return lo->f + w * (hi->f - lo->f);
}

double support_limit(const NoiseKernel& kernel)
{
    return std::visit(overloaded{[](const NoiseKernel::White&) { return 0.0; },
                                 [](const NoiseKernel::Exponential& k) { return kExponentialSupport * k.tau; },
                                 [](const NoiseKernel::Gaussian& k) { return kGaussianSupport * k.tau; },
                                 [](const NoiseKernel::Tabulated& k) { return k.samples.back().s; }},
                      kernel.kind());
}

// Panel nodes on [0, upper] containing the kernel's natural breakpoints and
// no panel wider than max_width.
std::vector<double> panel_nodes(const NoiseKernel& kernel, double upper, double max_width)
{
    std::vector<double> nodes{0.0};
    std::visit(overloaded{[](const NoiseKernel::White&) {},
                          [&](const NoiseKernel::Exponential& k) {
                              for (double s = k.tau; s < upper && s <= 64.0 * k.tau; s *= 2.0)
                              {
                                  nodes.push_back(s);
                              }
                          },
                          [&](const NoiseKernel::Gaussian& k) {
                              for (int i = 1; i * k.tau < upper; ++i)
                              {
                                  nodes.push_back(i * k.tau);
                              }
                          },
                          [&](const NoiseKernel::Tabulated& k) {
                              for (const auto& sample : k.samples)
                              {
                                  if (sample.s > 0.0 && sample.s < upper)
                                  {
                                      nodes.push_back(sample.s);
                                  }
                              }
                          }},
               kernel.kind());
    // A sliver panel next to upper sends the adaptive rule to full depth.
    while (nodes.size() > 1 && upper - nodes.back() <= 1e-9 * upper)
    {
        nodes.pop_back();
    }
    nodes.push_back(upper);

    if (!(max_width > 0.0) || !std::isfinite(max_width))
    {
        return nodes;
    }
    if (upper / max_width > kMaxPanels)
    {
        throw NumericError("oscillatory integral needs more than 4e6 panels; reduce t or |a|");
    }
    std::vector<double> refined{0.0};
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    {
        const double lo = nodes[i];
        const double hi = nodes[i + 1];
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / max_width));
        for (std::size_t p = 1; p < n; ++p)
        {
            refined.push_back(lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(n));
        }
        refined.push_back(hi);
    }
    return refined;
}

} // namespace

NoiseKernel NoiseKernel::white() { return NoiseKernel(White{}); }

NoiseKernel NoiseKernel::exponential(double tau_s)
{
    require_tau(tau_s);
    return NoiseKernel(Exponential{tau_s});
}

NoiseKernel NoiseKernel::gaussian(double tau_s)
{
    require_tau(tau_s);
    return NoiseKernel(Gaussian{tau_s});
}

NoiseKernel NoiseKernel::tabulated(std::vector<TabulatedSample> samples)
{
    if (samples.size() < 2)
    {
        throw DomainError("tabulated kernel needs at least two samples");
    }
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        if (!std::isfinite(samples[i].s) || samples[i].s < 0.0 || !(samples[i].f >= 0.0) ||
            !std::isfinite(samples[i].f))
        {
            throw DomainError("tabulated kernel samples need s >= 0 and f >= 0");
        }
        if (i > 0 && !(samples[i].s > samples[i - 1].s))
        {
            throw DomainError("tabulated kernel samples must be strictly increasing in s");
        }
    }
    // Half-line integral: held value on [0, s_0] plus trapezoids.
    double half = samples.front().s * samples.front().f;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    {
        half += 0.5 * (samples[i].f + samples[i + 1].f) * (samples[i + 1].s - samples[i].s);
    }
    if (!(half > 0.0))
    {
        throw DomainError("tabulated kernel has zero integral");
    }
    for (auto& sample : samples)
    {
        sample.f /= 2.0 * half;
    }
    return NoiseKernel(Tabulated{std::move(samples)});
}

std::string NoiseKernel::describe() const
{
    std::ostringstream out;
    std::visit(overloaded{[&](const White&) { out << "white"; },
                          [&](const Exponential& k) { out << "exponential(tau=" << k.tau << ")"; },
                          [&](const Gaussian& k) { out << "gaussian(tau=" << k.tau << ")"; },
                          [&](const Tabulated& k) { out << "tabulated(" << k.samples.size() << " samples)"; }},
               kind_);
    return out.str();
}

double correlation(const NoiseKernel& kernel, double s)
{
    if (!std::isfinite(s))
    {
        throw DomainError("correlation: non-finite s");
    }
    return std::visit(
        overloaded{[](const NoiseKernel::White&) -> double {
                       throw DomainError("white kernel has no pointwise value");
                   },
                   [&](const NoiseKernel::Exponential& k) { return std::exp(-std::abs(s) / k.tau) / (2.0 * k.tau); },
                   [&](const NoiseKernel::Gaussian& k) {
                       return std::exp(-0.5 * (s / k.tau) * (s / k.tau)) /
                              (std::sqrt(2.0 * std::numbers::pi) * k.tau);
                   },
                   [&](const NoiseKernel::Tabulated& k) { return tabulated_value(k, s); }},
        kernel.kind());
}

double growth_integral(const NoiseKernel& kernel, double t)
{
    require_time(t);
    if (t == 0.0)
    {
        return 0.0;
    }
    if (kernel.is_white())
    {
        return 0.5 * t;
    }
    if (const auto* k = std::get_if<NoiseKernel::Exponential>(&kernel.kind()))
    {
        // (1/2)(t - tau (1 - e^{-t/tau})); expm1 keeps precision for t << tau.
        return 0.5 * (t + k->tau * std::expm1(-t / k->tau));
    }
    const double upper = std::min(t, support_limit(kernel));
    const auto nodes = panel_nodes(kernel, upper, 0.0);
    return detail::integrate_panels([&](double s) { return correlation(kernel, s) * (t - s); },
                                    std::span<const double>(nodes));
}

double cosine_weighted_integral(const NoiseKernel& kernel, double t, double a)
{
    require_time(t);
    if (!std::isfinite(a))
    {
        throw DomainError("cosine_weighted_integral: non-finite frequency");
    }
    if (kernel.is_white())
    {
        return t;
    }
    if (a == 0.0)
    {
        return 2.0 * growth_integral(kernel, t);
    }
    if (t == 0.0)
    {
        return 0.0;
    }
    const double upper = std::min(t, support_limit(kernel));
    const double width = std::numbers::pi / (4.0 * std::abs(a));
    const auto nodes = panel_nodes(kernel, upper, width);
    return 2.0 * detail::integrate_panels([&](double s) { return std::cos(a * s) * correlation(kernel, s) * (t - s); },
                                          std::span<const double>(nodes));
}

double spatial_zero(double r_c_cm)
{
    if (!(r_c_cm > 0.0) || !std::isfinite(r_c_cm))
    {
        throw DomainError("spatial_zero: non-positive r_C");
    }
    const double scale = std::sqrt(4.0 * std::numbers::pi) * r_c_cm;
    return 1.0 / (scale * scale * scale);
}

NoiseKernel load_tabulated_kernel_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line))
    {
        throw ConfigError("kernel CSV: missing header line");
    }
    std::vector<TabulatedSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
        {
            throw ConfigError("kernel CSV line " + std::to_string(line_no) + ": expected two columns");
        }
        try
        {
            std::size_t used_s = 0;
            std::size_t used_f = 0;
            const std::string s_text = line.substr(0, comma);
            const std::string f_text = line.substr(comma + 1);
            TabulatedSample sample{std::stod(s_text, &used_s), std::stod(f_text, &used_f)};
            if (used_f != f_text.size() && f_text.find_first_not_of(" \t", used_f) != std::string::npos)
            {
                throw std::invalid_argument("trailing characters");
            }
            samples.push_back(sample);
        }
        catch (const std::exception&)
        {
            throw ConfigError("kernel CSV line " + std::to_string(line_no) + ": not numeric");
        }
    }
    try
    {
        return NoiseKernel::tabulated(std::move(samples));
    }
    catch (const DomainError& e)
    {
        throw ConfigError(std::string("kernel CSV: ") + e.what());
    }
}

NoiseKernel parse_kernel_spec(std::string_view spec)
{
    if (spec == "white")
    {
        return NoiseKernel::white();
    }
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
    {
        throw ConfigError("kernel spec must be white, exp:TAU or gauss:TAU");
    }
    const auto kind = spec.substr(0, colon);
    double tau = 0.0;
    try
    {
        tau = std::stod(std::string(spec.substr(colon + 1)));
    }
    catch (const std::exception&)
    {
        throw ConfigError("kernel spec: correlation time is not a number");
    }
    try
    {
        if (kind == "exp")
        {
            return NoiseKernel::exponential(tau);
        }
        if (kind == "gauss")
        {
            return NoiseKernel::gaussian(tau);
        }
    }
    catch (const DomainError& e)
    {
        throw ConfigError(std::string("kernel spec: ") + e.what());
    }
    throw ConfigError("unknown kernel kind '" + std::string(kind) + "'");
}

} // namespace cslmeson
