#include "cslmeson/wavepackets.hpp"

#include "cslmeson/error.hpp"

#include <cmath>

namespace cslmeson
{
namespace
{

void require_inputs(double d, double sigma, double r_c, int dims)
{
    if (!(sigma > 0.0) || !(r_c > 0.0) || !std::isfinite(sigma) || !std::isfinite(r_c))
    {
        throw DomainError("wave packet overlap: sigma and r_C must be positive");
    }
    if (!std::isfinite(d))
    {
        throw DomainError("wave packet overlap: non-finite separation");
    }
    if (dims != 1 && dims != 3)
    {
        throw DomainError("wave packet overlap: dims must be 1 or 3");
    }
}

double effective_sigma(const GaussianPacket& a, const GaussianPacket& b)
{
    return std::sqrt(0.5 * (a.sigma_cm * a.sigma_cm + b.sigma_cm * b.sigma_cm));
}

} // namespace

double log_cross_term_kernel_overlap(double d_cm, double sigma_cm, double r_c_cm, int dims)
{
    require_inputs(d_cm, sigma_cm, r_c_cm, dims);
    const double s2 = r_c_cm * r_c_cm + sigma_cm * sigma_cm;
    // Transverse axes contribute only the width factor.
    const double width = 0.5 * std::log(r_c_cm * r_c_cm / s2);
    return dims * width - d_cm * d_cm / (4.0 * s2);
}

double cross_term_kernel_overlap(double d_cm, double sigma_cm, double r_c_cm, int dims)
{
    return std::exp(log_cross_term_kernel_overlap(d_cm, sigma_cm, r_c_cm, dims));
}

double packet_separation(double t, const GaussianPacket& a, const GaussianPacket& b)
{
    if (!(t >= 0.0) || !std::isfinite(t))
    {
        throw DomainError("packet_separation: negative or non-finite time");
    }
    return std::abs((b.center_cm - a.center_cm) + (b.speed_cm_per_s - a.speed_cm_per_s) * t);
}

double log_suppression_ratio(double t, const GaussianPacket& a, const GaussianPacket& b, double r_c_cm)
{
    const double sigma = effective_sigma(a, b);
    const double d = packet_separation(t, a, b);
    return log_cross_term_kernel_overlap(d, sigma, r_c_cm) - log_cross_term_kernel_overlap(0.0, sigma, r_c_cm);
}

double suppression_ratio(double t, const GaussianPacket& a, const GaussianPacket& b, double r_c_cm)
{
    return std::exp(log_suppression_ratio(t, a, b, r_c_cm));
}

} // namespace cslmeson
