#pragma once

// Suppression of left-right noise cross terms for separated Gaussian wave
// packets. Packet spreading and the phase factors of the time integrals are
// ignored; only the modulus of the spatial overlap is bounded.

namespace cslmeson
{

struct GaussianPacket
{
    double center_cm = 0.0;
    double sigma_cm = 1e-4;
    double speed_cm_per_s = 0.0; // signed, along the separation axis
};

/// Per dimension: r_C / sqrt(r_C^2 + sigma^2) * exp(-d^2 / (4 (r_C^2 + sigma^2))),
/// raised to `dims` (1 or 3) with the separation along one axis.
double cross_term_kernel_overlap(double d_cm, double sigma_cm, double r_c_cm, int dims = 1);
/// Natural log of the overlap; finite where the overlap underflows.
double log_cross_term_kernel_overlap(double d_cm, double sigma_cm, double r_c_cm, int dims = 1);

/// Overlap at separation |dcenter + dspeed t| relative to zero separation,
/// with sigma_eff = sqrt((sigma_a^2 + sigma_b^2) / 2).
double suppression_ratio(double t, const GaussianPacket& a, const GaussianPacket& b, double r_c_cm);
double log_suppression_ratio(double t, const GaussianPacket& a, const GaussianPacket& b, double r_c_cm);

/// |dcenter + dspeed t| in cm.
double packet_separation(double t, const GaussianPacket& a, const GaussianPacket& b);

} // namespace cslmeson
