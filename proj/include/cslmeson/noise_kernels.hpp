#pragma once

// Time-correlation functions f(s) of the collapse noise.
//
// Every kernel is even in s and normalized to unit integral over the whole
// real line, so the parametric kernels approach the white (delta) kernel as
// their correlation time goes to zero. The overall noise strength lives in
// the CSL gamma, never in f.

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cslmeson
{

struct TabulatedSample
{
    double s = 0.0; // s
    double f = 0.0; // 1/s
};

class NoiseKernel
{
public:
    struct White
    {
    };
    struct Exponential
    {
        double tau = 1.0;
    };
    struct Gaussian
    {
        double tau = 1.0;
    };
    struct Tabulated
    {
        std::vector<TabulatedSample> samples; // normalized, strictly increasing s >= 0
    };
    using Kind = std::variant<White, Exponential, Gaussian, Tabulated>;

    /// Delta-correlated noise; only defined through the integrals.
    static NoiseKernel white();
    /// f(s) = exp(-|s|/tau) / (2 tau).
    static NoiseKernel exponential(double tau_s);
    /// f(s) = exp(-s^2 / (2 tau^2)) / (sqrt(2 pi) tau).
    static NoiseKernel gaussian(double tau_s);
    /// Piecewise-linear kernel on s >= 0, mirrored to s < 0. Below the first
    /// sample the first value is held; beyond the last sample f = 0. The
    /// samples are rescaled to unit total integral.
    static NoiseKernel tabulated(std::vector<TabulatedSample> samples);

    const Kind& kind() const { return kind_; }
    bool is_white() const { return std::holds_alternative<White>(kind_); }

    /// Short human-readable description, e.g. "exponential(tau=1e-3)".
    std::string describe() const;

private:
    explicit NoiseKernel(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

/// f(|s|) in 1/s. Throws DomainError for the white kernel.
double correlation(const NoiseKernel& kernel, double s);

/// D(t) = int_0^t f(s) (t - s) ds, in s. The white kernel gives t/2 (the
/// one-sided delta carries half its weight). Throws DomainError for t < 0.
double growth_integral(const NoiseKernel& kernel, double t);

/// C(t, a) = 2 int_0^t cos(a s) f(s) (t - s) ds, in s. White kernel gives t.
double cosine_weighted_integral(const NoiseKernel& kernel, double t, double a);

/// F(0) = 1 / (sqrt(4 pi) r_C)^3 in 1/cm^3.
double spatial_zero(double r_c_cm);

/// Parses the two-column CSV format "s_seconds,f_per_second" (header line
/// required). Throws ConfigError.
NoiseKernel load_tabulated_kernel_csv(std::string_view text);

/// Parses "white", "exp:TAU", "gauss:TAU". Throws ConfigError.
NoiseKernel parse_kernel_spec(std::string_view spec);

} // namespace cslmeson
