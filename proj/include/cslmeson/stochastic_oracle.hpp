#pragma once

// Monte Carlo check of the damping law. Two mass-eigenstate phases are
// driven by one shared Gaussian noise path with couplings sqrt(gamma_j) and
// sqrt(gamma_k); the average of cos(theta_j - theta_k) is compared with
// exp(-(sqrt(gamma_j) - sqrt(gamma_k))^2 F0 D(t)).

#include "cslmeson/noise_kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cslmeson
{

struct SimulationPlan
{
    std::size_t n_trajectories = 100000;
    std::size_t n_steps = 100;
    double dt = 1e-2;
    std::uint64_t seed = 1;
    NoiseKernel kernel = NoiseKernel::white();
    unsigned threads = 1;

    /// Throws DomainError: n_trajectories >= 100, n_steps >= 10, dt > 0,
    /// kernel white or exponential with dt <= tau / 10.
    void validate() const;
};

struct OracleResult
{
    double mean_interference = 0.0;
    double std_error = 0.0;
    double analytic_prediction = 0.0;
    /// Exact expectation of the discretized scheme. Equals the analytic
    /// prediction for white noise; differs by the Riemann-sum bias for OU.
    double discrete_prediction = 0.0;
    double exponent = 0.0; // (sqrt gj - sqrt gk)^2 F0 D(t)
    std::size_t n_trajectories = 0;
    std::size_t n_steps = 0;
    double dt = 0.0;
};

/// Requires t == n_steps * dt to 1e-9 relative. Bitwise deterministic for a
/// fixed plan, independent of plan.threads.
OracleResult simulate_damping(double gamma_j, double gamma_k, double f0, double t, const SimulationPlan& plan);

/// Couplings with (sqrt gamma_j - sqrt gamma_k)^2 F0 D(t) = exponent, taking
/// gamma_k = 0 and F0 = 1.
struct OracleCouplings
{
    double gamma_j = 0.0;
    double gamma_k = 0.0;
    double f0 = 1.0;
};
OracleCouplings couplings_for_exponent(double exponent, const NoiseKernel& kernel, double t);

struct SweepRow
{
    double dt = 0.0;
    std::size_t n_steps = 0;
    OracleResult result;
    double abs_error = 0.0;     // |mean - analytic|
    double scheme_bias = 0.0;   // |discrete - analytic|
};

/// Runs the plan at dt, dt/2, ..., dt/2^(levels-1) with t fixed.
/// levels >= 3.
std::vector<SweepRow> convergence_sweep(const SimulationPlan& base, double t, double gamma_j, double gamma_k,
                                        double f0, std::size_t levels);

} // namespace cslmeson
