#include "cslmeson/stochastic_oracle.hpp"

#include "cslmeson/error.hpp"
#include "cslmeson/random.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace cslmeson
{
namespace
{

double trajectory_white(CounterStream& rng, double sj, double sk, double f0, const SimulationPlan& plan)
{
    const double scale = std::sqrt(f0 * plan.dt);
    double theta_j = 0.0;
    double theta_k = 0.0;
    for (std::size_t n = 0; n < plan.n_steps; ++n)
    {
        const double increment = scale * rng.normal();
        theta_j += sj * increment;
        theta_k += sk * increment;
    }
    return std::cos(theta_j - theta_k);
}

double trajectory_ou(CounterStream& rng, double sj, double sk, double f0, double tau, const SimulationPlan& plan)
{
    const double sigma = std::sqrt(f0 / (2.0 * tau));
    const double rho = std::exp(-plan.dt / tau);
    const double kick = sigma * std::sqrt(-std::expm1(-2.0 * plan.dt / tau));
    double x = sigma * rng.normal();
    double theta_j = 0.0;
    double theta_k = 0.0;
    for (std::size_t n = 0; n < plan.n_steps; ++n)
    {
        const double increment = x * plan.dt;
        theta_j += sj * increment;
        theta_k += sk * increment;
        x = rho * x + kick * rng.normal();
    }
    return std::cos(theta_j - theta_k);
}

// Variance of dt * sum_{n<N} x_n for the stationary AR(1) chain.
double ou_discrete_variance(double f0, double tau, double dt, std::size_t n_steps)
{
    const double sigma2 = f0 / (2.0 * tau);
    const double h = dt / tau;
    const double rho = std::exp(-h);
    const double one_minus = -std::expm1(-h);
    const double n = static_cast<double>(n_steps);
    const double rho_n = std::exp(-h * n);
    const double sum = n * (1.0 + rho) / one_minus - 2.0 * rho * (1.0 - rho_n) / (one_minus * one_minus);
    return dt * dt * sigma2 * sum;
}

} // namespace

void SimulationPlan::validate() const
{
    if (n_trajectories < 100)
    {
        throw DomainError("simulation plan: n_trajectories must be >= 100");
    }
    if (n_steps < 10)
    {
        throw DomainError("simulation plan: n_steps must be >= 10");
    }
    if (!(dt > 0.0) || !std::isfinite(dt))
    {
        throw DomainError("simulation plan: dt must be positive");
    }
    if (threads == 0)
    {
        throw DomainError("simulation plan: threads must be >= 1");
    }
    if (const auto* k = std::get_if<NoiseKernel::Exponential>(&kernel.kind()))
    {
        if (dt > k->tau / 10.0)
        {
            throw DomainError("simulation plan: dt must resolve the correlation time (dt <= tau/10)");
        }
    }
    else if (!kernel.is_white())
    {
        throw DomainError("simulation plan: only white and exponential kernels are supported");
    }
}

OracleResult simulate_damping(double gamma_j, double gamma_k, double f0, double t, const SimulationPlan& plan)
{
    plan.validate();
    if (!(gamma_j >= 0.0) || !(gamma_k >= 0.0) || !(f0 > 0.0) || !std::isfinite(gamma_j) ||
        !std::isfinite(gamma_k) || !std::isfinite(f0))
    {
        throw DomainError("simulate_damping: couplings must be non-negative and F0 positive");
    }
    if (!(t >= 0.0))
    {
        throw DomainError("simulate_damping: negative time");
    }

    OracleResult r;
    r.n_trajectories = plan.n_trajectories;
    r.n_steps = plan.n_steps;
    r.dt = plan.dt;
    const double sj = std::sqrt(gamma_j);
    const double sk = std::sqrt(gamma_k);
    const double coupling2 = (sj - sk) * (sj - sk);
    if (t == 0.0)
    {
        r.mean_interference = r.analytic_prediction = r.discrete_prediction = 1.0;
        return r;
    }
    const double t_plan = static_cast<double>(plan.n_steps) * plan.dt;
    if (std::abs(t_plan - t) > 1e-9 * t)
    {
        throw DomainError("simulate_damping: t does not equal n_steps * dt");
    }

    r.exponent = coupling2 * f0 * growth_integral(plan.kernel, t);
    r.analytic_prediction = std::exp(-r.exponent);

    const auto* ou = std::get_if<NoiseKernel::Exponential>(&plan.kernel.kind());
    const double discrete_var = ou ? ou_discrete_variance(f0, ou->tau, plan.dt, plan.n_steps)
                                   : f0 * plan.dt * static_cast<double>(plan.n_steps);
    r.discrete_prediction = std::exp(-0.5 * coupling2 * discrete_var);

    std::vector<double> values(plan.n_trajectories);
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
        {
            CounterStream rng(plan.seed, i);
            values[i] = ou ? trajectory_ou(rng, sj, sk, f0, ou->tau, plan) : trajectory_white(rng, sj, sk, f0, plan);
        }
    };
    const std::size_t workers = std::min<std::size_t>(plan.threads, plan.n_trajectories);
    if (workers <= 1)
    {
        run_range(0, plan.n_trajectories);
    }
    else
    {
        std::vector<std::thread> pool;
        const std::size_t chunk = (plan.n_trajectories + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w)
        {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(plan.n_trajectories, begin + chunk);
            if (begin < end)
            {
                pool.emplace_back(run_range, begin, end);
            }
        }
        for (auto& th : pool)
        {
            th.join();
        }
    }

    // Fixed-order two-pass reduction.
    double sum = 0.0;
    for (double v : values)
    {
        sum += v;
    }
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values)
    {
        ss += (v - mean) * (v - mean);
    }
    r.mean_interference = mean;
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
    return r;
}

OracleCouplings couplings_for_exponent(double exponent, const NoiseKernel& kernel, double t)
{
    if (!(exponent >= 0.0) || !(t > 0.0))
    {
        throw DomainError("couplings_for_exponent: need exponent >= 0 and t > 0");
    }
    return {exponent / growth_integral(kernel, t), 0.0, 1.0};
}

std::vector<SweepRow> convergence_sweep(const SimulationPlan& base, double t, double gamma_j, double gamma_k,
                                        double f0, std::size_t levels)
{
    if (levels < 3)
    {
        throw DomainError("convergence_sweep: need at least three dt values");
    }
    std::vector<SweepRow> rows;
    SimulationPlan plan = base;
    for (std::size_t level = 0; level < levels; ++level)
    {
        SweepRow row;
        row.dt = plan.dt;
        row.n_steps = plan.n_steps;
        row.result = simulate_damping(gamma_j, gamma_k, f0, t, plan);
        row.abs_error = std::abs(row.result.mean_interference - row.result.analytic_prediction);
        row.scheme_bias = std::abs(row.result.discrete_prediction - row.result.analytic_prediction);
        rows.push_back(row);
        plan.dt *= 0.5;
        plan.n_steps *= 2;
    }
    return rows;
}

} // namespace cslmeson
