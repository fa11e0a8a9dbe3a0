#include "support.hpp"

#include "cslmeson/error.hpp"
#include "cslmeson/stochastic_oracle.hpp"

#include <cstring>

using namespace cslmeson;

namespace
{

SimulationPlan white_plan(std::size_t n, std::uint64_t seed)
{
    SimulationPlan p;
    p.n_trajectories = n;
    p.n_steps = 10;
    p.dt = 0.1;
    p.seed = seed;
    return p;
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_SUITE("stochastic_oracle")
{
    TEST_CASE("plan validation")
    {
        auto p = white_plan(1000, 1);
        CHECK_NOTHROW(p.validate());
        p.n_trajectories = 99;
        CHECK_THROWS_AS(p.validate(), DomainError);
        p = white_plan(1000, 1);
        p.n_steps = 9;
        CHECK_THROWS_AS(p.validate(), DomainError);
        p = white_plan(1000, 1);
        p.kernel = NoiseKernel::exponential(0.5);
        CHECK_THROWS_AS(p.validate(), DomainError); // dt = 0.1 > tau / 10
        p.kernel = NoiseKernel::exponential(1.0);
        CHECK_NOTHROW(p.validate());
        p.kernel = NoiseKernel::gaussian(1.0);
        CHECK_THROWS_AS(p.validate(), DomainError);

        CHECK_THROWS_AS(simulate_damping(1.0, 0.0, 1.0, 2.0, white_plan(1000, 1)), DomainError); // t != n dt
        CHECK_THROWS_AS(simulate_damping(-1.0, 0.0, 1.0, 1.0, white_plan(1000, 1)), DomainError);
    }

    TEST_CASE("equal couplings give exactly 1")
    {
        const auto r = simulate_damping(2.5, 2.5, 1.0, 1.0, white_plan(1000, 3));
        CHECK(r.mean_interference == 1.0);
        CHECK(r.std_error == 0.0);
        CHECK(r.analytic_prediction == 1.0);
    }

    TEST_CASE("t = 0 gives exactly 1")
    {
        const auto r = simulate_damping(2.0, 0.0, 1.0, 0.0, white_plan(1000, 3));
        CHECK(r.mean_interference == 1.0);
        CHECK(r.analytic_prediction == 1.0);
    }

    TEST_CASE("white noise, exponent 1/2")
    {
        // (sqrt gj - sqrt gk)^2 F0 t = 1 -> e^{-1/2}.
        const auto r = simulate_damping(1.0, 0.0, 1.0, 1.0, white_plan(100000, 17));
        CHECK(r.analytic_prediction == doctest::Approx(0.6065306597).epsilon(1e-9));
        CHECK(std::abs(r.mean_interference - r.analytic_prediction) < 3.0 * r.std_error);
        CHECK(r.discrete_prediction == doctest::Approx(r.analytic_prediction).epsilon(1e-14));
        CHECK(std::abs(r.mean_interference) <= 1.0 + 3.0 * r.std_error);
    }

    TEST_CASE("Gaussian dephasing identity over 50 seeds")
    {
        int inside = 0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed)
        {
            const auto r = simulate_damping(1.0, 0.0, 1.0, 1.0, white_plan(2000, seed));
            inside += std::abs(r.mean_interference - r.analytic_prediction) <= 3.0 * r.std_error;
        }
        CHECK(inside >= 49);
    }

    TEST_CASE("exponential form holds at large exponents")
    {
        for (double exponent : {2.0, 3.0})
        {
            const auto c = couplings_for_exponent(exponent, NoiseKernel::white(), 1.0);
            const auto r = simulate_damping(c.gamma_j, c.gamma_k, c.f0, 1.0, white_plan(40000, 5));
            CHECK(r.exponent == doctest::Approx(exponent).epsilon(1e-14));
            CHECK(std::abs(r.mean_interference - r.analytic_prediction) < 3.0 * r.std_error);
        }
    }

    TEST_CASE("OU noise against the colored-noise exponent")
    {
        const double t = 1.0;
        const double tau = 0.1;
        SimulationPlan p;
        p.kernel = NoiseKernel::exponential(tau);
        p.n_steps = 200;
        p.dt = t / 200.0;
        p.n_trajectories = 20000;
        p.seed = 9;
        const auto c = couplings_for_exponent(1.0, p.kernel, t);
        const auto r = simulate_damping(c.gamma_j, c.gamma_k, c.f0, t, p);
        CHECK(std::abs(r.mean_interference - r.analytic_prediction) <
              3.0 * r.std_error + std::abs(r.discrete_prediction - r.analytic_prediction));
        // Riemann-sum bias of the scheme is O((dt/tau)^2) here.
        CHECK(std::abs(r.discrete_prediction - r.analytic_prediction) < 1e-3);
    }

    TEST_CASE("deterministic across reruns and thread counts")
    {
        SimulationPlan p;
        p.kernel = NoiseKernel::exponential(0.5);
        p.n_steps = 100;
        p.dt = 0.01;
        p.n_trajectories = 3001;
        p.seed = 77;
        const auto a = simulate_damping(1.3, 0.2, 2.0, 1.0, p);
        const auto b = simulate_damping(1.3, 0.2, 2.0, 1.0, p);
        p.threads = 4;
        const auto c = simulate_damping(1.3, 0.2, 2.0, 1.0, p);
        CHECK(bitwise_equal(a.mean_interference, b.mean_interference));
        CHECK(bitwise_equal(a.mean_interference, c.mean_interference));
        CHECK(bitwise_equal(a.std_error, c.std_error));
        p.seed = 78;
        CHECK_FALSE(bitwise_equal(a.mean_interference, simulate_damping(1.3, 0.2, 2.0, 1.0, p).mean_interference));
    }

    TEST_CASE("convergence sweep")
    {
        CHECK_THROWS_AS(convergence_sweep(white_plan(1000, 1), 1.0, 1.0, 0.0, 1.0, 2), DomainError);

        const auto white = convergence_sweep(white_plan(20000, 4), 1.0, 1.0, 0.0, 1.0, 3);
        REQUIRE(white.size() == 3);
        for (const auto& row : white)
        {
            CHECK(row.scheme_bias < 1e-14);
            CHECK(row.abs_error < 3.0 * row.result.std_error);
        }
        CHECK(white[1].dt == white[0].dt / 2);
        CHECK(white[2].n_steps == 4 * white[0].n_steps);

        SimulationPlan ou;
        ou.kernel = NoiseKernel::exponential(0.2);
        ou.n_steps = 10;
        ou.dt = 0.02;
        ou.n_trajectories = 5000;
        ou.seed = 12;
        const auto c = couplings_for_exponent(1.5, ou.kernel, 0.2);
        const auto rows = convergence_sweep(ou, 0.2, c.gamma_j, c.gamma_k, c.f0, 4);
        for (std::size_t i = 1; i < rows.size(); ++i)
        {
            CHECK(rows[i].scheme_bias < rows[i - 1].scheme_bias);
        }
        for (const auto& row : rows)
        {
            CHECK(row.abs_error < 3.0 * row.result.std_error + row.scheme_bias);
        }
    }
}
