#include "support.hpp"

#include "cslmeson/entanglement.hpp"
#include "cslmeson/error.hpp"

#include <numbers>
#include <random>

using namespace cslmeson;
using testing::kaon;
using testing::rel_close;
using testing::stable_kaon;

namespace
{

constexpr auto L = Eigenstate::light;
constexpr auto H = Eigenstate::heavy;
constexpr auto P = Flavor::particle;
constexpr auto A = Flavor::antiparticle;

CslParams params_for_rate(const MesonSpecies& s, double lambda)
{
    CslParams p = CslParams::adler();
    p.gamma_cm3_per_s *= lambda / csl_damping_rate(p, s);
    return p;
}

double psi_minus(Flavor a, Flavor b, double tl, double tr, const MesonSpecies& s, const DampingSpec& spec,
                 const Kinematics& kin = {})
{
    return joint_probability(antisymmetric_state(), flavor_projection(a, b), JointQuery{tl, tr, s, spec, kin});
}

// Explicit amplitude for psi-minus and flavor projections, no damping:
// A = (b_l* g_h* a_l(tl) a_h(tr) - b_h* g_l* a_h(tl) a_l(tr)) / sqrt2.
double amplitude_oracle(Flavor a, Flavor b, double tl, double tr, const MesonSpecies& s)
{
    const double hbar = kConstants.hbar_mev_s;
    auto evolve = [&](Eigenstate e, double t) {
        const double m = e == H ? s.delta_m_mev : 0.0;
        return std::exp(Complex(-s.width(e) / (2.0 * hbar) * t, -m * t / hbar));
    };
    const auto beta = flavor_coefficients(a);
    const auto gamma = flavor_coefficients(b);
    const Complex amp = (std::conj(beta[0]) * std::conj(gamma[1]) * evolve(L, tl) * evolve(H, tr) -
                         std::conj(beta[1]) * std::conj(gamma[0]) * evolve(H, tl) * evolve(L, tr)) /
                        std::sqrt(2.0);
    return std::norm(amp);
}

} // namespace

TEST_SUITE("entanglement")
{
    TEST_CASE("antisymmetric state")
    {
        const auto s = antisymmetric_state();
        CHECK_NOTHROW(s.validate());
        CHECK(s.alpha[0][1] == -s.alpha[1][0]);
        CHECK(s.alpha[0][0] == Complex{});
        CHECK(s.alpha[1][1] == Complex{});
        // Orthogonal to the symmetric combination.
        const Complex overlap = std::conj(s.alpha[0][1]) * (1.0 / std::sqrt(2.0)) +
                                std::conj(s.alpha[1][0]) * (1.0 / std::sqrt(2.0));
        CHECK(std::abs(overlap) < 1e-16);
    }

    TEST_CASE("input validation")
    {
        TwoParticleState bad;
        bad.alpha[0][0] = 0.5;
        CHECK_THROWS_AS(bad.validate(), DomainError);
        FinalProjection proj = flavor_projection(P, P);
        proj.beta[0] = 2.0;
        CHECK_THROWS_AS(proj.validate(), DomainError);
        CHECK_THROWS_AS(psi_minus(P, P, -1.0, 0.0, kaon(), NoDamping{}), DomainError);
        CHECK_THROWS_AS(zeta_joint_probability(kaon(), 0.0, 0.0, P, P, 1.5), DomainError);
        CHECK_THROWS_AS(min_time_joint_probability(kaon(), 0.0, 0.0, P, P, -1.0), DomainError);
    }

    TEST_CASE("quadruple sum against the explicit amplitude")
    {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(0.0, 5e-10);
        const auto& k = kaon();
        for (int i = 0; i < 200; ++i)
        {
            const double tl = u(rng);
            const double tr = u(rng);
            for (auto a : {P, A})
                for (auto b : {P, A})
                    CHECK(std::abs(psi_minus(a, b, tl, tr, k, NoDamping{}) - amplitude_oracle(a, b, tl, tr, k)) <
                          1e-14);
        }
    }

    TEST_CASE("EPR anti-correlation at equal times")
    {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 1e-9);
        for (int i = 0; i < 200; ++i)
        {
            const double t = u(rng);
            const Kinematics kin{0.0, EnergyMode::nonrelativistic, i % 2 == 0};
            CHECK(psi_minus(P, P, t, t, kaon(), NoDamping{}, kin) < 1e-12);
            CHECK(psi_minus(A, A, t, t, kaon(), NoDamping{}, kin) < 1e-12);
        }
    }

    TEST_CASE("equal times, no decay, white noise: (1 - e^{-2 Lambda t}) / 4")
    {
        const auto s = stable_kaon();
        const CslParams params = params_for_rate(s, 4e9);
        const double lambda = csl_damping_rate(params, s);
        for (double t : {1e-11, 1e-10, 5e-10, 2e-9})
        {
            const double expect = 0.25 * (1.0 - std::exp(-2.0 * lambda * t));
            CHECK(std::abs(psi_minus(P, P, t, t, s, CslDamping{params}) - expect) < 1e-14);
        }
    }

    TEST_CASE("separable state with mass projections")
    {
        TwoParticleState sep;
        sep.alpha[0][1] = 1.0;
        const auto& k = kaon();
        const double tl = 2e-10;
        const double tr = 7e-9;
        const double got = joint_probability(sep, mass_projection(L, H), JointQuery{tl, tr, k, NoDamping{}, {}});
        CHECK(rel_close(got, std::exp(-tl / k.tau_light_s) * std::exp(-tr / k.tau_heavy_s), 1e-14));
        CHECK(joint_probability(sep, mass_projection(H, L), JointQuery{tl, tr, k, NoDamping{}, {}}) == 0.0);
    }

    TEST_CASE("outcome total is A / 2 for every spec")
    {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto& k = kaon();
        for (int i = 0; i < 300; ++i)
        {
            const double tl = 1e-9 * u(rng);
            const double tr = 1e-9 * u(rng);
            DampingSpec spec;
            switch (i % 3)
            {
            case 0: spec = NoDamping{}; break;
            case 1: spec = CslDamping{params_for_rate(k, 1e10 * u(rng))}; break;
            default: spec = LindbladDamping{1e10 * u(rng)}; break;
            }
            double sum = 0.0;
            for (auto a : {P, A})
                for (auto b : {P, A})
                    sum += psi_minus(a, b, tl, tr, k, spec);
            const double gs = k.decay_rate(L);
            const double gl = k.decay_rate(H);
            const double expect = 0.5 * (std::exp(-gs * tl - gl * tr) + std::exp(-gl * tl - gs * tr));
            CHECK(std::abs(sum - expect) < 1e-12);
            CHECK(std::abs(outcome_total(k, tl, tr) - expect) < 1e-15);
        }
    }

    TEST_CASE("factorized damping e^{-Lambda (t_l + t_r)}")
    {
        const auto& k = kaon();
        const CslParams params = params_for_rate(k, 3e9);
        const double lambda = csl_damping_rate(params, k);
        for (double tl : {0.0, 1e-10, 4e-10})
        {
            for (double tr : {5e-11, 3e-10})
            {
                const auto terms = interference_terms(k, tl, tr);
                // Interference part of P(P,P) is -C/4; extract it from both results.
                const double damped = psi_minus(P, P, tl, tr, k, CslDamping{params}) - terms.A / 8.0;
                const double undamped = psi_minus(P, P, tl, tr, k, NoDamping{}) - terms.A / 8.0;
                if (std::abs(undamped) > 1e-6)
                {
                    CHECK(rel_close(damped / undamped, std::exp(-lambda * (tl + tr)), 1e-9));
                }
            }
        }
    }

    TEST_CASE("swap symmetry")
    {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.0, 1e-9);
        const auto& k = kaon();
        const DampingSpec spec = LindbladDamping{2e9};
        for (int i = 0; i < 100; ++i)
        {
            const double tl = u(rng);
            const double tr = u(rng);
            CHECK(std::abs(psi_minus(P, A, tl, tr, k, spec) - psi_minus(A, P, tr, tl, k, spec)) < 1e-15);
            CHECK(std::abs(psi_minus(P, P, tl, tr, k, spec) - psi_minus(P, P, tr, tl, k, spec)) < 1e-15);
        }
    }

    TEST_CASE("zeta model")
    {
        const auto& k = kaon();
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0.0, 1e-9);
        for (int i = 0; i < 200; ++i)
        {
            const double tl = u(rng);
            const double tr = u(rng);
            for (auto a : {P, A})
                for (auto b : {P, A})
                    CHECK(std::abs(zeta_joint_probability(k, tl, tr, a, b, 0.0) - psi_minus(a, b, tl, tr, k, NoDamping{})) <
                          1e-12);
            double total = 0.0;
            for (auto a : {P, A})
                for (auto b : {P, A})
                    total += zeta_conditional_probability(k, tl, tr, a, b, 0.37);
            CHECK(std::abs(total - 1.0) < 1e-12);
        }
        const double t = 1.3e-10;
        const double gs = k.decay_rate(L);
        const double gl = k.decay_rate(H);
        CHECK(rel_close(zeta_joint_probability(k, t, t, P, P, 1.0), 0.25 * std::exp(-(gs + gl) * t), 1e-14));
        CHECK(zeta_joint_probability(k, t, t, P, P, 0.0) < 1e-12);
        CHECK(zeta_conditional_probability(k, t, t, P, P, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    }

    TEST_CASE("min-time model")
    {
        const auto& k = kaon();
        const double tl = 2e-10;
        const double tr = 3.5e-10;
        for (auto a : {P, A})
        {
            CHECK(min_time_joint_probability(k, tl, tr, a, P, 0.0) == zeta_joint_probability(k, tl, tr, a, P, 0.0));
            CHECK(min_time_joint_probability(k, 0.0, tr, a, P, 1e12) == zeta_joint_probability(k, 0.0, tr, a, P, 0.0));
        }
        const double zeta = 0.13;
        const double lambda = -std::log(1.0 - zeta) / tl;
        CHECK(rel_close(min_time_joint_probability(k, tl, tr, P, P, lambda), zeta_joint_probability(k, tl, tr, P, P, zeta),
                        1e-12));
    }

    TEST_CASE("equal-width formula")
    {
        auto b = default_registry().species("B0");
        const double tl = 1e-12;
        const double tr = 2.5e-12;
        const auto like = equal_width_joint_probability(b, tl, tr, P, P);
        const auto unlike = equal_width_joint_probability(b, tl, tr, P, A);
        CHECK(like.widths_comparable);
        // Derived form equals the general quadruple sum with equal widths.
        CHECK(std::abs(like.derived - psi_minus(P, P, tl, tr, b, NoDamping{})) < 1e-14);
        CHECK(std::abs(unlike.derived - psi_minus(P, A, tl, tr, b, NoDamping{})) < 1e-14);
        // The printed two-term form is the sum of the two unlike outcomes.
        CHECK(std::abs(like.printed - (psi_minus(P, A, tl, tr, b, NoDamping{}) + psi_minus(A, P, tl, tr, b, NoDamping{}))) <
              1e-14);

        // t_l = t_r, no decay: printed gives 1, derived like-flavor gives 0.
        const Kinematics no_decay{0.0, EnergyMode::nonrelativistic, false};
        const auto eq = equal_width_joint_probability(b, 3e-12, 3e-12, P, P, no_decay);
        CHECK(eq.printed == 1.0);
        CHECK(eq.derived == 0.0);

        // Phase pi between the two times: cosine = -1.
        const double dt_pi = kConstants.hbar_mev_s * std::numbers::pi / b.delta_m_mev;
        CHECK(std::abs(equal_width_joint_probability(b, 0.0, dt_pi, P, P).printed) < 1e-15);

        // Doubling both times scales the envelope by e^{-G (t_l + t_r)}.
        const auto r1 = equal_width_joint_probability(b, tl, tl, A, P);
        const auto r2 = equal_width_joint_probability(b, 2 * tl, 2 * tl, A, P);
        CHECK(rel_close(r2.derived / r1.derived, std::exp(-2.0 * tl / b.tau_light_s), 1e-12));

        CHECK_FALSE(equal_width_joint_probability(kaon(), tl, tr, P, P).widths_comparable);
    }
}
