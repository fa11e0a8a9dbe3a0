#include "support.hpp"

#include "cslmeson/error.hpp"
#include "cslmeson/wavepackets.hpp"

#include "quadrature_oracle.hpp"

using namespace cslmeson;
using testing::defining_double_integral;
using testing::rel_close;

TEST_SUITE("wavepackets")
{
    TEST_CASE("closed form against the defining double integral")
    {
        for (double r : {1e-7, 1e-5, 1e-3})
        {
            for (double sigma_over_r : {1e-2, 1.0, 1e2})
            {
                const double sigma = sigma_over_r * r;
                const double s = std::sqrt(r * r + sigma * sigma);
                for (double d_over_s : {0.0, 0.3, 2.0, 6.0})
                {
                    const double d = d_over_s * s;
                    const double numeric = defining_double_integral(d, sigma, r);
                    const double closed = cross_term_kernel_overlap(d, sigma, r);
                    CHECK_MESSAGE(rel_close(numeric, closed, 1e-8), "r=", r, " sigma=", sigma, " d=", d);
                }
            }
        }
    }

    TEST_CASE("documented values")
    {
        CHECK(cross_term_kernel_overlap(0.0, 1e-5, 1e-5) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
        CHECK(cross_term_kernel_overlap(0.0, 1e-12, 1e-5) == doctest::Approx(1.0).epsilon(1e-12));
        const double s = std::sqrt(2.0) * 1e-5;
        CHECK(cross_term_kernel_overlap(20.0 * s, 1e-5, 1e-5) < std::exp(-100.0));
        CHECK(cross_term_kernel_overlap(0.0, 1e-5, 1e-5, 3) ==
              doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-14));
        CHECK_THROWS_AS(cross_term_kernel_overlap(0.0, 0.0, 1e-5), DomainError);
        CHECK_THROWS_AS(cross_term_kernel_overlap(0.0, 1e-5, 1e-5, 2), DomainError);
    }

    TEST_CASE("symmetry and monotonicity")
    {
        const double r = 1e-5;
        double prev = 2.0;
        for (double d = 0.0; d < 1e-3; d += 1e-5)
        {
            const double v = cross_term_kernel_overlap(d, 3e-5, r);
            CHECK(v == cross_term_kernel_overlap(-d, 3e-5, r));
            CHECK(v <= prev);
            prev = v;
        }
        prev = 2.0;
        for (double sigma = 1e-8; sigma < 1e-2; sigma *= 3.0)
        {
            const double v = cross_term_kernel_overlap(0.0, sigma, r);
            CHECK(v < prev);
            prev = v;
        }
    }

    TEST_CASE("kaon-like packets separate beyond any overlap")
    {
        const double v = 0.2 * kConstants.c_cm_per_s;
        const GaussianPacket left{0.0, 1e-4, -v};
        const GaussianPacket right{0.0, 1e-4, v};
        CHECK(suppression_ratio(0.0, left, right, 1e-5) == 1.0);
        CHECK(rel_close(packet_separation(1e-12, left, right), 0.4 * kConstants.c_cm_per_s * 1e-12, 1e-14));
        const double lr = log_suppression_ratio(1e-12, left, right, 1e-5);
        const double d = packet_separation(1e-12, left, right);
        CHECK(rel_close(lr, -d * d / (4.0 * (1e-10 + 1e-8)), 1e-12));
        CHECK(lr < -3.5e3);
        CHECK(suppression_ratio(1e-12, left, right, 1e-5) == 0.0);

        double prev = 0.0;
        for (int i = 0; i <= 20; ++i)
        {
            const double x = log_suppression_ratio(1e-13 * i, left, right, 1e-5);
            CHECK(x <= prev);
            prev = x;
        }
        CHECK_THROWS_AS(packet_separation(-1.0, left, right), DomainError);
    }
}
