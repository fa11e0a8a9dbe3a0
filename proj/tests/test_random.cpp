#include "support.hpp"

#include "cslmeson/random.hpp"

#include <set>

using namespace cslmeson;

TEST_SUITE("random")
{
    TEST_CASE("Philox4x32-10 known-answer vectors")
    {
        CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
              PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams are reproducible and distinct")
    {
        CounterStream a(42, 7);
        CounterStream b(42, 7);
        CounterStream c(42, 8);
        CounterStream d(43, 7);
        std::set<std::uint64_t> firsts;
        for (int i = 0; i < 100; ++i)
        {
            const auto x = a.next_u64();
            CHECK(x == b.next_u64());
            firsts.insert(x);
        }
        CHECK(firsts.size() == 100);
        CounterStream a2(42, 7);
        const auto first = a2.next_u64();
        CHECK(first != c.next_u64());
        CHECK(first != d.next_u64());
    }

    TEST_CASE("first block layout")
    {
        // Block 0 of stream s under seed k is philox(0, 0, s_lo, s_hi; k_lo, k_hi).
        const std::uint64_t seed = 0x0123456789abcdefull;
        const std::uint64_t stream = 0xfedcba9876543210ull;
        const auto block = philox4x32_10({0, 0, 0x76543210u, 0xfedcba98u}, {0x89abcdefu, 0x01234567u});
        CounterStream s(seed, stream);
        CHECK(s.next_u64() == ((static_cast<std::uint64_t>(block[1]) << 32) | block[0]));
        CHECK(s.next_u64() == ((static_cast<std::uint64_t>(block[3]) << 32) | block[2]));
    }

    TEST_CASE("uniform ranges")
    {
        CounterStream s(1, 0);
        for (int i = 0; i < 100000; ++i)
        {
            const double u = s.uniform();
            CHECK_UNARY(u >= 0.0 && u < 1.0);
            const double v = s.uniform_open_low();
            CHECK_UNARY(v > 0.0 && v <= 1.0);
        }
    }

    TEST_CASE("normal moments")
    {
        CounterStream s(2024, 3);
        const int n = 400000;
        double m1 = 0.0, m2 = 0.0, m4 = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double z = s.normal();
            m1 += z;
            m2 += z * z;
            m4 += z * z * z * z;
        }
        m1 /= n;
        m2 /= n;
        m4 /= n;
        // Standard errors: 1/sqrt(n), sqrt(2/n), sqrt(96/n).
        CHECK(std::abs(m1) < 5.0 / std::sqrt(n));
        CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
        CHECK(std::abs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
    }
}
