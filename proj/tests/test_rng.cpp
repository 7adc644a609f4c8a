#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "rbcsp/rng.hpp"

using namespace rbcsp;

TEST_CASE("xoshiro256++ stream is deterministic per seed") {
    Xoshiro256pp a(42);
    Xoshiro256pp b(42);
    Xoshiro256pp c(43);
    bool saw_difference = false;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t x = a.next();
        CHECK(x == b.next());
        saw_difference |= x != c.next();
    }
    CHECK(saw_difference);
}

TEST_CASE("frozen stream values pin the generator across platforms") {
    // First outputs for seed 42, recorded once; any change here breaks
    // reproducibility of every seeded artifact.
    Xoshiro256pp rng(42);
    const std::vector<std::uint64_t> expected = {
        15021278609987233951ULL,
        5881210131331364753ULL,
        18149643915985481100ULL,
        12933668939759105464ULL,
    };
    for (std::uint64_t want : expected)
        CHECK(rng.next() == want);
}

TEST_CASE("below() stays in range and looks uniform") {
    Xoshiro256pp rng(7);
    const std::uint64_t bound = 6;
    std::vector<int> hits(bound, 0);
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = rng.below(bound);
        REQUIRE(v < bound);
        ++hits[v];
    }
    for (int h : hits) {
        const double freq = static_cast<double>(h) / draws;
        CHECK(freq > 1.0 / bound - 0.01);
        CHECK(freq < 1.0 / bound + 0.01);
    }
}

TEST_CASE("unit() lies in [0,1)") {
    Xoshiro256pp rng(9);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("derive_seed matches the splitmix64 stream and is O(1) in the index") {
    const std::uint64_t master = 12345;
    std::uint64_t state = master;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const std::uint64_t streamed = splitmix64(state);
        CHECK(derive_seed(master, i) == streamed);
    }
}

TEST_CASE("derive_seed separates indices and masters") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
