#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "rbcsp/generator.hpp"
#include "rbcsp/rng.hpp"
#include "test_util.hpp"

using namespace rbcsp;

namespace {

InstanceParams make_params(int k, int n, double alpha, double r, double p,
                           Model model = Model::RB, bool forced = false,
                           std::uint64_t seed = 0) {
    InstanceParams params;
    params.k = k;
    params.n = n;
    params.alpha = alpha;
    params.r = r;
    params.p = p;
    params.model = model;
    params.forced = forced;
    params.seed = seed;
    return params;
}

const double kConclusionR = 0.8 / std::log(4.0 / 3.0);

}  // namespace

TEST_CASE("derive_dims reproduces the published checkpoints") {
    CHECK(derive_dims(make_params(2, 40, 0.8, kConclusionR, 0.25)) == DerivedDims{19, 410});
    CHECK(derive_dims(make_params(2, 50, 0.8, kConclusionR, 0.25)) == DerivedDims{23, 544});
    CHECK(derive_dims(make_params(3, 16, 1.0, 1.0, 0.5)) == DerivedDims{16, 44});
}

TEST_CASE("derive_dims rejects degenerate domains") {
    CHECK_THROWS_AS(derive_dims(make_params(2, 4, 0.1, 1.0, 0.5)), UnsupportedParamsError);
    CHECK_THROWS_AS(derive_dims(make_params(2, 4, 1.0, 0.01, 0.5)), UnsupportedParamsError);
}

TEST_CASE("generate: documented small RB example") {
    const GeneratedInstance gi = generate(make_params(2, 8, 0.5, 1.0, 0.2, Model::RB));
    CHECK(gi.dims.d == 3);
    CHECK(gi.dims.m == 17);
    CHECK(gi.instance.constraints.size() == 17);
    for (const Constraint& c : gi.instance.constraints)
        CHECK(c.tuple_count() == 2);  // round(0.2 * 9)
    CHECK_NOTHROW(validate(gi.instance));
}

TEST_CASE("RB cardinality is exact across parameters") {
    Xoshiro256pp rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(2));
        const int n = k + 3 + static_cast<int>(rng.below(8));
        const auto params = make_params(k, n, 0.4 + rng.unit(), 0.4 + rng.unit(),
                                        0.05 + 0.8 * rng.unit(), Model::RB, false, rng.next());
        const GeneratedInstance gi = generate(params);
        const double space = std::pow(static_cast<double>(gi.dims.d), k);
        const long long want = round_half_up(params.p * space);
        for (const Constraint& c : gi.instance.constraints)
            CHECK(c.tuple_count() == want);
    }
}

TEST_CASE("RD forbidden fraction converges to p over many constraints") {
    const double p = 0.3;
    auto params = make_params(2, 6, 1.0, 1.0, p, Model::RD);
    long long forbidden = 0;
    long long total = 0;
    long long constraints = 0;
    std::uint64_t seed = 0;
    while (constraints < 10000) {
        params.seed = seed++;
        const GeneratedInstance gi = generate(params);
        for (const Constraint& c : gi.instance.constraints) {
            forbidden += c.tuple_count();
            total += 36;  // d^k = 6^2
            ++constraints;
        }
    }
    const double observed = static_cast<double>(forbidden) / static_cast<double>(total);
    CHECK(std::abs(observed - p) < 0.01);
}

TEST_CASE("forced instances are satisfied by their forced solution") {
    Xoshiro256pp rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(2));
        const int n = k + 3 + static_cast<int>(rng.below(10));
        const auto model = rng.coin(0.5) ? Model::RB : Model::RD;
        const auto params = make_params(k, n, 0.5 + rng.unit(), 0.4 + rng.unit(),
                                        0.05 + 0.7 * rng.unit(), model, true, rng.next());
        const GeneratedInstance gi = generate(params);
        REQUIRE(gi.forced_solution.has_value());
        CHECK(satisfies(gi.instance, *gi.forced_solution));
        // stronger: the projection never appears in any forbidden set
        for (const Constraint& c : gi.instance.constraints) {
            std::vector<int> proj;
            for (int v : c.scope)
                proj.push_back((*gi.forced_solution)[v]);
            const std::uint64_t code = tuple_code(proj, gi.instance.d);
            for (long long t = 0; t < c.tuple_count(); ++t)
                CHECK(tuple_code(c.tuple(t), gi.instance.d) != code);
        }
    }
}

TEST_CASE("unforced instances carry no forced solution") {
    const GeneratedInstance gi = generate(make_params(2, 8, 0.5, 1.0, 0.2));
    CHECK_FALSE(gi.forced_solution.has_value());
}

TEST_CASE("p small enough to round to zero forbidden tuples: everything satisfies") {
    // d = 3, d^k = 9, round(0.01 * 9) = 0
    const auto params = make_params(2, 8, 0.5, 1.0, 0.01, Model::RB, false, 5);
    const GeneratedInstance gi = generate(params);
    Xoshiro256pp rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Assignment a(8);
        for (int& v : a)
            v = static_cast<int>(rng.below(3));
        CHECK(satisfies(gi.instance, a));
    }
}

TEST_CASE("scopes are sorted k-subsets of the variables") {
    Xoshiro256pp rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(2));
        const int n = k + 2 + static_cast<int>(rng.below(10));
        const auto params =
            make_params(k, n, 0.8, 0.8, 0.3, Model::RB, false, rng.next());
        const GeneratedInstance gi = generate(params);
        for (const Constraint& c : gi.instance.constraints) {
            CHECK(static_cast<int>(c.scope.size()) == k);
            for (std::size_t i = 0; i < c.scope.size(); ++i) {
                CHECK(c.scope[i] >= 0);
                CHECK(c.scope[i] < n);
                if (i > 0)
                    CHECK(c.scope[i] > c.scope[i - 1]);
            }
        }
    }
}

TEST_CASE("scope selection is uniform over the k-subsets") {
    // k=2, n=4: six scopes, each should appear with frequency 1/6 +- 0.02
    auto params = make_params(2, 4, 1.0, 2.0, 0.3);
    std::map<std::pair<int, int>, long long> hits;
    long long total = 0;
    for (std::uint64_t seed = 0; seed < 2500; ++seed) {
        params.seed = seed;
        const GeneratedInstance gi = generate(params);
        for (const Constraint& c : gi.instance.constraints) {
            ++hits[{c.scope[0], c.scope[1]}];
            ++total;
        }
    }
    CHECK(hits.size() == 6);
    for (const auto& [scope, count] : hits) {
        const double freq = static_cast<double>(count) / static_cast<double>(total);
        CHECK(std::abs(freq - 1.0 / 6.0) < 0.02);
    }
}

TEST_CASE("generation is a pure function of params") {
    const auto params = make_params(3, 9, 0.7, 1.2, 0.35, Model::RD, true, 987654321);
    const GeneratedInstance a = generate(params);
    const GeneratedInstance b = generate(params);
    CHECK(a == b);

    auto other = params;
    other.seed = 987654322;
    CHECK(generate(other) != a);
}

TEST_CASE("forced RB with a full forbidden set is rejected") {
    // d = 2, d^k = 4, round(0.9 * 4) = 4: no tuple left for the solution
    const auto params = make_params(2, 4, 0.5, 1.0, 0.9, Model::RB, true);
    CHECK_THROWS_AS(generate(params), InfeasibleForcingError);
    // unforced it is merely trivially unsatisfiable, not an error
    auto unforced = params;
    unforced.forced = false;
    CHECK_NOTHROW(generate(unforced));
}

TEST_CASE("sample_batch: degenerate, deterministic, and seed-sensitive") {
    const auto params = make_params(2, 8, 0.5, 1.0, 0.2);

    const auto single = sample_batch(params, 1, 77);
    REQUIRE(single.size() == 1);
    auto direct = params;
    direct.seed = derive_seed(77, 0);
    CHECK(single[0] == generate(direct));

    const auto batch1 = sample_batch(params, 50, 123);
    const auto batch2 = sample_batch(params, 50, 123);
    CHECK(batch1 == batch2);

    const auto other = sample_batch(params, 50, 124);
    bool differs = false;
    for (std::size_t i = 0; i < other.size(); ++i)
        differs |= !(other[i] == batch1[i]);
    CHECK(differs);

    CHECK_THROWS_AS(sample_batch(params, 0, 1), std::invalid_argument);
}
