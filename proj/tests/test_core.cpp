#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rbcsp/core.hpp"
#include "rbcsp/generator.hpp"
#include "rbcsp/rng.hpp"
#include "test_util.hpp"

using namespace rbcsp;

namespace {

Instance two_var_instance(int d, std::vector<std::vector<int>> forbidden) {
    Instance inst;
    inst.n = 2;
    inst.d = d;
    Constraint c;
    c.scope = {0, 1};
    for (const auto& tup : forbidden)
        c.forbidden.insert(c.forbidden.end(), tup.begin(), tup.end());
    inst.constraints.push_back(std::move(c));
    return inst;
}

}  // namespace

TEST_CASE("satisfies: vacuous on a constraint-free instance") {
    Instance inst;
    inst.n = 3;
    inst.d = 2;
    CHECK(satisfies(inst, {0, 1, 0}));
    CHECK(satisfies(inst, {1, 1, 1}));
}

TEST_CASE("satisfies: a forbidden projection violates") {
    const Instance inst = two_var_instance(3, {{1, 2}});
    CHECK_FALSE(satisfies(inst, {1, 2}));
    CHECK(satisfies(inst, {1, 1}));
    CHECK(satisfies(inst, {2, 2}));
}

TEST_CASE("satisfies: dimension mismatch is rejected") {
    const Instance inst = two_var_instance(3, {{0, 0}});
    CHECK_THROWS_AS(satisfies(inst, {0}), std::invalid_argument);
    CHECK_THROWS_AS(satisfies(inst, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(satisfies(inst, {0, 5}), std::invalid_argument);
}

TEST_CASE("satisfies agrees with a naive linear-scan oracle") {
    Xoshiro256pp rng(7001);
    for (int trial = 0; trial < 50; ++trial) {
        InstanceParams params;
        params.k = 2 + static_cast<int>(rng.below(2));
        params.n = params.k + 2 + static_cast<int>(rng.below(5));  // n <= 8
        params.alpha = 0.5 + rng.unit();
        params.r = 0.5 + rng.unit();
        params.p = 0.1 + 0.6 * rng.unit();
        params.model = rng.coin(0.5) ? Model::RB : Model::RD;
        params.seed = rng.next();
        const GeneratedInstance gi = generate(params);
        Assignment a(static_cast<std::size_t>(params.n));
        for (int& v : a)
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(gi.dims.d)));
        CHECK(satisfies(gi.instance, a) == testutil::naive_satisfies(gi.instance, a));
    }
}

TEST_CASE("satisfies is monotone under constraint removal") {
    Xoshiro256pp rng(7002);
    for (int trial = 0; trial < 30; ++trial) {
        InstanceParams params;
        params.k = 2;
        params.n = 6;
        params.alpha = 1.0;
        params.r = 0.8;
        params.p = 0.4;
        params.seed = rng.next();
        const GeneratedInstance gi = generate(params);
        Assignment a(static_cast<std::size_t>(params.n));
        for (int& v : a)
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(gi.dims.d)));
        const bool before = satisfies(gi.instance, a);
        for (std::size_t drop = 0; drop < gi.instance.constraints.size(); ++drop) {
            Instance smaller = gi.instance;
            smaller.constraints.erase(smaller.constraints.begin() +
                                      static_cast<std::ptrdiff_t>(drop));
            if (before)
                CHECK(satisfies(smaller, a));
        }
    }
}

TEST_CASE("distance: trivial values") {
    CHECK(distance({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(distance({0, 0, 0}, {1, 1, 1}) == 1.0);
    CHECK(distance({0, 1, 2, 3}, {0, 1, 2, 0}) == 0.25);
}

TEST_CASE("distance: length mismatch is rejected") {
    CHECK_THROWS_AS(distance({0, 1}, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(distance({}, {}), std::invalid_argument);
}

TEST_CASE("distance: symmetric, zero iff equal, quantized to multiples of 1/n") {
    Xoshiro256pp rng(7003);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(12));
        Assignment a(static_cast<std::size_t>(n));
        Assignment b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.below(4));
            b[i] = static_cast<int>(rng.below(4));
        }
        const double dab = distance(a, b);
        CHECK(dab == distance(b, a));
        CHECK((dab == 0.0) == (a == b));
        const double scaled = dab * n;
        CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
        CHECK(dab >= 0.0);
        CHECK(dab <= 1.0);
    }
}

TEST_CASE("tuple codes round-trip") {
    Xoshiro256pp rng(7004);
    std::vector<int> tup(3), back(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(9));
        for (int& v : tup)
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        const std::uint64_t code = tuple_code(tup, d);
        CHECK(code < tuple_space_size(d, 3));
        code_tuple(code, 3, d, back);
        CHECK(tup == back);
    }
}

TEST_CASE("instance validation rejects malformed structures") {
    Instance inst = two_var_instance(3, {{0, 0}});
    CHECK_NOTHROW(validate(inst));

    Instance bad_scope = inst;
    bad_scope.constraints[0].scope = {1, 0};
    CHECK_THROWS_AS(validate(bad_scope), std::invalid_argument);

    Instance out_of_range = inst;
    out_of_range.constraints[0].forbidden = {0, 3};
    CHECK_THROWS_AS(validate(out_of_range), std::invalid_argument);

    Instance duplicate = two_var_instance(3, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(validate(duplicate), std::invalid_argument);

    Instance repeated_var = inst;
    repeated_var.constraints[0].scope = {1, 1};
    CHECK_THROWS_AS(validate(repeated_var), std::invalid_argument);
}

TEST_CASE("params validation enforces the documented ranges") {
    InstanceParams p;
    p.k = 2;
    p.n = 8;
    p.alpha = 0.5;
    p.r = 1.0;
    p.p = 0.2;
    CHECK_NOTHROW(validate(p));

    InstanceParams bad = p;
    bad.k = 1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.n = 1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.r = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.p = 1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.alpha = 0.05;  // round(n^alpha) = 1
    CHECK_THROWS_AS(validate(bad), UnsupportedParamsError);
}

TEST_CASE("round_half_up rounds halves upward for non-negative input") {
    CHECK(round_half_up(0.0) == 0);
    CHECK(round_half_up(0.5) == 1);
    CHECK(round_half_up(1.49) == 1);
    CHECK(round_half_up(2.5) == 3);
    CHECK(round_half_up(410.33) == 410);
}
