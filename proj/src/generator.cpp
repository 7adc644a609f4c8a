#include "rbcsp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "rbcsp/rng.hpp"

namespace rbcsp {

DerivedDims derive_dims(const InstanceParams& params) {
    validate(params);
    const double n = static_cast<double>(params.n);
    DerivedDims dims;
    const long long d = round_half_up(std::pow(n, params.alpha));
    if (d < 2)
        throw UnsupportedParamsError("round(n^alpha) < 2");
    dims.d = static_cast<int>(d);
    dims.m = round_half_up(params.r * n * std::log(n));
    if (dims.m < 1)
        throw UnsupportedParamsError("round(r*n*ln n) < 1");
    return dims;
}

namespace {

// Sorted k-subset of [0,n) by partial Fisher-Yates over variable indices.
std::vector<int> sample_scope(Xoshiro256pp& rng, int n, int k, std::vector<int>& scratch) {
    scratch.resize(n);
    std::iota(scratch.begin(), scratch.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(scratch[i], scratch[j]);
    }
    std::vector<int> scope(scratch.begin(), scratch.begin() + k);
    std::sort(scope.begin(), scope.end());
    return scope;
}

// Uniform t-subset of {0,...,space-1} \ {excluded}, returned sorted.
// Partial Fisher-Yates over the implicit index space; O(t) memory.
std::vector<std::uint64_t> sample_code_subset(Xoshiro256pp& rng, std::uint64_t space,
                                              std::uint64_t t,
                                              std::optional<std::uint64_t> excluded) {
    std::uint64_t effective = space - (excluded ? 1 : 0);
    std::vector<std::uint64_t> codes;
    codes.reserve(t);
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    moved.reserve(2 * t);
    auto value_at = [&](std::uint64_t idx) {
        auto it = moved.find(idx);
        return it == moved.end() ? idx : it->second;
    };
    for (std::uint64_t i = 0; i < t; ++i) {
        const std::uint64_t j = i + rng.below(effective - i);
        const std::uint64_t vj = value_at(j);
        moved[j] = value_at(i);
        codes.push_back(vj);
    }
    if (excluded) {
        for (std::uint64_t& c : codes)
            if (c >= *excluded)
                ++c;
    }
    std::sort(codes.begin(), codes.end());
    return codes;
}

// One independent Bernoulli(p) coin per code, in ascending code order.
std::vector<std::uint64_t> sample_code_coins(Xoshiro256pp& rng, std::uint64_t space, double p,
                                             std::optional<std::uint64_t> excluded) {
    std::vector<std::uint64_t> codes;
    for (std::uint64_t c = 0; c < space; ++c) {
        if (excluded && c == *excluded)
            continue;
        if (rng.coin(p))
            codes.push_back(c);
    }
    return codes;
}

}  // namespace

GeneratedInstance generate(const InstanceParams& params) {
    const DerivedDims dims = derive_dims(params);
    const int k = params.k;
    const int d = dims.d;
    const std::uint64_t space = tuple_space_size(d, k);

    std::uint64_t rb_count = 0;
    if (params.model == Model::RB) {
        rb_count = static_cast<std::uint64_t>(
            round_half_up(params.p * static_cast<double>(space)));
        if (params.forced && rb_count >= space)
            throw InfeasibleForcingError(
                "forced RB with round(p*d^k) = d^k leaves no allowed tuple");
    }

    Xoshiro256pp rng(params.seed);

    std::optional<Assignment> forced_solution;
    if (params.forced) {
        Assignment t(params.n);
        for (int& v : t)
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        forced_solution = std::move(t);
    }

    Instance inst;
    inst.n = params.n;
    inst.d = d;
    inst.constraints.reserve(static_cast<std::size_t>(dims.m));

    std::vector<int> scratch;
    std::vector<int> proj(k);
    for (long long ci = 0; ci < dims.m; ++ci) {
        Constraint c;
        c.scope = sample_scope(rng, params.n, k, scratch);

        std::optional<std::uint64_t> excluded;
        if (forced_solution) {
            for (int i = 0; i < k; ++i)
                proj[i] = (*forced_solution)[c.scope[i]];
            excluded = tuple_code(proj, d);
        }

        const std::vector<std::uint64_t> codes =
            params.model == Model::RB
                ? sample_code_subset(rng, space, rb_count, excluded)
                : sample_code_coins(rng, space, params.p, excluded);

        c.forbidden.resize(codes.size() * static_cast<std::size_t>(k));
        for (std::size_t t = 0; t < codes.size(); ++t)
            code_tuple(codes[t], k, d, {c.forbidden.data() + t * k, static_cast<std::size_t>(k)});
        inst.constraints.push_back(std::move(c));
    }

    return GeneratedInstance{params, dims, std::move(inst), std::move(forced_solution)};
}

std::vector<GeneratedInstance> sample_batch(const InstanceParams& params, int count,
                                            std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("count must be >= 1");
    std::vector<GeneratedInstance> batch;
    batch.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        InstanceParams sub = params;
        sub.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        batch.push_back(generate(sub));
    }
    return batch;
}

}  // namespace rbcsp
