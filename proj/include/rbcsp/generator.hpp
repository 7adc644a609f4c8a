#pragma once

#include <vector>

#include "rbcsp/core.hpp"

namespace rbcsp {

struct GeneratedInstance {
    InstanceParams params;
    DerivedDims dims;
    Instance instance;
    std::optional<Assignment> forced_solution;  // present iff params.forced

    bool operator==(const GeneratedInstance&) const = default;
};

/// d = round-half-up(n^alpha), m = round-half-up(r*n*ln n).
/// Throws UnsupportedParamsError if d < 2 or m < 1.
DerivedDims derive_dims(const InstanceParams& params);

/// Draw one instance. Scopes are uniform k-subsets selected independently
/// with repetition across constraints. RB forbids a uniform
/// round-half-up(p*d^k)-subset of the d^k value tuples per constraint; RD
/// forbids each tuple independently with probability p. In forced mode a
/// uniform total assignment is drawn first and each constraint's forbidden
/// set is sampled from the same distribution restricted to tuples other
/// than the assignment's projection, so the assignment is a solution by
/// construction. Pure function of params (including params.seed).
GeneratedInstance generate(const InstanceParams& params);

/// `count` instances from sub-seeds derive_seed(seed, 0..count-1);
/// params.seed is ignored in favour of the derived sub-seeds.
std::vector<GeneratedInstance> sample_batch(const InstanceParams& params, int count,
                                            std::uint64_t seed);

}  // namespace rbcsp
