#pragma once

#include "rbcsp/core.hpp"

namespace rbcsp {

struct TabuConfig {
    long long max_flips = 100000;
    int tabu_tenure = 10;
    int restarts = 10;  // fresh random assignment every max_flips/restarts flips; 0 = never
    std::uint64_t seed = 0;
    bool weight_learning = true;  // increment weights of violated constraints at local minima
    bool self_check = false;      // recompute the evaluation from scratch every 1000 flips
};

/// Incomplete local search over total assignments. Each step flips one
/// variable to the value minimizing the weighted violated-constraint
/// count; a value a variable just moved away from is tabu for
/// tabu_tenure flips unless retaking it reaches a new best raw violation
/// count (aspiration). Returns SAT with a verified witness or TIMEOUT
/// when the flip budget runs out; never UNSAT. Deterministic per seed.
SolveOutcome solve_tabu(const Instance& inst, const TabuConfig& cfg = {});

}  // namespace rbcsp
