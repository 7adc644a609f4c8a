#pragma once

#include <utility>
#include <vector>

#include "rbcsp/core.hpp"

namespace rbcsp {

struct SearchConfig {
    std::optional<long long> node_limit;
    std::optional<long long> backtrack_limit;
    std::optional<double> time_limit_seconds;
    bool randomized = false;       // random value order and random tie-breaking
    std::uint64_t tie_seed = 0;    // only consulted when randomized
    bool count_all = false;        // exhaust the space, report solution count
};

/// Complete backtracking search maintaining generalized arc consistency
/// over the forbidden-tuple tables after every assignment. Variables are
/// ordered by dom/wdeg where a constraint's weight starts at 1 and
/// increments each time it wipes out a domain; values lexicographically,
/// or uniformly at random when cfg.randomized. Deterministic given
/// (inst, cfg). Counters: nodes = assignments attempted, backtracks =
/// assignments retracted after failure. Limit breaches yield TIMEOUT.
SolveOutcome solve_mac(const Instance& inst, const SearchConfig& cfg = {});

/// Exact satisfying-assignment count by exhaustive enumeration.
/// Refuses instances with d^n > 10^8.
std::pair<Status, long long> brute_force(const Instance& inst);

/// Backtrack counts of `runs` independently seeded randomized searches on
/// the same instance (run i uses sub-seed derive_seed(cfg.tie_seed, i)).
/// Requires cfg.randomized.
std::vector<long long> survival_runs(const Instance& inst, int runs, const SearchConfig& cfg);

/// Domains remaining after establishing GAC at the root (no search).
/// A variable's list is empty iff root propagation wiped it out.
std::vector<std::vector<int>> root_prune(const Instance& inst);

}  // namespace rbcsp
