#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "rbcsp/core.hpp"
#include "rbcsp/solver_mac.hpp"
#include "rbcsp/solver_tabu.hpp"

namespace rbcsp {

enum class VaryParam { P, N, R, ALPHA };
enum class SolverKind { MAC, TABU };

const char* to_string(VaryParam v);
const char* to_string(SolverKind s);

/// One sweep: hold `base` fixed, vary one parameter over `values`,
/// generate samples_per_point instances per point (sub-seeded from
/// master_seed) and solve each. With filter_unsat and a TABU solver,
/// instances are pre-screened with MAC and only proven-SAT ones enter the
/// statistics. Cost is backtracks for MAC and flips for TABU.
struct SweepSpec {
    InstanceParams base;
    VaryParam vary = VaryParam::P;
    std::vector<double> values;
    int samples_per_point = 50;
    SolverKind solver = SolverKind::MAC;
    std::uint64_t master_seed = 0;
    bool filter_unsat = false;
    SearchConfig mac;
    TabuConfig tabu;
};

struct SweepRecord {
    double value = 0;
    double sat_fraction = 0;  // SAT verdicts / decided (non-timeout) attempts
    double mean_cost = 0;     // over non-timeout attempts
    double median_cost = 0;
    double mean_nodes = 0;    // MAC only; 0 for TABU
    int timeouts = 0;
};

std::vector<SweepRecord> run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::span<const SweepRecord> records, std::ostream& out);

struct ThresholdOptions {
    std::optional<std::pair<double, double>> bracket;  // default: p_cr * [0.5, 1.5]
    SearchConfig mac;
};

/// Experimental tightness threshold: bisection on p until the bracket is
/// narrower than `tolerance`, estimating the sat fraction from `samples`
/// instances per evaluation. The initial bracket must straddle the 0.5
/// crossing; it is widened once before giving up. Requires base.forced
/// = false. Returns the bracket midpoint.
double empirical_threshold(const InstanceParams& base, int samples, double tolerance,
                           const ThresholdOptions& opts = {});

struct GrowthAt {
    enum Kind { THRESHOLD, BELOW, ABOVE } kind = THRESHOLD;
    double value = 0;  // BELOW: epsilon under p_cr; ABOVE: the fixed tightness

    static GrowthAt threshold() { return {THRESHOLD, 0}; }
    static GrowthAt below(double eps) { return {BELOW, eps}; }
    static GrowthAt above(double p) { return {ABOVE, p}; }
};

struct GrowthRecord {
    int n = 0;
    double p = 0;
    double unforced_mean_cost = 0;
    double forced_mean_cost = 0;
    double unforced_mean_nodes = 0;
    double forced_mean_nodes = 0;
    double unforced_sat_fraction = 0;
    int timeouts = 0;
};

/// Paired forced/unforced MAC cost against n at a tightness picked per
/// `at` (THRESHOLD: p_cr; BELOW: p_cr - eps; ABOVE: fixed p).
std::vector<GrowthRecord> hardness_growth(const InstanceParams& base,
                                          std::span<const int> n_values, GrowthAt at,
                                          int samples, const SearchConfig& mac = {});
void write_growth_csv(std::span<const GrowthRecord> records, std::ostream& out);

struct SurvivalResult {
    std::vector<std::pair<long long, double>> curve;  // (x, S(x)), x ascending
    double tail_slope = 0;  // ln S vs ln x least-squares slope over the top decade
    int runs = 0;
};

/// Generate one instance from `base`, run `runs` independently seeded
/// randomized MAC searches, and report the empirical survival function
/// S(x) = fraction of runs needing more than x backtracks.
SurvivalResult survival_experiment(const InstanceParams& base, int runs,
                                   const SearchConfig& mac = {});
void write_survival_csv(const SurvivalResult& result, std::ostream& out);

}  // namespace rbcsp
