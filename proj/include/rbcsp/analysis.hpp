#pragma once

#include <array>
#include <utility>
#include <vector>

#include "rbcsp/core.hpp"

namespace rbcsp {

/// Threshold locations plus the applicability conditions of the two phase
/// transition theorems. conditions_thm1 = {k >= 2, alpha > 1/k,
/// p <= (k-1)/k}; conditions_thm2 swaps the last entry for
/// p_cr <= (k-1)/k. equivalence_holds reports whether
/// p_cr <= (k-1)/k evaluated the same as k*e^(-alpha/r) >= 1.
struct ThresholdReport {
    double p_cr = 0.0;
    double r_cr = 0.0;
    std::array<bool, 3> conditions_thm1{};
    std::array<bool, 3> conditions_thm2{};
    bool equivalence_holds = false;
};

/// p_cr = 1 - e^(-alpha/r); the tightness threshold for fixed density.
double p_critical(double alpha, double r);

/// r_cr = -alpha / ln(1-p); the density threshold for fixed tightness.
double r_critical(double alpha, double p);

ThresholdReport check_conditions(const InstanceParams& params);

/// ln E[N] = n*ln d + m*ln(1-p): expected solution count of an unforced
/// instance (exact for RD; for RB an approximation since the per-constraint
/// survival probability is 1 - round(p*d^k)/d^k rather than 1-p).
double expected_solutions(const InstanceParams& params, const DerivedDims& dims);

/// ln E_f[N] = ln sum_{a=0}^{n} C(n,a) (d-1)^a q_a^m with
/// q_a = C(n-a,k)/C(n,k) + (1-p)(1 - C(n-a,k)/C(n,k)): expected solution
/// count of a forced instance, exact under the RD independence model.
/// Computed in log space (log-sum-exp), overflow-free.
double forced_expected_solutions(const InstanceParams& params, const DerivedDims& dims);

enum class ProfileVariant { FORCED, UNFORCED };

/// Per-delta exponents of the expected solution count at distance delta
/// from a reference assignment, scaled by n*ln n:
///   FORCED:   r*ln(1 - p + p*(1-delta)^k) + alpha*delta
///   UNFORCED: r*ln(1-p) + alpha*delta
struct DistanceProfile {
    ProfileVariant variant = ProfileVariant::UNFORCED;
    std::vector<std::pair<double, double>> grid;  // (delta, exponent), deltas increasing
};

/// Uniform grid of grid_size points covering [0,1] inclusive. With
/// grid_size = n+1 the grid hits exactly the feasible distances a/n.
DistanceProfile distance_profile(const InstanceParams& params, ProfileVariant variant,
                                 int grid_size);

/// ln C(n,k); exact 64-bit arithmetic for n <= 64, log-gamma beyond.
double ln_binomial(long long n, long long k);

}  // namespace rbcsp
