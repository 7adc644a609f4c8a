#include "rbcsp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbcsp {

double p_critical(double alpha, double r) {
    if (!(alpha > 0) || !(r > 0))
        throw std::invalid_argument("p_critical needs alpha > 0 and r > 0");
    return 1.0 - std::exp(-alpha / r);
}

double r_critical(double alpha, double p) {
    if (!(alpha > 0) || !(p > 0 && p < 1))
        throw std::invalid_argument("r_critical needs alpha > 0 and p in (0,1)");
    return -alpha / std::log1p(-p);
}

ThresholdReport check_conditions(const InstanceParams& params) {
    validate(params);
    ThresholdReport rep;
    rep.p_cr = p_critical(params.alpha, params.r);
    rep.r_cr = r_critical(params.alpha, params.p);
    const double k = static_cast<double>(params.k);
    const double bound = (k - 1.0) / k;
    rep.conditions_thm1 = {params.k >= 2, params.alpha > 1.0 / k, params.p <= bound};
    rep.conditions_thm2 = {params.k >= 2, params.alpha > 1.0 / k, rep.p_cr <= bound};
    // p_cr <= (k-1)/k  <=>  e^(-alpha/r) >= 1/k  <=>  k*e^(-alpha/r) >= 1
    rep.equivalence_holds =
        (rep.p_cr <= bound) == (k * std::exp(-params.alpha / params.r) >= 1.0);
    return rep;
}

double expected_solutions(const InstanceParams& params, const DerivedDims& dims) {
    validate(params);
    return params.n * std::log(static_cast<double>(dims.d)) +
           static_cast<double>(dims.m) * std::log1p(-params.p);
}

double ln_binomial(long long n, long long k) {
    if (k < 0 || k > n)
        return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n)
        return 0.0;
    if (n <= 64) {
        // Exact: C(64,32) < 2^63, and the running product stays integral.
        unsigned long long c = 1;
        for (long long i = 1; i <= k; ++i)
            c = c * static_cast<unsigned long long>(n - k + i) /
                static_cast<unsigned long long>(i);
        return std::log(static_cast<double>(c));
    }
    return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(n - k + 1));
}

double forced_expected_solutions(const InstanceParams& params, const DerivedDims& dims) {
    validate(params);
    const int n = params.n;
    const int k = params.k;
    const double p = params.p;
    const double ln_dm1 = std::log(static_cast<double>(dims.d - 1));
    const double m = static_cast<double>(dims.m);

    std::vector<double> ln_terms;
    ln_terms.reserve(static_cast<std::size_t>(n) + 1);
    for (int a = 0; a <= n; ++a) {
        // C(n-a,k)/C(n,k) as a product of ratios; zero once n-a < k.
        double scope_ratio = 0.0;
        if (n - a >= k) {
            scope_ratio = 1.0;
            for (int i = 0; i < k; ++i)
                scope_ratio *= static_cast<double>(n - a - i) / static_cast<double>(n - i);
        }
        const double q = (1.0 - p) + p * scope_ratio;
        double ln_term = ln_binomial(n, a) + m * std::log(q);
        if (a > 0)
            ln_term += a * ln_dm1;  // (d-1)^a; d == 2 contributes 0 either way
        ln_terms.push_back(ln_term);
    }

    const double peak = *std::max_element(ln_terms.begin(), ln_terms.end());
    double acc = 0.0;
    for (double lt : ln_terms)
        acc += std::exp(lt - peak);
    return peak + std::log(acc);
}

DistanceProfile distance_profile(const InstanceParams& params, ProfileVariant variant,
                                 int grid_size) {
    validate(params);
    if (grid_size < 3)
        throw std::invalid_argument("grid_size must be >= 3");
    DistanceProfile prof;
    prof.variant = variant;
    prof.grid.reserve(static_cast<std::size_t>(grid_size));
    const double ln_unforced = params.r * std::log1p(-params.p);
    for (int i = 0; i < grid_size; ++i) {
        const double delta = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        double exponent;
        if (variant == ProfileVariant::FORCED) {
            const double survive = 1.0 - params.p + params.p * std::pow(1.0 - delta, params.k);
            exponent = params.r * std::log(survive) + params.alpha * delta;
        } else {
            exponent = ln_unforced + params.alpha * delta;
        }
        prof.grid.emplace_back(delta, exponent);
    }
    return prof;
}

}  // namespace rbcsp
