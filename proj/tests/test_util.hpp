#pragma once

// Test-only oracles, deliberately independent of the library's solving and
// checking code paths.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "rbcsp/core.hpp"
#include "rbcsp/sat_encoder.hpp"

namespace testutil {

// Reference satisfaction check: per constraint, linear scan over the
// forbidden tuples comparing value by value.
inline bool naive_satisfies(const rbcsp::Instance& inst, const rbcsp::Assignment& a) {
    for (const rbcsp::Constraint& c : inst.constraints) {
        const int k = c.arity();
        for (long long t = 0; t < c.tuple_count(); ++t) {
            bool hit = true;
            for (int i = 0; i < k; ++i)
                if (a[c.scope[i]] != c.forbidden[t * k + i]) {
                    hit = false;
                    break;
                }
            if (hit)
                return false;
        }
    }
    return true;
}

// Exact CNF model counter: semantic DPLL that branches on the first
// unassigned literal of the first not-yet-satisfied clause and credits
// 2^(free variables) once every clause is satisfied.
class DpllCounter {
public:
    explicit DpllCounter(const rbcsp::CnfFormula& cnf)
        : clauses_(cnf.clauses), assign_(static_cast<std::size_t>(cnf.var_count), 0) {}

    long long count() { return walk(); }

private:
    long long walk() {
        int branch_lit = 0;
        bool all_satisfied = true;
        for (const auto& clause : clauses_) {
            bool satisfied = false;
            int unassigned = 0;
            for (int lit : clause) {
                const int value = assign_[std::abs(lit) - 1];
                if (value == (lit > 0 ? 1 : -1)) {
                    satisfied = true;
                    break;
                }
                if (value == 0 && unassigned == 0)
                    unassigned = lit;
            }
            if (satisfied)
                continue;
            if (unassigned == 0)
                return 0;  // conflict
            all_satisfied = false;
            if (branch_lit == 0)
                branch_lit = unassigned;
        }
        if (all_satisfied) {
            long long free = 0;
            for (signed char v : assign_)
                free += v == 0;
            return 1LL << free;
        }
        long long total = 0;
        const int var = std::abs(branch_lit) - 1;
        for (int phase : {1, -1}) {
            assign_[var] = static_cast<signed char>(phase);
            total += walk();
        }
        assign_[var] = 0;
        return total;
    }

    const std::vector<std::vector<int>>& clauses_;
    std::vector<signed char> assign_;
};

inline long long count_cnf_models(const rbcsp::CnfFormula& cnf) {
    return DpllCounter(cnf).count();
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double mean_of(const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

// Sample standard deviation.
inline double stddev_of(const std::vector<double>& xs) {
    const double mu = mean_of(xs);
    double acc = 0;
    for (double x : xs)
        acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace testutil
