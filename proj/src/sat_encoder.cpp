#include "rbcsp/sat_encoder.hpp"

#include <cstdlib>
#include <string>

namespace rbcsp {

CnfFormula encode_direct(const Instance& inst, bool amo) {
    validate(inst);
    const int d = inst.d;
    CnfFormula cnf;
    cnf.var_count = inst.n * d;
    auto lit = [d](int var, int val) { return var * d + val + 1; };

    for (int v = 0; v < inst.n; ++v) {
        std::vector<int> alo;
        alo.reserve(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            alo.push_back(lit(v, a));
        cnf.clauses.push_back(std::move(alo));
    }
    if (amo)
        for (int v = 0; v < inst.n; ++v)
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b)
                    cnf.clauses.push_back({-lit(v, a), -lit(v, b)});
    for (const Constraint& c : inst.constraints) {
        const int k = c.arity();
        for (long long t = 0; t < c.tuple_count(); ++t) {
            const auto tup = c.tuple(t);
            std::vector<int> clause;
            clause.reserve(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                clause.push_back(-lit(c.scope[i], tup[i]));
            cnf.clauses.push_back(std::move(clause));
        }
    }
    return cnf;
}

Assignment decode_model(const Instance& inst, const std::vector<int>& model, bool amo) {
    validate(inst);
    const int var_count = inst.n * inst.d;
    std::vector<signed char> truth(static_cast<std::size_t>(var_count), 0);
    for (int literal : model) {
        if (literal == 0 || std::abs(literal) > var_count)
            throw std::invalid_argument("model literal out of range");
        auto& slot = truth[static_cast<std::size_t>(std::abs(literal)) - 1];
        const signed char value = literal > 0 ? 1 : -1;
        if (slot != 0 && slot != value)
            throw std::invalid_argument("model assigns a literal both ways");
        slot = value;
    }
    for (int i = 0; i < var_count; ++i)
        if (truth[i] == 0)
            throw std::invalid_argument("model is not total over the CNF variables");

    Assignment a(static_cast<std::size_t>(inst.n));
    for (int v = 0; v < inst.n; ++v) {
        int chosen = -1;
        for (int val = 0; val < inst.d; ++val) {
            if (truth[static_cast<std::size_t>(v) * inst.d + val] > 0) {
                if (chosen >= 0) {
                    if (amo)
                        throw DecodeError(v, "variable " + std::to_string(v) +
                                                 " has multiple true values");
                    break;  // without amo, keep the smallest
                }
                chosen = val;
            }
        }
        if (chosen < 0)
            throw DecodeError(v, "variable " + std::to_string(v) + " has no true value");
        a[v] = chosen;
    }
    return a;
}

}  // namespace rbcsp
