#include "rbcsp/core.hpp"

#include <cmath>
#include <set>

namespace rbcsp {

const char* to_string(Model m) {
    return m == Model::RB ? "RB" : "RD";
}

const char* to_string(Status s) {
    switch (s) {
    case Status::SAT: return "SAT";
    case Status::UNSAT: return "UNSAT";
    case Status::TIMEOUT: return "TIMEOUT";
    }
    return "?";
}

long long round_half_up(double x) {
    // llround rounds halves away from zero, which is half-up for x >= 0.
    return std::llround(x);
}

void validate(const InstanceParams& params) {
    if (params.k < 2)
        throw std::invalid_argument("k must be >= 2");
    if (params.n < params.k)
        throw std::invalid_argument("n must be >= k");
    if (!(params.alpha > 0))
        throw std::invalid_argument("alpha must be positive");
    if (!(params.r > 0))
        throw std::invalid_argument("r must be positive");
    if (!(params.p > 0 && params.p < 1))
        throw std::invalid_argument("p must lie in (0,1)");
    if (round_half_up(std::pow(static_cast<double>(params.n), params.alpha)) < 2)
        throw UnsupportedParamsError("round(n^alpha) < 2: domain would be trivial");
}

void validate(const Instance& inst) {
    if (inst.n < 1 || inst.d < 1)
        throw std::invalid_argument("instance needs n >= 1 and d >= 1");
    for (std::size_t ci = 0; ci < inst.constraints.size(); ++ci) {
        const Constraint& c = inst.constraints[ci];
        const std::string where = "constraint " + std::to_string(ci);
        if (c.scope.empty())
            throw std::invalid_argument(where + ": empty scope");
        for (std::size_t i = 0; i < c.scope.size(); ++i) {
            if (c.scope[i] < 0 || c.scope[i] >= inst.n)
                throw std::invalid_argument(where + ": scope variable out of range");
            if (i > 0 && c.scope[i] <= c.scope[i - 1])
                throw std::invalid_argument(where + ": scope not strictly increasing");
        }
        const int k = c.arity();
        if (c.forbidden.size() % k != 0)
            throw std::invalid_argument(where + ": forbidden list not a multiple of arity");
        std::set<std::uint64_t> seen;
        for (long long t = 0; t < c.tuple_count(); ++t) {
            auto tup = c.tuple(t);
            for (int v : tup)
                if (v < 0 || v >= inst.d)
                    throw std::invalid_argument(where + ": tuple value out of range");
            if (!seen.insert(tuple_code(tup, inst.d)).second)
                throw std::invalid_argument(where + ": duplicate forbidden tuple");
        }
    }
}

bool satisfies(const Instance& inst, const Assignment& a) {
    if (static_cast<int>(a.size()) != inst.n)
        throw std::invalid_argument("assignment length does not match instance");
    for (int v : a)
        if (v < 0 || v >= inst.d)
            throw std::invalid_argument("assignment value out of domain");
    std::vector<int> proj;
    for (const Constraint& c : inst.constraints) {
        const int k = c.arity();
        proj.resize(k);
        for (int i = 0; i < k; ++i)
            proj[i] = a[c.scope[i]];
        for (long long t = 0; t < c.tuple_count(); ++t) {
            auto tup = c.tuple(t);
            bool equal = true;
            for (int i = 0; i < k; ++i) {
                if (tup[i] != proj[i]) {
                    equal = false;
                    break;
                }
            }
            if (equal)
                return false;
        }
    }
    return true;
}

double distance(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("assignments differ in length");
    if (a.empty())
        throw std::invalid_argument("assignments are empty");
    long long diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        diff += a[i] != b[i];
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

std::uint64_t tuple_code(std::span<const int> values, int d) {
    std::uint64_t code = 0;
    for (int v : values)
        code = code * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(v);
    return code;
}

void code_tuple(std::uint64_t code, int k, int d, std::span<int> out) {
    for (int i = k - 1; i >= 0; --i) {
        out[i] = static_cast<int>(code % d);
        code /= d;
    }
}

std::uint64_t tuple_space_size(int d, int k) {
    std::uint64_t size = 1;
    const std::uint64_t cap = std::uint64_t{1} << 62;
    for (int i = 0; i < k; ++i) {
        if (size > cap / static_cast<std::uint64_t>(d))
            throw UnsupportedParamsError("d^k exceeds 2^62");
        size *= static_cast<std::uint64_t>(d);
    }
    return size;
}

}  // namespace rbcsp
