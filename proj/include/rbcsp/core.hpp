#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbcsp {

enum class Model { RB, RD };

const char* to_string(Model m);

/// Parameters of a random instance class: arity k, variable count n,
/// domain exponent alpha (d = n^alpha), constraint density r (m = r*n*ln n)
/// and tightness p. RB treats p as a proportion of forbidden tuples, RD as
/// an independent per-tuple probability.
struct InstanceParams {
    int k = 2;
    int n = 2;
    double alpha = 1.0;
    double r = 1.0;
    double p = 0.5;
    Model model = Model::RB;
    bool forced = false;
    std::uint64_t seed = 0;

    bool operator==(const InstanceParams&) const = default;
};

/// Thrown when a parameterization falls outside what the models support
/// (e.g. round(n^alpha) < 2).
struct UnsupportedParamsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when forcing is impossible, i.e. a forced RB draw would need all
/// d^k tuples forbidden.
struct InfeasibleForcingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Throws std::invalid_argument / UnsupportedParamsError on bad fields.
void validate(const InstanceParams& params);

struct DerivedDims {
    int d = 0;        // domain size, round-half-up(n^alpha)
    long long m = 0;  // constraint count, round-half-up(r*n*ln n)

    bool operator==(const DerivedDims&) const = default;
};

/// Round-half-up to the nearest integer (x >= 0).
long long round_half_up(double x);

/// A table constraint: sorted scope of k distinct variables plus a list of
/// forbidden value tuples. Tuples are stored flattened with stride k, in
/// ascending mixed-radix code order, component i belonging to scope[i].
struct Constraint {
    std::vector<int> scope;
    std::vector<int> forbidden;

    int arity() const { return static_cast<int>(scope.size()); }
    long long tuple_count() const {
        return scope.empty() ? 0 : static_cast<long long>(forbidden.size()) / arity();
    }
    std::span<const int> tuple(long long i) const {
        return {forbidden.data() + i * arity(), static_cast<std::size_t>(arity())};
    }

    bool operator==(const Constraint&) const = default;
};

/// n variables over the shared domain [0, d), plus m table constraints.
/// Constraints may repeat (scopes are selected with repetition).
struct Instance {
    int n = 0;
    int d = 0;
    std::vector<Constraint> constraints;

    bool operator==(const Instance&) const = default;
};

/// Structural checks: scope strictly increasing in [0,n), values in [0,d),
/// tuples pairwise distinct per constraint. Throws std::invalid_argument.
void validate(const Instance& inst);

/// Total assignment: values[v] in [0, d) for every variable v.
using Assignment = std::vector<int>;

enum class Status { SAT, UNSAT, TIMEOUT };

const char* to_string(Status s);

struct SolveOutcome {
    Status status = Status::TIMEOUT;
    std::optional<Assignment> witness;
    long long nodes = 0;
    long long backtracks = 0;
    long long flips = 0;
    std::optional<long long> solution_count;  // present with count_all
    double elapsed_seconds = 0.0;
};

/// True iff no constraint forbids the projection of `a` onto its scope.
/// Throws std::invalid_argument if `a` is not total over inst's variables.
bool satisfies(const Instance& inst, const Assignment& a);

/// Proportion of positions where a and b disagree, in {0, 1/n, ..., 1}.
double distance(const Assignment& a, const Assignment& b);

/// Mixed-radix code of a value tuple, first component most significant.
std::uint64_t tuple_code(std::span<const int> values, int d);

/// Inverse of tuple_code; writes k digits into out.
void code_tuple(std::uint64_t code, int k, int d, std::span<int> out);

/// d^k with overflow check; throws UnsupportedParamsError above 2^62.
std::uint64_t tuple_space_size(int d, int k);

}  // namespace rbcsp
