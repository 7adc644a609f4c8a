#pragma once

#include "rbcsp/core.hpp"

namespace rbcsp {

struct CnfFormula {
    int var_count = 0;
    std::vector<std::vector<int>> clauses;

    bool operator==(const CnfFormula&) const = default;
};

/// Thrown by decode_model; names the offending CSP variable.
struct DecodeError : std::runtime_error {
    int variable;
    DecodeError(int var, const std::string& msg) : std::runtime_error(msg), variable(var) {}
};

/// Direct encoding. Proposition x_{v,a} is CNF variable v*d + a + 1.
/// Clause order is canonical: per variable one at-least-one clause
/// (variables ascending), then, when amo, all pairwise at-most-one
/// clauses (variables ascending, value pairs lexicographic), then one
/// conflict clause per forbidden tuple (constraints in stored order,
/// tuples in stored order).
CnfFormula encode_direct(const Instance& inst, bool amo = true);

/// Read an assignment off a CNF model (a list of nonzero literals
/// covering every CNF variable exactly once). Errors if some CSP variable
/// has no true value, or more than one when amo is set; without amo the
/// smallest true value is taken.
Assignment decode_model(const Instance& inst, const std::vector<int>& model, bool amo = true);

}  // namespace rbcsp
