#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rbcsp/generator.hpp"
#include "rbcsp/sat_encoder.hpp"

namespace rbcsp {

/// Parse failure with the 1-based line it was detected on.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_number, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
          line(line_number) {}
};

/// Instance text format:
///
///   RBCSP 1
///   n <n> d <d> k <k> m <m>
///   meta params k=<k> n=<n> alpha=<a> r=<r> p=<p> model=<RB|RD> forced=<0|1> seed=<s>
///   meta solution <v0> ... <vn-1>
///   c <v1> ... <vk> <t>
///   <x1> ... <xk>            (t tuple lines per constraint)
///
/// The meta block is optional (the solution line only with forced
/// instances); everything else is mandatory. All indices 0-based.
/// Reals are written shortest-round-trip, so read(write(x)) == x exactly.
void write_instance(const GeneratedInstance& gi, std::ostream& out);
void write_instance(const GeneratedInstance& gi, const std::filesystem::path& path);

/// Round-trip inverse of write_instance. Files without a meta block get
/// params reconstructed from the header (alpha = ln d/ln n,
/// r = m/(n ln n), p = pooled forbidden fraction, seed = 0).
GeneratedInstance read_instance(std::istream& in);
GeneratedInstance read_instance(const std::filesystem::path& path);

/// DIMACS CNF. Comment lines carry generator metadata when present.
void write_dimacs(const CnfFormula& cnf, const std::vector<std::string>& comments,
                  std::ostream& out);

struct DimacsFile {
    CnfFormula formula;
    std::vector<std::string> comments;
};

DimacsFile read_dimacs(std::istream& in);

/// Metadata comment lines (params, seed, forced solution) for DIMACS output.
std::vector<std::string> dimacs_comments(const GeneratedInstance& gi);

/// Locale-independent float formatting: fixed significant digits for CSV.
std::string format_double(double x, int significant = 6);
/// Shortest representation that parses back to the same double.
std::string format_double_exact(double x);

}  // namespace rbcsp
