#include "rbcsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace rbcsp {

std::string format_double(double x, int significant) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general,
                                   significant);
    return std::string(buf, res.ptr);
}

std::string format_double_exact(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

long long parse_int(const std::string& tok, int line, const char* what) {
    long long value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("expected integer for ") + what + ", got '" + tok +
                                   "'");
    return value;
}

std::uint64_t parse_u64(const std::string& tok, int line, const char* what) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("expected unsigned integer for ") + what + ", got '" +
                                   tok + "'");
    return value;
}

double parse_real(const std::string& tok, int line, const char* what) {
    double value = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("expected real for ") + what + ", got '" + tok + "'");
    return value;
}

// Reads lines, tracks the 1-based line number, skips blank lines.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            tokens = split_ws(line);
            if (!tokens.empty())
                return true;
        }
        return false;
    }

    int line() const { return line_; }

private:
    std::istream& in_;
    int line_ = 0;
};

std::string params_meta_line(const InstanceParams& p) {
    std::string s = "meta params k=" + std::to_string(p.k) + " n=" + std::to_string(p.n) +
                    " alpha=" + format_double_exact(p.alpha) + " r=" + format_double_exact(p.r) +
                    " p=" + format_double_exact(p.p) + " model=" + to_string(p.model) +
                    " forced=" + (p.forced ? std::string("1") : std::string("0")) +
                    " seed=" + std::to_string(p.seed);
    return s;
}

InstanceParams parse_params_meta(const std::vector<std::string>& tokens, int line) {
    InstanceParams p;
    std::set<std::string> seen;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "meta params entries must be key=value");
        const std::string key = tokens[i].substr(0, eq);
        const std::string val = tokens[i].substr(eq + 1);
        if (!seen.insert(key).second)
            throw ParseError(line, "duplicate meta params key '" + key + "'");
        if (key == "k")
            p.k = static_cast<int>(parse_int(val, line, "k"));
        else if (key == "n")
            p.n = static_cast<int>(parse_int(val, line, "n"));
        else if (key == "alpha")
            p.alpha = parse_real(val, line, "alpha");
        else if (key == "r")
            p.r = parse_real(val, line, "r");
        else if (key == "p")
            p.p = parse_real(val, line, "p");
        else if (key == "model") {
            if (val == "RB")
                p.model = Model::RB;
            else if (val == "RD")
                p.model = Model::RD;
            else
                throw ParseError(line, "model must be RB or RD");
        } else if (key == "forced")
            p.forced = parse_int(val, line, "forced") != 0;
        else if (key == "seed")
            p.seed = parse_u64(val, line, "seed");
        else
            throw ParseError(line, "unknown meta params key '" + key + "'");
    }
    const char* required[] = {"k", "n", "alpha", "r", "p", "model", "forced", "seed"};
    for (const char* key : required)
        if (!seen.count(key))
            throw ParseError(line, std::string("meta params missing key '") + key + "'");
    return p;
}

InstanceParams reconstruct_params(const Instance& inst, int k, long long m) {
    InstanceParams p;
    p.k = k;
    p.n = inst.n;
    p.model = Model::RB;
    p.forced = false;
    p.seed = 0;
    if (inst.n < 2)
        throw ParseError(0, "cannot reconstruct parameters for n < 2; add a meta block");
    p.alpha = std::log(static_cast<double>(inst.d)) / std::log(static_cast<double>(inst.n));
    p.r = static_cast<double>(m) /
          (static_cast<double>(inst.n) * std::log(static_cast<double>(inst.n)));
    if (p.r <= 0)
        p.r = 1e-9;
    double forbidden = 0;
    double total = 0;
    for (const Constraint& c : inst.constraints) {
        forbidden += static_cast<double>(c.tuple_count());
        total += static_cast<double>(tuple_space_size(inst.d, c.arity()));
    }
    const double fraction = total > 0 ? forbidden / total : 0.5;
    p.p = std::clamp(fraction, 1e-9, 1.0 - 1e-9);
    return p;
}

}  // namespace

void write_instance(const GeneratedInstance& gi, std::ostream& out) {
    const Instance& inst = gi.instance;
    out << "RBCSP 1\n";
    out << "n " << std::to_string(inst.n) << " d " << std::to_string(inst.d) << " k "
        << std::to_string(gi.params.k) << " m " << std::to_string(inst.constraints.size())
        << "\n";
    out << params_meta_line(gi.params) << "\n";
    if (gi.forced_solution) {
        out << "meta solution";
        for (int v : *gi.forced_solution)
            out << ' ' << std::to_string(v);
        out << "\n";
    }
    for (const Constraint& c : inst.constraints) {
        out << 'c';
        for (int v : c.scope)
            out << ' ' << std::to_string(v);
        out << ' ' << std::to_string(c.tuple_count()) << "\n";
        for (long long t = 0; t < c.tuple_count(); ++t) {
            const auto tup = c.tuple(t);
            for (int i = 0; i < c.arity(); ++i)
                out << (i ? " " : "") << std::to_string(tup[i]);
            out << "\n";
        }
    }
}

void write_instance(const GeneratedInstance& gi, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_instance(gi, out);
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

GeneratedInstance read_instance(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> tok;

    if (!reader.next(tok))
        throw ParseError(1, "empty file");
    if (tok.size() != 2 || tok[0] != "RBCSP")
        throw ParseError(reader.line(), "expected header 'RBCSP 1'");
    if (parse_int(tok[1], reader.line(), "format version") != 1)
        throw ParseError(reader.line(), "unsupported format version '" + tok[1] + "'");

    if (!reader.next(tok))
        throw ParseError(reader.line() + 1, "missing dimension line");
    if (tok.size() != 8 || tok[0] != "n" || tok[2] != "d" || tok[4] != "k" || tok[6] != "m")
        throw ParseError(reader.line(), "expected 'n <n> d <d> k <k> m <m>'");
    const int dim_line = reader.line();
    const int n = static_cast<int>(parse_int(tok[1], dim_line, "n"));
    const int d = static_cast<int>(parse_int(tok[3], dim_line, "d"));
    const int k = static_cast<int>(parse_int(tok[5], dim_line, "k"));
    const long long m = parse_int(tok[7], dim_line, "m");
    if (n < 1 || d < 1 || k < 1 || m < 0)
        throw ParseError(dim_line, "dimensions out of range");

    std::optional<InstanceParams> params;
    std::optional<Assignment> solution;
    bool more = reader.next(tok);
    while (more && tok[0] == "meta") {
        if (tok.size() < 2)
            throw ParseError(reader.line(), "bare 'meta' line");
        if (tok[1] == "params") {
            if (params)
                throw ParseError(reader.line(), "duplicate meta params line");
            params = parse_params_meta(tok, reader.line());
            if (params->k != k || params->n != n)
                throw ParseError(reader.line(), "meta params disagree with the dimension line");
        } else if (tok[1] == "solution") {
            if (!params)
                throw ParseError(reader.line(), "meta solution requires a meta params line");
            if (!params->forced)
                throw ParseError(reader.line(), "meta solution on an unforced instance");
            if (static_cast<int>(tok.size()) - 2 != n)
                throw ParseError(reader.line(), "meta solution must list n values");
            Assignment a(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                a[i] = static_cast<int>(parse_int(tok[i + 2], reader.line(), "solution value"));
                if (a[i] < 0 || a[i] >= d)
                    throw ParseError(reader.line(), "solution value out of domain");
            }
            solution = std::move(a);
        } else {
            throw ParseError(reader.line(), "unknown meta line '" + tok[1] + "'");
        }
        more = reader.next(tok);
    }

    Instance inst;
    inst.n = n;
    inst.d = d;
    inst.constraints.reserve(static_cast<std::size_t>(m));
    for (long long ci = 0; ci < m; ++ci) {
        if (!more)
            throw ParseError(reader.line() + 1,
                             "expected constraint " + std::to_string(ci) + " of " +
                                 std::to_string(m));
        if (tok[0] != "c")
            throw ParseError(reader.line(), "expected a constraint line starting with 'c'");
        if (static_cast<int>(tok.size()) != k + 2)
            throw ParseError(reader.line(), "constraint line must list k variables and a count");
        Constraint c;
        c.scope.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            c.scope[i] =
                static_cast<int>(parse_int(tok[i + 1], reader.line(), "scope variable"));
            if (c.scope[i] < 0 || c.scope[i] >= n)
                throw ParseError(reader.line(), "scope variable out of range");
            if (i > 0 && c.scope[i] <= c.scope[i - 1])
                throw ParseError(reader.line(), "scope must be strictly increasing");
        }
        const long long t = parse_int(tok[k + 1], reader.line(), "tuple count");
        if (t < 0)
            throw ParseError(reader.line(), "negative tuple count");
        c.forbidden.reserve(static_cast<std::size_t>(t * k));
        std::set<std::uint64_t> seen;
        for (long long ti = 0; ti < t; ++ti) {
            if (!reader.next(tok))
                throw ParseError(reader.line() + 1,
                                 "constraint declares " + std::to_string(t) + " tuples but file "
                                 "ends after " + std::to_string(ti));
            if (tok[0] == "c")
                throw ParseError(reader.line(),
                                 "constraint declares " + std::to_string(t) + " tuples but only " +
                                     std::to_string(ti) + " follow");
            if (static_cast<int>(tok.size()) != k)
                throw ParseError(reader.line(), "tuple line must list k values");
            std::vector<int> tup(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                tup[i] = static_cast<int>(parse_int(tok[i], reader.line(), "tuple value"));
                if (tup[i] < 0 || tup[i] >= d)
                    throw ParseError(reader.line(), "tuple value out of domain");
            }
            if (!seen.insert(tuple_code(tup, d)).second)
                throw ParseError(reader.line(), "duplicate forbidden tuple");
            c.forbidden.insert(c.forbidden.end(), tup.begin(), tup.end());
        }
        inst.constraints.push_back(std::move(c));
        more = reader.next(tok);
    }
    if (more)
        throw ParseError(reader.line(), "unexpected content after the last constraint");

    GeneratedInstance gi;
    gi.instance = std::move(inst);
    if (params) {
        validate(*params);
        gi.params = *params;
        gi.dims = DerivedDims{d, m};
        if (params->forced && !solution)
            throw ParseError(dim_line, "forced=1 but no meta solution line");
    } else {
        gi.params = reconstruct_params(gi.instance, k, m);
        validate(gi.params);
        gi.dims = DerivedDims{d, m};
    }
    gi.forced_solution = std::move(solution);
    if (gi.forced_solution && !satisfies(gi.instance, *gi.forced_solution))
        throw ParseError(dim_line, "forced solution does not satisfy the instance");
    validate(gi.instance);
    return gi;
}

GeneratedInstance read_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return read_instance(in);
}

void write_dimacs(const CnfFormula& cnf, const std::vector<std::string>& comments,
                  std::ostream& out) {
    for (const std::string& c : comments)
        out << "c " << c << "\n";
    out << "p cnf " << std::to_string(cnf.var_count) << ' '
        << std::to_string(cnf.clauses.size()) << "\n";
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause)
            out << std::to_string(lit) << ' ';
        out << "0\n";
    }
}

DimacsFile read_dimacs(std::istream& in) {
    DimacsFile file;
    bool have_header = false;
    long long declared_clauses = 0;
    std::vector<int> clause;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty())
            continue;
        if (tokens[0] == "c") {
            std::string comment;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                if (i > 1)
                    comment += ' ';
                comment += tokens[i];
            }
            file.comments.push_back(std::move(comment));
            continue;
        }
        if (tokens[0] == "p") {
            if (have_header)
                throw ParseError(line_no, "duplicate problem line");
            if (tokens.size() != 4 || tokens[1] != "cnf")
                throw ParseError(line_no, "expected 'p cnf <vars> <clauses>'");
            file.formula.var_count =
                static_cast<int>(parse_int(tokens[2], line_no, "variable count"));
            declared_clauses = parse_int(tokens[3], line_no, "clause count");
            if (file.formula.var_count < 0 || declared_clauses < 0)
                throw ParseError(line_no, "negative counts in problem line");
            have_header = true;
            continue;
        }
        if (!have_header)
            throw ParseError(line_no, "clause data before the problem line");
        for (const std::string& tok : tokens) {
            const int lit = static_cast<int>(parse_int(tok, line_no, "literal"));
            if (lit == 0) {
                file.formula.clauses.push_back(clause);
                clause.clear();
            } else {
                if (std::abs(lit) > file.formula.var_count)
                    throw ParseError(line_no, "literal exceeds the declared variable count");
                clause.push_back(lit);
            }
        }
    }
    if (!have_header)
        throw ParseError(line_no ? line_no : 1, "missing problem line");
    if (!clause.empty())
        throw ParseError(line_no, "last clause is not terminated by 0");
    if (static_cast<long long>(file.formula.clauses.size()) != declared_clauses)
        throw ParseError(line_no, "clause count disagrees with the problem line");
    return file;
}

std::vector<std::string> dimacs_comments(const GeneratedInstance& gi) {
    std::vector<std::string> comments;
    std::string params = params_meta_line(gi.params);
    comments.push_back(params.substr(5));  // drop the "meta " prefix
    if (gi.forced_solution) {
        std::string sol = "solution";
        for (int v : *gi.forced_solution)
            sol += ' ' + std::to_string(v);
        comments.push_back(std::move(sol));
    }
    return comments;
}

}  // namespace rbcsp
