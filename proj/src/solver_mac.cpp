#include "rbcsp/solver_mac.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rbcsp/rng.hpp"

namespace rbcsp {

namespace {

constexpr std::uint64_t kNoResidue = ~std::uint64_t{0};

// Forbidden-tuple membership: bitset over the code space when it is small,
// binary search over sorted codes otherwise.
struct TupleSet {
    std::uint64_t space = 0;
    std::vector<std::uint64_t> bits;
    std::vector<std::uint64_t> sorted;

    TupleSet() = default;
    TupleSet(const Constraint& c, int d) {
        space = tuple_space_size(d, c.arity());
        std::vector<std::uint64_t> codes;
        codes.reserve(static_cast<std::size_t>(c.tuple_count()));
        for (long long t = 0; t < c.tuple_count(); ++t)
            codes.push_back(tuple_code(c.tuple(t), d));
        if (space <= (std::uint64_t{1} << 22)) {
            bits.assign((space + 63) / 64, 0);
            for (std::uint64_t code : codes)
                bits[code >> 6] |= std::uint64_t{1} << (code & 63);
        } else {
            std::sort(codes.begin(), codes.end());
            sorted = std::move(codes);
        }
    }

    bool contains(std::uint64_t code) const {
        if (!bits.empty())
            return (bits[code >> 6] >> (code & 63)) & 1;
        return std::binary_search(sorted.begin(), sorted.end(), code);
    }
};

class MacSearch {
public:
    MacSearch(const Instance& inst, const SearchConfig& cfg)
        : inst_(inst), cfg_(cfg), n_(inst.n), d_(inst.d), rng_(cfg.tie_seed) {
        validate(inst);
        build();
    }

    SolveOutcome run() {
        const auto t0 = std::chrono::steady_clock::now();
        start_ = t0;

        enqueue_all();
        Walk walk = Walk::Exhausted;
        if (propagate())
            walk = descend();

        SolveOutcome out;
        out.nodes = nodes_;
        out.backtracks = backtracks_;
        if (timed_out_) {
            out.status = Status::TIMEOUT;
        } else if (cfg_.count_all) {
            out.status = solutions_ > 0 ? Status::SAT : Status::UNSAT;
            out.solution_count = solutions_;
            if (solutions_ > 0)
                out.witness = witness_;
        } else if (walk == Walk::Found) {
            out.status = Status::SAT;
            out.witness = witness_;
        } else {
            out.status = Status::UNSAT;
        }
        if (out.status == Status::SAT && !satisfies(inst_, *out.witness))
            throw std::logic_error("internal error: unsound witness");
        out.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    std::vector<std::vector<int>> prune_root() {
        enqueue_all();
        propagate();
        std::vector<std::vector<int>> domains(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v)
            for (int val = 0; val < d_; ++val)
                if (present(v, val))
                    domains[v].push_back(val);
        return domains;
    }

private:
    enum class Walk { Found, Exhausted, Aborted };

    struct Table {
        std::vector<int> scope;
        TupleSet tuples;
        std::vector<std::vector<std::uint64_t>> residue;  // [pos][val]
        std::uint64_t weight = 1;
    };

    void build() {
        present_.assign(static_cast<std::size_t>(n_) * d_, 1);
        dom_size_.assign(n_, d_);
        assigned_.assign(n_, 0);
        current_.assign(n_, -1);
        var_constraints_.assign(n_, {});
        tables_.reserve(inst_.constraints.size());
        for (const Constraint& c : inst_.constraints) {
            Table t;
            t.scope = c.scope;
            t.tuples = TupleSet(c, d_);
            t.residue.assign(c.scope.size(),
                             std::vector<std::uint64_t>(static_cast<std::size_t>(d_), kNoResidue));
            const int ci = static_cast<int>(tables_.size());
            for (int v : c.scope)
                var_constraints_[v].push_back(ci);
            tables_.push_back(std::move(t));
        }
        in_queue_.assign(tables_.size(), 0);
        std::size_t max_arity = 1;
        for (const Table& t : tables_)
            max_arity = std::max(max_arity, t.scope.size());
        vals_.resize(max_arity);
    }

    bool present(int var, int val) const {
        return present_[static_cast<std::size_t>(var) * d_ + val] != 0;
    }

    int first_present(int var) const {
        for (int val = 0; val < d_; ++val)
            if (present(var, val))
                return val;
        return -1;
    }

    int next_present(int var, int after) const {
        for (int val = after + 1; val < d_; ++val)
            if (present(var, val))
                return val;
        return -1;
    }

    void remove_value(int var, int val) {
        present_[static_cast<std::size_t>(var) * d_ + val] = 0;
        --dom_size_[var];
        trail_.emplace_back(var, val);
    }

    void restore(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [var, val] = trail_.back();
            trail_.pop_back();
            present_[static_cast<std::size_t>(var) * d_ + val] = 1;
            ++dom_size_[var];
        }
    }

    void enqueue_var(int var) {
        for (int ci : var_constraints_[var])
            if (!in_queue_[ci]) {
                in_queue_[ci] = 1;
                queue_.push_back(ci);
            }
    }

    void enqueue_all() {
        for (std::size_t ci = 0; ci < tables_.size(); ++ci)
            if (!in_queue_[ci]) {
                in_queue_[ci] = 1;
                queue_.push_back(static_cast<int>(ci));
            }
    }

    void clear_queue() {
        for (int ci : queue_)
            in_queue_[ci] = 0;
        queue_.clear();
    }

    bool residue_valid(const Table& t, std::uint64_t code) const {
        const int k = static_cast<int>(t.scope.size());
        for (int i = k - 1; i >= 0; --i) {
            const int val = static_cast<int>(code % d_);
            code /= d_;
            if (!present(t.scope[i], val))
                return false;
        }
        return true;
    }

    // Support = a tuple over the current domains, with position `pos` fixed
    // to `val`, that the table does not forbid. Residues cache the last hit.
    bool has_support(Table& t, int pos, int val) {
        const std::uint64_t res = t.residue[pos][val];
        if (res != kNoResidue && residue_valid(t, res))
            return true;
        const int k = static_cast<int>(t.scope.size());
        vals_[pos] = val;
        for (int j = 0; j < k; ++j)
            if (j != pos)
                vals_[j] = first_present(t.scope[j]);
        for (;;) {
            std::uint64_t code = 0;
            for (int j = 0; j < k; ++j)
                code = code * static_cast<std::uint64_t>(d_) +
                       static_cast<std::uint64_t>(vals_[j]);
            if (!t.tuples.contains(code)) {
                t.residue[pos][val] = code;
                return true;
            }
            int j = k - 1;
            for (;;) {
                if (j == pos)
                    --j;
                if (j < 0)
                    return false;
                const int nxt = next_present(t.scope[j], vals_[j]);
                if (nxt >= 0) {
                    vals_[j] = nxt;
                    break;
                }
                vals_[j] = first_present(t.scope[j]);
                --j;
            }
        }
    }

    bool revise(int ci) {
        Table& t = tables_[ci];
        const int k = static_cast<int>(t.scope.size());
        for (int pos = 0; pos < k; ++pos) {
            const int var = t.scope[pos];
            bool removed = false;
            for (int val = 0; val < d_; ++val) {
                if (!present(var, val))
                    continue;
                if (has_support(t, pos, val))
                    continue;
                remove_value(var, val);
                removed = true;
                if (dom_size_[var] == 0) {
                    ++t.weight;  // this constraint caused the wipeout
                    clear_queue();
                    return false;
                }
            }
            if (removed)
                enqueue_var(var);
        }
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            const int ci = queue_.back();
            queue_.pop_back();
            in_queue_[ci] = 0;
            if (!revise(ci))
                return false;
        }
        return true;
    }

    void assign(int var, int val) {
        assigned_[var] = 1;
        current_[var] = val;
        ++assigned_count_;
        bool removed = false;
        for (int w = 0; w < d_; ++w)
            if (w != val && present(var, w)) {
                remove_value(var, w);
                removed = true;
            }
        if (removed)
            enqueue_var(var);
    }

    void unassign(int var) {
        assigned_[var] = 0;
        current_[var] = -1;
        --assigned_count_;
    }

    // dom/wdeg: minimize dom(v) / sum of weights of v's constraints that
    // still involve a second unassigned variable. Compared by 128-bit
    // cross-multiplication; zero wdeg counts as infinite score.
    int select_variable() {
        if (assigned_count_ == n_)
            return -1;
        int best = -1;
        std::uint64_t best_w = 0;
        int best_dom = 0;
        if (cfg_.randomized)
            ties_.clear();
        for (int v = 0; v < n_; ++v) {
            if (assigned_[v])
                continue;
            const int dom = dom_size_[v];
            std::uint64_t w = 0;
            for (int ci : var_constraints_[v]) {
                const Table& t = tables_[ci];
                int future = 0;
                for (int u : t.scope)
                    future += !assigned_[u];
                if (future >= 2)
                    w += t.weight;
            }
            if (best < 0) {
                best = v;
                best_w = w;
                best_dom = dom;
                if (cfg_.randomized)
                    ties_.push_back(v);
                continue;
            }
            const auto lhs = static_cast<unsigned __int128>(dom) * best_w;
            const auto rhs = static_cast<unsigned __int128>(best_dom) * w;
            if (lhs < rhs) {
                best = v;
                best_w = w;
                best_dom = dom;
                if (cfg_.randomized) {
                    ties_.clear();
                    ties_.push_back(v);
                }
            } else if (lhs == rhs && cfg_.randomized) {
                ties_.push_back(v);
            }
        }
        if (cfg_.randomized && ties_.size() > 1)
            return ties_[static_cast<std::size_t>(rng_.below(ties_.size()))];
        return best;
    }

    std::vector<int> value_order(int var) {
        std::vector<int> vals;
        vals.reserve(static_cast<std::size_t>(dom_size_[var]));
        for (int val = 0; val < d_; ++val)
            if (present(var, val))
                vals.push_back(val);
        if (cfg_.randomized && vals.size() > 1)
            for (std::size_t i = vals.size() - 1; i > 0; --i)
                std::swap(vals[i], vals[rng_.below(i + 1)]);
        return vals;
    }

    bool limits_breached() {
        if (timed_out_)
            return true;
        if (cfg_.node_limit && nodes_ >= *cfg_.node_limit)
            return timed_out_ = true;
        if (cfg_.backtrack_limit && backtracks_ >= *cfg_.backtrack_limit)
            return timed_out_ = true;
        if (cfg_.time_limit_seconds && (++clock_checks_ & 1023) == 0) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (elapsed >= *cfg_.time_limit_seconds)
                return timed_out_ = true;
        }
        return false;
    }

    Walk descend() {
        if (limits_breached())
            return Walk::Aborted;
        const int var = select_variable();
        if (var < 0) {
            ++solutions_;
            if (!witness_) {
                witness_.emplace(current_.begin(), current_.end());
            }
            return cfg_.count_all ? Walk::Exhausted : Walk::Found;
        }
        for (int val : value_order(var)) {
            ++nodes_;
            if (limits_breached())
                return Walk::Aborted;
            const std::size_t mark = trail_.size();
            assign(var, val);
            if (propagate()) {
                const Walk sub = descend();
                if (sub != Walk::Exhausted) {
                    unassign(var);
                    restore(mark);
                    return sub;
                }
            }
            unassign(var);
            restore(mark);
            ++backtracks_;
        }
        return Walk::Exhausted;
    }

    const Instance& inst_;
    SearchConfig cfg_;
    int n_;
    int d_;
    Xoshiro256pp rng_;

    std::vector<Table> tables_;
    std::vector<std::vector<int>> var_constraints_;
    std::vector<std::uint8_t> present_;
    std::vector<int> dom_size_;
    std::vector<std::uint8_t> assigned_;
    std::vector<int> current_;
    std::vector<std::pair<int, int>> trail_;
    std::vector<int> queue_;
    std::vector<std::uint8_t> in_queue_;
    std::vector<int> vals_;
    std::vector<int> ties_;

    int assigned_count_ = 0;
    long long nodes_ = 0;
    long long backtracks_ = 0;
    long long solutions_ = 0;
    long long clock_checks_ = 0;
    bool timed_out_ = false;
    std::optional<Assignment> witness_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

SolveOutcome solve_mac(const Instance& inst, const SearchConfig& cfg) {
    if (cfg.node_limit && *cfg.node_limit <= 0)
        throw std::invalid_argument("node_limit must be positive");
    if (cfg.backtrack_limit && *cfg.backtrack_limit <= 0)
        throw std::invalid_argument("backtrack_limit must be positive");
    if (cfg.time_limit_seconds && !(*cfg.time_limit_seconds > 0))
        throw std::invalid_argument("time_limit must be positive");
    MacSearch search(inst, cfg);
    return search.run();
}

std::pair<Status, long long> brute_force(const Instance& inst) {
    validate(inst);
    double total = 1.0;
    for (int v = 0; v < inst.n; ++v) {
        total *= inst.d;
        if (total > 1e8)
            throw std::invalid_argument("brute_force refused: d^n exceeds 10^8");
    }

    std::vector<TupleSet> tables;
    tables.reserve(inst.constraints.size());
    for (const Constraint& c : inst.constraints)
        tables.emplace_back(c, inst.d);

    std::vector<int> a(static_cast<std::size_t>(inst.n), 0);
    long long count = 0;
    for (;;) {
        bool ok = true;
        for (std::size_t ci = 0; ci < tables.size(); ++ci) {
            const Constraint& c = inst.constraints[ci];
            std::uint64_t code = 0;
            for (int v : c.scope)
                code = code * static_cast<std::uint64_t>(inst.d) +
                       static_cast<std::uint64_t>(a[v]);
            if (tables[ci].contains(code)) {
                ok = false;
                break;
            }
        }
        count += ok;

        int pos = inst.n - 1;
        while (pos >= 0 && a[pos] == inst.d - 1)
            a[pos--] = 0;
        if (pos < 0)
            break;
        ++a[pos];
    }
    return {count > 0 ? Status::SAT : Status::UNSAT, count};
}

std::vector<long long> survival_runs(const Instance& inst, int runs, const SearchConfig& cfg) {
    if (!cfg.randomized)
        throw std::invalid_argument("survival_runs requires cfg.randomized");
    if (runs < 1)
        throw std::invalid_argument("runs must be >= 1");
    std::vector<long long> backtracks;
    backtracks.reserve(static_cast<std::size_t>(runs));
    for (int i = 0; i < runs; ++i) {
        SearchConfig run_cfg = cfg;
        run_cfg.tie_seed = derive_seed(cfg.tie_seed, static_cast<std::uint64_t>(i));
        backtracks.push_back(solve_mac(inst, run_cfg).backtracks);
    }
    return backtracks;
}

std::vector<std::vector<int>> root_prune(const Instance& inst) {
    MacSearch search(inst, SearchConfig{});
    return search.prune_root();
}

}  // namespace rbcsp
