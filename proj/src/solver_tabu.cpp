#include "rbcsp/solver_tabu.hpp"

#include <algorithm>
#include <chrono>

#include "rbcsp/rng.hpp"

namespace rbcsp {

namespace {

struct TabuState {
    const Instance& inst;
    std::vector<std::vector<std::uint64_t>> forbidden;  // sorted codes per constraint
    std::vector<std::vector<int>> incident;             // constraints per variable
    std::vector<std::uint64_t> weight;
    std::vector<std::uint8_t> violated;
    Assignment cur;
    long long raw = 0;            // violated constraint count
    std::uint64_t weighted = 0;   // sum of weights over violated constraints

    explicit TabuState(const Instance& instance) : inst(instance) {
        const std::size_t m = inst.constraints.size();
        forbidden.resize(m);
        weight.assign(m, 1);
        violated.assign(m, 0);
        incident.assign(static_cast<std::size_t>(inst.n), {});
        for (std::size_t ci = 0; ci < m; ++ci) {
            const Constraint& c = inst.constraints[ci];
            auto& codes = forbidden[ci];
            codes.reserve(static_cast<std::size_t>(c.tuple_count()));
            for (long long t = 0; t < c.tuple_count(); ++t)
                codes.push_back(tuple_code(c.tuple(t), inst.d));
            std::sort(codes.begin(), codes.end());
            for (int v : c.scope)
                incident[v].push_back(static_cast<int>(ci));
        }
    }

    bool violates(int ci, const Assignment& a) const {
        const Constraint& c = inst.constraints[ci];
        std::uint64_t code = 0;
        for (int v : c.scope)
            code = code * static_cast<std::uint64_t>(inst.d) + static_cast<std::uint64_t>(a[v]);
        return std::binary_search(forbidden[ci].begin(), forbidden[ci].end(), code);
    }

    void reset_evaluation() {
        raw = 0;
        weighted = 0;
        for (std::size_t ci = 0; ci < forbidden.size(); ++ci) {
            violated[ci] = violates(static_cast<int>(ci), cur);
            if (violated[ci]) {
                ++raw;
                weighted += weight[ci];
            }
        }
    }

    // Effect of setting cur[var] = val on (weighted, raw).
    std::pair<long long, long long> move_delta(int var, int val) {
        const int old = cur[var];
        cur[var] = val;
        long long dw = 0;
        long long dr = 0;
        for (int ci : incident[var]) {
            const bool after = violates(ci, cur);
            if (after != static_cast<bool>(violated[ci])) {
                const long long sign = after ? 1 : -1;
                dw += sign * static_cast<long long>(weight[ci]);
                dr += sign;
            }
        }
        cur[var] = old;
        return {dw, dr};
    }

    void apply_move(int var, int val) {
        cur[var] = val;
        for (int ci : incident[var]) {
            const bool after = violates(ci, cur);
            if (after != static_cast<bool>(violated[ci])) {
                violated[ci] = after;
                if (after) {
                    ++raw;
                    weighted += weight[ci];
                } else {
                    --raw;
                    weighted -= weight[ci];
                }
            }
        }
    }

    void bump_violated_weights() {
        for (std::size_t ci = 0; ci < violated.size(); ++ci)
            if (violated[ci]) {
                ++weight[ci];
                ++weighted;
            }
    }
};

}  // namespace

SolveOutcome solve_tabu(const Instance& inst, const TabuConfig& cfg) {
    validate(inst);
    if (cfg.max_flips < 1)
        throw std::invalid_argument("max_flips must be >= 1");
    if (cfg.tabu_tenure < 0)
        throw std::invalid_argument("tabu_tenure must be >= 0");
    if (cfg.restarts < 0)
        throw std::invalid_argument("restarts must be >= 0");

    const auto t0 = std::chrono::steady_clock::now();
    Xoshiro256pp rng(cfg.seed);
    TabuState state(inst);
    const int n = inst.n;
    const int d = inst.d;

    auto random_assignment = [&] {
        Assignment a(static_cast<std::size_t>(n));
        for (int& v : a)
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        return a;
    };

    auto finish = [&](Status status, std::optional<Assignment> witness, long long flips) {
        SolveOutcome out;
        out.status = status;
        out.witness = std::move(witness);
        out.flips = flips;
        out.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (status == Status::SAT && !satisfies(inst, *out.witness))
            throw std::logic_error("internal error: unsound tabu witness");
        return out;
    };

    state.cur = random_assignment();
    state.reset_evaluation();
    if (state.raw == 0)
        return finish(Status::SAT, state.cur, 0);
    if (d == 1)
        return finish(Status::TIMEOUT, std::nullopt, 0);  // no move exists

    // (var, value) pairs are tabu until the recorded flip index.
    std::vector<long long> tabu_until(static_cast<std::size_t>(n) * d, 0);
    long long best_raw = state.raw;
    const long long segment =
        cfg.restarts > 0 ? std::max<long long>(1, cfg.max_flips / cfg.restarts) : 0;

    std::vector<std::pair<int, int>> best_moves;
    for (long long flip = 1; flip <= cfg.max_flips; ++flip) {
        if (segment > 0 && flip > 1 && (flip - 1) % segment == 0) {
            state.cur = random_assignment();
            state.reset_evaluation();
            std::fill(tabu_until.begin(), tabu_until.end(), 0);
            if (state.raw == 0)
                return finish(Status::SAT, state.cur, flip - 1);
        }

        best_moves.clear();
        long long best_dw = 0;
        for (int var = 0; var < n; ++var) {
            for (int val = 0; val < d; ++val) {
                if (val == state.cur[var])
                    continue;
                const auto [dw, dr] = state.move_delta(var, val);
                const bool tabu =
                    tabu_until[static_cast<std::size_t>(var) * d + val] >= flip;
                if (tabu && state.raw + dr >= best_raw)
                    continue;  // tabu and no aspiration
                if (best_moves.empty() || dw < best_dw) {
                    best_moves.assign(1, {var, val});
                    best_dw = dw;
                } else if (dw == best_dw) {
                    best_moves.emplace_back(var, val);
                }
            }
        }

        int var;
        int val;
        if (best_moves.empty()) {
            // everything tabu: take a uniformly random move
            var = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            val = static_cast<int>(rng.below(static_cast<std::uint64_t>(d - 1)));
            if (val >= state.cur[var])
                ++val;
        } else {
            const auto pick = best_moves[rng.below(best_moves.size())];
            var = pick.first;
            val = pick.second;
            if (cfg.weight_learning && best_dw >= 0)
                state.bump_violated_weights();  // local minimum
        }

        tabu_until[static_cast<std::size_t>(var) * d + state.cur[var]] =
            flip + cfg.tabu_tenure;
        state.apply_move(var, val);
        best_raw = std::min(best_raw, state.raw);

        if (cfg.self_check && flip % 1000 == 0) {
            const long long raw = state.raw;
            const std::uint64_t weighted = state.weighted;
            state.reset_evaluation();
            if (raw != state.raw || weighted != state.weighted)
                throw std::logic_error("tabu self-check: incremental evaluation drifted");
        }

        if (state.raw == 0)
            return finish(Status::SAT, state.cur, flip);
    }

    return finish(Status::TIMEOUT, std::nullopt, cfg.max_flips);
}

}  // namespace rbcsp
