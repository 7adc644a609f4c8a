#include "rbcsp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rbcsp/analysis.hpp"
#include "rbcsp/generator.hpp"
#include "rbcsp/io.hpp"
#include "rbcsp/rng.hpp"

namespace rbcsp {

const char* to_string(VaryParam v) {
    switch (v) {
    case VaryParam::P: return "p";
    case VaryParam::N: return "n";
    case VaryParam::R: return "r";
    case VaryParam::ALPHA: return "alpha";
    }
    return "?";
}

const char* to_string(SolverKind s) {
    return s == SolverKind::MAC ? "mac" : "tabu";
}

namespace {

InstanceParams with_value(const InstanceParams& base, VaryParam vary, double value) {
    InstanceParams p = base;
    switch (vary) {
    case VaryParam::P: p.p = value; break;
    case VaryParam::N: p.n = static_cast<int>(round_half_up(value)); break;
    case VaryParam::R: p.r = value; break;
    case VaryParam::ALPHA: p.alpha = value; break;
    }
    return p;
}

double mean(const std::vector<long long>& xs) {
    if (xs.empty())
        return 0.0;
    double sum = 0;
    for (long long x : xs)
        sum += static_cast<double>(x);
    return sum / static_cast<double>(xs.size());
}

double median(std::vector<long long> xs) {
    if (xs.empty())
        return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    if (xs.size() % 2 == 1)
        return static_cast<double>(xs[mid]);
    return (static_cast<double>(xs[mid - 1]) + static_cast<double>(xs[mid])) / 2.0;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    if (!std::is_sorted(spec.values.begin(), spec.values.end()))
        throw std::invalid_argument("sweep values must be sorted ascending");
    if (spec.samples_per_point < 1)
        throw std::invalid_argument("samples_per_point must be >= 1");

    std::vector<SweepRecord> records;
    records.reserve(spec.values.size());
    for (std::size_t pi = 0; pi < spec.values.size(); ++pi) {
        InstanceParams params = with_value(spec.base, spec.vary, spec.values[pi]);
        SweepRecord rec;
        rec.value = spec.values[pi];
        std::vector<long long> costs;
        std::vector<long long> nodes;
        long long sat = 0;
        for (int si = 0; si < spec.samples_per_point; ++si) {
            const std::uint64_t idx =
                static_cast<std::uint64_t>(pi) * spec.samples_per_point + si;
            params.seed = derive_seed(spec.master_seed, idx);
            const GeneratedInstance gi = generate(params);

            if (spec.solver == SolverKind::TABU && spec.filter_unsat) {
                const SolveOutcome screen = solve_mac(gi.instance, SearchConfig{});
                if (screen.status != Status::SAT)
                    continue;  // only MAC-verified SAT instances enter the statistics
            }

            SolveOutcome out;
            if (spec.solver == SolverKind::MAC) {
                SearchConfig cfg = spec.mac;
                if (cfg.randomized)
                    cfg.tie_seed = derive_seed(params.seed, 2);
                out = solve_mac(gi.instance, cfg);
            } else {
                TabuConfig cfg = spec.tabu;
                cfg.seed = derive_seed(params.seed, 1);
                out = solve_tabu(gi.instance, cfg);
            }
            if (out.status == Status::TIMEOUT) {
                ++rec.timeouts;
                continue;
            }
            sat += out.status == Status::SAT;
            costs.push_back(spec.solver == SolverKind::MAC ? out.backtracks : out.flips);
            if (spec.solver == SolverKind::MAC)
                nodes.push_back(out.nodes);
        }
        rec.sat_fraction =
            costs.empty() ? 0.0 : static_cast<double>(sat) / static_cast<double>(costs.size());
        rec.mean_cost = mean(costs);
        rec.median_cost = median(costs);
        rec.mean_nodes = mean(nodes);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_sweep_csv(std::span<const SweepRecord> records, std::ostream& out) {
    out << "value,sat_fraction,mean_cost,median_cost,mean_nodes,timeouts\n";
    for (const SweepRecord& r : records) {
        out << format_double(r.value) << ',' << format_double(r.sat_fraction) << ','
            << format_double(r.mean_cost) << ',' << format_double(r.median_cost) << ','
            << format_double(r.mean_nodes) << ',' << std::to_string(r.timeouts) << "\n";
    }
}

double empirical_threshold(const InstanceParams& base, int samples, double tolerance,
                           const ThresholdOptions& opts) {
    validate(base);
    if (base.forced)
        throw std::invalid_argument("empirical_threshold requires unforced instances");
    if (samples < 1)
        throw std::invalid_argument("samples must be >= 1");
    if (!(tolerance > 0))
        throw std::invalid_argument("tolerance must be positive");

    int evaluations = 0;
    auto sat_fraction = [&](double p) {
        InstanceParams params = base;
        params.p = p;
        long long sat = 0;
        long long decided = 0;
        for (int i = 0; i < samples; ++i) {
            params.seed = derive_seed(
                base.seed, static_cast<std::uint64_t>(evaluations) * samples + i);
            const GeneratedInstance gi = generate(params);
            const SolveOutcome out = solve_mac(gi.instance, opts.mac);
            if (out.status == Status::TIMEOUT)
                continue;
            ++decided;
            sat += out.status == Status::SAT;
        }
        ++evaluations;
        return decided == 0 ? 0.0
                            : static_cast<double>(sat) / static_cast<double>(decided);
    };

    const double p_cr = p_critical(base.alpha, base.r);
    double lo = opts.bracket ? opts.bracket->first : std::max(0.01, 0.5 * p_cr);
    double hi = opts.bracket ? opts.bracket->second : std::min(0.99, 1.5 * p_cr);
    if (!(lo > 0 && lo < hi && hi < 1))
        throw std::invalid_argument("bracket must satisfy 0 < lo < hi < 1");

    double f_lo = sat_fraction(lo);
    double f_hi = sat_fraction(hi);
    if (!(f_lo >= 0.5 && f_hi < 0.5)) {
        const double span = hi - lo;
        lo = std::max(0.005, lo - span);
        hi = std::min(0.995, hi + span);
        f_lo = sat_fraction(lo);
        f_hi = sat_fraction(hi);
        if (!(f_lo >= 0.5 && f_hi < 0.5))
            throw std::runtime_error(
                "empirical_threshold: initial interval does not bracket the 0.5 crossing");
    }

    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (sat_fraction(mid) >= 0.5)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<GrowthRecord> hardness_growth(const InstanceParams& base,
                                          std::span<const int> n_values, GrowthAt at,
                                          int samples, const SearchConfig& mac) {
    if (n_values.empty())
        throw std::invalid_argument("n_values must be non-empty");
    if (!std::is_sorted(n_values.begin(), n_values.end()))
        throw std::invalid_argument("n_values must be increasing");
    if (samples < 1)
        throw std::invalid_argument("samples must be >= 1");

    const double p_cr = p_critical(base.alpha, base.r);
    double p = p_cr;
    if (at.kind == GrowthAt::BELOW)
        p = p_cr - at.value;
    else if (at.kind == GrowthAt::ABOVE)
        p = at.value;
    if (!(p > 0 && p < 1))
        throw std::invalid_argument("requested tightness falls outside (0,1)");

    std::vector<GrowthRecord> records;
    records.reserve(n_values.size());
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        GrowthRecord rec;
        rec.n = n_values[ni];
        rec.p = p;
        for (int forced = 0; forced <= 1; ++forced) {
            InstanceParams params = base;
            params.n = rec.n;
            params.p = p;
            params.forced = forced != 0;
            std::vector<long long> costs;
            std::vector<long long> nodes;
            long long sat = 0;
            for (int i = 0; i < samples; ++i) {
                params.seed = derive_seed(
                    base.seed, (static_cast<std::uint64_t>(ni) * 2 + forced) * samples + i);
                const GeneratedInstance gi = generate(params);
                const SolveOutcome out = solve_mac(gi.instance, mac);
                if (out.status == Status::TIMEOUT) {
                    ++rec.timeouts;
                    continue;
                }
                sat += out.status == Status::SAT;
                costs.push_back(out.backtracks);
                nodes.push_back(out.nodes);
            }
            if (forced) {
                rec.forced_mean_cost = mean(costs);
                rec.forced_mean_nodes = mean(nodes);
            } else {
                rec.unforced_mean_cost = mean(costs);
                rec.unforced_mean_nodes = mean(nodes);
                rec.unforced_sat_fraction =
                    costs.empty() ? 0.0
                                  : static_cast<double>(sat) / static_cast<double>(costs.size());
            }
        }
        records.push_back(rec);
    }
    return records;
}

void write_growth_csv(std::span<const GrowthRecord> records, std::ostream& out) {
    out << "n,p,unforced_mean_cost,forced_mean_cost,unforced_mean_nodes,forced_mean_nodes,"
           "unforced_sat_fraction,timeouts\n";
    for (const GrowthRecord& r : records) {
        out << std::to_string(r.n) << ',' << format_double(r.p) << ','
            << format_double(r.unforced_mean_cost) << ',' << format_double(r.forced_mean_cost)
            << ',' << format_double(r.unforced_mean_nodes) << ','
            << format_double(r.forced_mean_nodes) << ','
            << format_double(r.unforced_sat_fraction) << ',' << std::to_string(r.timeouts)
            << "\n";
    }
}

SurvivalResult survival_experiment(const InstanceParams& base, int runs,
                                   const SearchConfig& mac) {
    if (runs < 1)
        throw std::invalid_argument("runs must be >= 1");
    const GeneratedInstance gi = generate(base);

    SearchConfig cfg = mac;
    cfg.randomized = true;
    cfg.tie_seed = derive_seed(base.seed, 1);
    std::vector<long long> counts = survival_runs(gi.instance, runs, cfg);
    std::sort(counts.begin(), counts.end());

    SurvivalResult result;
    result.runs = runs;
    for (std::size_t i = 0; i < counts.size();) {
        const long long x = counts[i];
        while (i < counts.size() && counts[i] == x)
            ++i;
        // counts[i..) are the runs strictly above x
        result.curve.emplace_back(
            x, static_cast<double>(counts.size() - i) / static_cast<double>(runs));
    }

    // Tail diagnostic: least-squares slope of ln S against ln x over the
    // top decade of observed costs (points with x, S > 0).
    const long long x_max = counts.empty() ? 0 : counts.back();
    const double cutoff = std::max(1.0, static_cast<double>(x_max) / 10.0);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [x, s] : result.curve)
        if (static_cast<double>(x) >= cutoff && x > 0 && s > 0)
            pts.emplace_back(std::log(static_cast<double>(x)), std::log(s));
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double count = static_cast<double>(pts.size());
        const double denom = count * sxx - sx * sx;
        result.tail_slope = denom != 0 ? (count * sxy - sx * sy) / denom
                                       : std::numeric_limits<double>::quiet_NaN();
    } else {
        result.tail_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

void write_survival_csv(const SurvivalResult& result, std::ostream& out) {
    out << "# runs " << std::to_string(result.runs) << "\n";
    out << "# tail_slope " << format_double(result.tail_slope) << "\n";
    out << "backtracks,survival\n";
    for (const auto& [x, s] : result.curve)
        out << std::to_string(x) << ',' << format_double(s) << "\n";
}

}  // namespace rbcsp
