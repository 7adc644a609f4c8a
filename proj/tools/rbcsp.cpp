#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rbcsp/analysis.hpp"
#include "rbcsp/experiments.hpp"
#include "rbcsp/generator.hpp"
#include "rbcsp/io.hpp"
#include "rbcsp/sat_encoder.hpp"
#include "rbcsp/solver_mac.hpp"
#include "rbcsp/solver_tabu.hpp"

namespace fs = std::filesystem;
using namespace rbcsp;

namespace {

struct GlobalOpts {
    std::string out_dir = ".";
    int config_version = 0;
};

fs::path resolve_out(const GlobalOpts& g, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || g.out_dir.empty() || g.out_dir == ".")
        return p;
    return fs::path(g.out_dir) / p;
}

// Writes to a file under --out-dir, or to stdout when path is "-" / empty.
void with_output(const GlobalOpts& g, const std::string& path,
                 const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    const fs::path full = resolve_out(g, path);
    if (full.has_parent_path())
        fs::create_directories(full.parent_path());
    std::ofstream out(full);
    if (!out)
        throw std::runtime_error("cannot open " + full.string() + " for writing");
    fn(out);
    if (!out)
        throw std::runtime_error("write to " + full.string() + " failed");
}

GeneratedInstance load_instance(const std::string& path) {
    if (path == "-")
        return read_instance(std::cin);
    return read_instance(fs::path(path));
}

void add_param_options(CLI::App* cmd, InstanceParams& params) {
    cmd->add_option("-k,--arity", params.k, "Constraint arity k")->capture_default_str();
    cmd->add_option("-n,--vars", params.n, "Variable count n")->capture_default_str();
    cmd->add_option("-a,--alpha", params.alpha, "Domain exponent alpha (d = n^alpha)")
        ->capture_default_str();
    cmd->add_option("-r,--density", params.r, "Constraint density r (m = r*n*ln n)")
        ->capture_default_str();
    cmd->add_option("-p,--tightness", params.p, "Constraint tightness p")
        ->capture_default_str();
    cmd->add_option("--model", params.model, "Instance model")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Model>{{"RB", Model::RB}, {"rb", Model::RB},
                                         {"RD", Model::RD}, {"rd", Model::RD}}))
        ->default_str("RB");
    cmd->add_flag("--forced", params.forced, "Plant a forced solution");
    cmd->add_option("--seed", params.seed, "Generator seed")->capture_default_str();
}

void add_mac_options(CLI::App* cmd, SearchConfig& cfg) {
    cmd->add_option("--node-limit", cfg.node_limit, "Abort after this many nodes");
    cmd->add_option("--backtrack-limit", cfg.backtrack_limit,
                    "Abort after this many backtracks");
    cmd->add_option("--time-limit", cfg.time_limit_seconds, "Abort after this many seconds");
    cmd->add_flag("--randomized", cfg.randomized,
                  "Random value order and tie-breaking (seeded)");
    cmd->add_option("--tie-seed", cfg.tie_seed, "Seed for randomized search")
        ->capture_default_str();
}

void add_tabu_options(CLI::App* cmd, TabuConfig& cfg) {
    cmd->add_option("--max-flips", cfg.max_flips, "Flip budget")->capture_default_str();
    cmd->add_option("--tenure", cfg.tabu_tenure, "Tabu tenure")->capture_default_str();
    cmd->add_option("--restarts", cfg.restarts, "Restart count (0 = never)")
        ->capture_default_str();
    cmd->add_option("--tabu-seed", cfg.seed, "Local search seed")->capture_default_str();
    cmd->add_flag("!--no-weight-learning", cfg.weight_learning,
                  "Disable constraint weight learning");
    cmd->add_flag("--self-check", cfg.self_check,
                  "Re-derive the evaluation from scratch every 1000 flips");
}

void print_outcome(const SolveOutcome& out) {
    std::cout << "status " << to_string(out.status) << "\n";
    std::cout << "nodes " << out.nodes << "\n";
    std::cout << "backtracks " << out.backtracks << "\n";
    std::cout << "flips " << out.flips << "\n";
    if (out.solution_count)
        std::cout << "solutions " << *out.solution_count << "\n";
    if (out.witness) {
        std::cout << "witness";
        for (int v : *out.witness)
            std::cout << ' ' << v;
        std::cout << "\n";
    }
    std::cerr << "elapsed_seconds " << format_double(out.elapsed_seconds) << "\n";
}

int exit_code(Status s) {
    switch (s) {
    case Status::SAT: return 10;
    case Status::UNSAT: return 20;
    case Status::TIMEOUT: return 30;
    }
    return 1;
}

std::string yesno(bool b) {
    return b ? "yes" : "no";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random CSP workbench: RB/RD instance generation, threshold analysis, "
                 "complete and local search, CNF encoding, batch experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key = value config file (see README)");

    GlobalOpts global;
    app.add_option("--out-dir", global.out_dir,
                   "Directory for relative output paths (env RBCSP_OUT_DIR)")
        ->envname("RBCSP_OUT_DIR")
        ->capture_default_str();
    app.add_option("--config-version", global.config_version,
                   "Config file schema version; a config file must set this to 1");

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "Generate random instances");
    InstanceParams gen_params;
    int gen_count = 1;
    std::string gen_out;
    add_param_options(gen_cmd, gen_params);
    gen_cmd->add_option("--count", gen_count, "Number of instances")->capture_default_str();
    gen_cmd->add_option("-o,--out", gen_out,
                        "Output file ('-' = stdout; with --count > 1, an index is "
                        "appended before the extension)");

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
    std::string solve_file;
    std::string solve_method = "mac";
    SearchConfig solve_mac_cfg;
    TabuConfig solve_tabu_cfg;
    solve_cmd->add_option("instance", solve_file, "Instance file ('-' = stdin)")->required();
    solve_cmd->add_option("--method", solve_method, "Search method")
        ->check(CLI::IsMember({"mac", "tabu"}))
        ->capture_default_str();
    solve_cmd->add_flag("--count-all", solve_mac_cfg.count_all,
                        "Exhaust the space and count solutions (mac only)");
    add_mac_options(solve_cmd, solve_mac_cfg);
    add_tabu_options(solve_cmd, solve_tabu_cfg);

    // ---- analyze ----
    auto* analyze_cmd =
        app.add_subcommand("analyze", "Threshold report or distance profile CSV");
    InstanceParams analyze_params;
    std::string analyze_profile;
    int analyze_grid = 101;
    std::string analyze_out;
    add_param_options(analyze_cmd, analyze_params);
    analyze_cmd->add_option("--profile", analyze_profile,
                            "Emit a delta,exponent CSV instead of the report")
        ->check(CLI::IsMember({"forced", "unforced"}));
    analyze_cmd->add_option("--grid", analyze_grid, "Profile grid size")
        ->capture_default_str();
    analyze_cmd->add_option("-o,--out", analyze_out, "Profile CSV destination");

    // ---- encode ----
    auto* encode_cmd = app.add_subcommand("encode", "Direct-encode an instance to DIMACS CNF");
    std::string encode_file;
    std::string encode_out;
    bool encode_amo = true;
    encode_cmd->add_option("instance", encode_file, "Instance file ('-' = stdin)")->required();
    encode_cmd->add_flag("!--no-amo", encode_amo, "Drop the at-most-one clauses");
    encode_cmd->add_option("-o,--out", encode_out, "DIMACS destination ('-' = stdout)");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter, emit CSV statistics");
    SweepSpec sweep_spec;
    std::string sweep_vary = "p";
    std::string sweep_solver = "mac";
    std::vector<double> sweep_values;
    double sweep_from = 0, sweep_to = 0, sweep_step = 0;
    std::string sweep_out;
    add_param_options(sweep_cmd, sweep_spec.base);
    auto* values_opt =
        sweep_cmd->add_option("--values", sweep_values, "Explicit grid of values");
    auto* from_opt = sweep_cmd->add_option("--from", sweep_from, "Grid start")
                         ->excludes(values_opt);
    sweep_cmd->add_option("--to", sweep_to, "Grid end (inclusive)")->needs(from_opt);
    sweep_cmd->add_option("--step", sweep_step, "Grid step")->needs(from_opt);
    sweep_cmd->add_option("--vary", sweep_vary, "Parameter to vary")
        ->check(CLI::IsMember({"p", "n", "r", "alpha"}))
        ->capture_default_str();
    sweep_cmd->add_option("--samples", sweep_spec.samples_per_point, "Instances per point")
        ->capture_default_str();
    sweep_cmd->add_option("--solver", sweep_solver, "Solver")
        ->check(CLI::IsMember({"mac", "tabu"}))
        ->capture_default_str();
    sweep_cmd->add_option("--master-seed", sweep_spec.master_seed, "Seed for the whole sweep")
        ->capture_default_str();
    sweep_cmd->add_flag("--filter-unsat", sweep_spec.filter_unsat,
                        "With tabu: keep only MAC-verified satisfiable instances");
    add_mac_options(sweep_cmd, sweep_spec.mac);
    add_tabu_options(sweep_cmd, sweep_spec.tabu);
    sweep_cmd->add_option("-o,--out", sweep_out, "CSV destination");

    // ---- threshold ----
    auto* thr_cmd = app.add_subcommand(
        "threshold", "Locate the experimental sat/unsat threshold by bisection on p");
    InstanceParams thr_params;
    int thr_samples = 50;
    double thr_tol = 0.01;
    std::vector<double> thr_bracket;
    SearchConfig thr_mac;
    add_param_options(thr_cmd, thr_params);
    thr_cmd->add_option("--samples", thr_samples, "Instances per evaluation")
        ->capture_default_str();
    thr_cmd->add_option("--tol", thr_tol, "Bisection tolerance on p")->capture_default_str();
    thr_cmd->add_option("--bracket", thr_bracket, "Initial interval lo hi")->expected(2);
    add_mac_options(thr_cmd, thr_mac);

    // ---- growth ----
    auto* growth_cmd =
        app.add_subcommand("growth", "Forced vs unforced MAC cost against n, emit CSV");
    InstanceParams growth_params;
    std::vector<int> growth_ns;
    std::string growth_at = "threshold";
    double growth_eps = 0.01;
    double growth_p_above = -1;
    int growth_samples = 50;
    SearchConfig growth_mac;
    std::string growth_out;
    add_param_options(growth_cmd, growth_params);
    growth_cmd->add_option("--n-values", growth_ns, "Variable counts to measure")->required();
    growth_cmd->add_option("--at", growth_at, "Where to place the tightness")
        ->check(CLI::IsMember({"threshold", "below", "above"}))
        ->capture_default_str();
    growth_cmd->add_option("--eps", growth_eps, "Distance below p_cr (with --at below)")
        ->capture_default_str();
    growth_cmd->add_option("--p-above", growth_p_above, "Fixed tightness (with --at above)");
    growth_cmd->add_option("--samples", growth_samples, "Instances per point per variant")
        ->capture_default_str();
    add_mac_options(growth_cmd, growth_mac);
    growth_cmd->add_option("-o,--out", growth_out, "CSV destination");

    // ---- survival ----
    auto* surv_cmd = app.add_subcommand(
        "survival", "Runtime distribution of randomized MAC on one instance, emit CSV");
    InstanceParams surv_params;
    surv_params.p = -1;  // sentinel: default to p_critical(alpha, r)
    int surv_runs = 500;
    SearchConfig surv_mac;
    std::string surv_out;
    add_param_options(surv_cmd, surv_params);
    surv_cmd->add_option("--runs", surv_runs, "Independent randomized runs")
        ->capture_default_str();
    add_mac_options(surv_cmd, surv_mac);
    surv_cmd->add_option("-o,--out", surv_out, "CSV destination");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.get_config_ptr()->count() > 0 && global.config_version != 1)
            throw std::runtime_error("config file must set config-version = 1");

        if (*gen_cmd) {
            if (gen_count < 1)
                throw std::invalid_argument("--count must be >= 1");
            if (gen_count == 1) {
                const GeneratedInstance gi = generate(gen_params);
                with_output(global, gen_out, [&](std::ostream& os) { write_instance(gi, os); });
            } else {
                if (gen_out.empty() || gen_out == "-")
                    throw std::invalid_argument("--count > 1 needs an --out file pattern");
                const auto batch = sample_batch(gen_params, gen_count, gen_params.seed);
                const fs::path base = resolve_out(global, gen_out);
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    char idx[16];
                    std::snprintf(idx, sizeof(idx), "_%04zu", i);
                    fs::path path = base;
                    path.replace_filename(base.stem().string() + idx +
                                          base.extension().string());
                    if (path.has_parent_path())
                        fs::create_directories(path.parent_path());
                    write_instance(batch[i], path);
                }
            }
            return 0;
        }

        if (*solve_cmd) {
            const GeneratedInstance gi = load_instance(solve_file);
            SolveOutcome out;
            if (solve_method == "mac")
                out = solve_mac(gi.instance, solve_mac_cfg);
            else
                out = solve_tabu(gi.instance, solve_tabu_cfg);
            print_outcome(out);
            return exit_code(out.status);
        }

        if (*analyze_cmd) {
            validate(analyze_params);
            if (!analyze_profile.empty()) {
                const auto variant = analyze_profile == "forced" ? ProfileVariant::FORCED
                                                                 : ProfileVariant::UNFORCED;
                const DistanceProfile prof =
                    distance_profile(analyze_params, variant, analyze_grid);
                with_output(global, analyze_out, [&](std::ostream& os) {
                    os << "delta,exponent\n";
                    for (const auto& [delta, exponent] : prof.grid)
                        os << format_double(delta) << ',' << format_double(exponent) << "\n";
                });
                return 0;
            }
            const ThresholdReport rep = check_conditions(analyze_params);
            const DerivedDims dims = derive_dims(analyze_params);
            std::cout << "p_critical " << format_double(rep.p_cr, 10) << "\n";
            std::cout << "r_critical " << format_double(rep.r_cr, 10) << "\n";
            std::cout << "d " << dims.d << "\n";
            std::cout << "m " << dims.m << "\n";
            std::cout << "thm1 k>=2=" << yesno(rep.conditions_thm1[0])
                      << " alpha>1/k=" << yesno(rep.conditions_thm1[1])
                      << " p<=(k-1)/k=" << yesno(rep.conditions_thm1[2]) << "\n";
            std::cout << "thm2 k>=2=" << yesno(rep.conditions_thm2[0])
                      << " alpha>1/k=" << yesno(rep.conditions_thm2[1])
                      << " p_cr<=(k-1)/k=" << yesno(rep.conditions_thm2[2]) << "\n";
            std::cout << "equivalence " << yesno(rep.equivalence_holds) << "\n";
            std::cout << "ln_expected_solutions "
                      << format_double(expected_solutions(analyze_params, dims), 10) << "\n";
            std::cout << "ln_forced_expected_solutions "
                      << format_double(forced_expected_solutions(analyze_params, dims), 10)
                      << "\n";
            return 0;
        }

        if (*encode_cmd) {
            const GeneratedInstance gi = load_instance(encode_file);
            const CnfFormula cnf = encode_direct(gi.instance, encode_amo);
            with_output(global, encode_out, [&](std::ostream& os) {
                write_dimacs(cnf, dimacs_comments(gi), os);
            });
            return 0;
        }

        if (*sweep_cmd) {
            if (sweep_values.empty()) {
                if (!(sweep_step > 0) || !(sweep_to >= sweep_from))
                    throw std::invalid_argument(
                        "provide --values or --from/--to/--step with positive step");
                for (double v = sweep_from; v <= sweep_to + 1e-12; v += sweep_step)
                    sweep_values.push_back(v);
            }
            sweep_spec.values = sweep_values;
            sweep_spec.vary = sweep_vary == "p"   ? VaryParam::P
                              : sweep_vary == "n" ? VaryParam::N
                              : sweep_vary == "r" ? VaryParam::R
                                                  : VaryParam::ALPHA;
            sweep_spec.solver = sweep_solver == "mac" ? SolverKind::MAC : SolverKind::TABU;
            const auto records = run_sweep(sweep_spec);
            with_output(global, sweep_out,
                        [&](std::ostream& os) { write_sweep_csv(records, os); });
            return 0;
        }

        if (*thr_cmd) {
            ThresholdOptions opts;
            opts.mac = thr_mac;
            if (!thr_bracket.empty())
                opts.bracket = {thr_bracket[0], thr_bracket[1]};
            const double p_hat = empirical_threshold(thr_params, thr_samples, thr_tol, opts);
            std::cout << "p_hat " << format_double(p_hat) << "\n";
            std::cout << "p_critical "
                      << format_double(p_critical(thr_params.alpha, thr_params.r)) << "\n";
            return 0;
        }

        if (*growth_cmd) {
            GrowthAt at = GrowthAt::threshold();
            if (growth_at == "below")
                at = GrowthAt::below(growth_eps);
            else if (growth_at == "above") {
                if (growth_p_above <= 0)
                    throw std::invalid_argument("--at above needs --p-above");
                at = GrowthAt::above(growth_p_above);
            }
            const auto records =
                hardness_growth(growth_params, growth_ns, at, growth_samples, growth_mac);
            with_output(global, growth_out,
                        [&](std::ostream& os) { write_growth_csv(records, os); });
            return 0;
        }

        if (*surv_cmd) {
            if (surv_params.p <= 0)
                surv_params.p = p_critical(surv_params.alpha, surv_params.r);
            const SurvivalResult result = survival_experiment(surv_params, surv_runs, surv_mac);
            with_output(global, surv_out,
                        [&](std::ostream& os) { write_survival_csv(result, os); });
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
