// Command-line front end. Subcommands dispatch to the library and print
// structured reports; primary outputs (CSV) are written atomically so a rerun
// with the same seed is byte-identical.
//
// Exit codes: 0 success, 2 input/schema error, 3 infeasible scenario or
// failed independence requirement, 4 resource cap exceeded.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secisac/dmc.hpp"
#include "secisac/fme.hpp"
#include "secisac/gauss_region.hpp"
#include "secisac/io.hpp"
#include "secisac/sim.hpp"
#include "secisac/util.hpp"

using namespace secisac;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCap = 4;

std::string bits(double nats) { return fmt_g(nats / std::log(2.0)); }

void print_rate(const char* name, double v) {
    std::printf("%s = %s nats (%s bits)\n", name, fmt_g(v).c_str(), bits(v).c_str());
}

ScenarioConfig require_gaussian(const LoadedScenario& sc) {
    if (!sc.gaussian)
        throw std::invalid_argument("this command needs a scenario with kind \"gaussian\"");
    return sc.gauss;
}

DmcScenario require_dmc(const LoadedScenario& sc) {
    if (sc.gaussian) throw std::invalid_argument("this command needs a scenario with kind \"dmc\"");
    return sc.dmc;
}

int cmd_gauss_frontier(const std::string& scenario_path, const std::string& mode_flag, long budget,
                       uint64_t seed, const std::string& out_path) {
    ScenarioConfig cfg = require_gaussian(load_scenario_file(scenario_path));
    SecrecyMode mode = mode_flag.empty() ? cfg.mode : mode_from_name(mode_flag);
    SearchConfig search;
    search.budget = budget;
    search.seed = seed;
    FrontierResult res = frontier(cfg, mode, search);
    std::string csv = frontier_csv(res.points);
    atomic_write_file(out_path, csv);
    std::printf("scenario: gaussian P=%s Q=%s sigma2=%s sigma_e2=%s a=%s b=%s\n",
                fmt_g(cfg.P).c_str(), fmt_g(cfg.Q).c_str(), fmt_g(cfg.sigma2).c_str(),
                fmt_g(cfg.sigma_e2).c_str(), fmt_g(cfg.a).c_str(), fmt_g(cfg.b).c_str());
    std::printf("mode: %s\n", mode_name(mode).c_str());
    std::printf("note: multi-start search; the frontier is an inner approximation of the"
                " achievable region.\n");
    std::printf("evaluated: %ld candidate rates, %ld infeasible discarded\n", res.evaluated,
                res.infeasible_discarded);
    std::printf("frontier points: %zu\n", res.points.size());
    if (!res.points.empty()) {
        double maxR = 0, minD = res.points.front().D;
        for (const auto& p : res.points) maxR = std::max(maxR, p.R);
        print_rate("max R_M", maxR);
        std::printf("min D = %s\n", fmt_g(minD).c_str());
    }
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

int cmd_gauss_eval(const std::string& scenario_path, const std::string& params_path,
                   const std::string& mode_flag) {
    ScenarioConfig cfg = require_gaussian(load_scenario_file(scenario_path));
    SecrecyMode mode = mode_flag.empty() ? cfg.mode : mode_from_name(mode_flag);
    AuxParams p = load_gauss_params_file(params_path);
    RateTerms t = eval_terms(cfg, p, mode);
    double D = eval_distortion(cfg, p);
    std::printf("scenario: gaussian P=%s Q=%s sigma2=%s sigma_e2=%s a=%s b=%s\n",
                fmt_g(cfg.P).c_str(), fmt_g(cfg.Q).c_str(), fmt_g(cfg.sigma2).c_str(),
                fmt_g(cfg.sigma_e2).c_str(), fmt_g(cfg.a).c_str(), fmt_g(cfg.b).c_str());
    std::printf("mode: %s\n", mode_name(mode).c_str());
    std::printf("params: sigma_T2=%s sigma_F2=%s sigma_G2=%s delta=%s alpha=%s epsilon=%s"
                " gamma=%s\n",
                fmt_g(p.sT2).c_str(), fmt_g(p.sF2).c_str(), fmt_g(p.sG2).c_str(),
                fmt_g(p.delta).c_str(), fmt_g(p.alpha).c_str(), fmt_g(p.eps).c_str(),
                fmt_g(p.gamma).c_str());
    std::printf("power_used = %s (limit %s)\n", fmt_g(p.power_used(cfg.Q)).c_str(),
                fmt_g(cfg.P).c_str());
    print_rate("I(U,V;Y)", t.i_uvy);
    print_rate("I(U,V;S)", t.i_uvs);
    print_rate("I(V;Y|U)", t.i_vy_u);
    print_rate("I(V;Xi,Z|U)", t.i_sec_u);
    print_rate("I(U;Y)", t.i_uy);
    print_rate("I(U;S)", t.i_us);
    print_rate("e1 = I(U,V;Y)-I(U,V;S)", t.e1);
    if (mode != SecrecyMode::none)
        print_rate("e2 = I(V;Y|U)-I(V;Xi,Z|U)+min{0,I(U;Y)-I(U;S)}", t.e2);
    print_rate("R_M", t.rate);
    std::printf("D = %s\n", fmt_g(D).c_str());
    std::printf("slack_e1 = %s\n", fmt_g(t.e1 - t.rate).c_str());
    if (mode != SecrecyMode::none) std::printf("slack_e2 = %s\n", fmt_g(t.e2 - t.rate).c_str());
    std::printf("slack_power = %s\n", fmt_g(cfg.P - p.power_used(cfg.Q)).c_str());
    std::printf("independence_residual = %s\n", fmt_g(t.independence_residual).c_str());
    std::printf("feasible: %s\n", t.feasible ? "yes" : "no");
    return t.feasible ? kExitOk : kExitInfeasible;
}

int cmd_dmc_eval(const std::string& scenario_path, const std::string& aux_path,
                 const std::string& mode_flag) {
    DmcScenario sc = require_dmc(load_scenario_file(scenario_path));
    AuxChannel aux = load_aux_file(aux_path, sc);
    DmcMode mode =
        mode_flag.empty() ? DmcMode::message_and_state : dmc_mode_from_name(mode_flag);
    DmcRegionPoint pt = eval_region(sc, aux, mode);
    std::printf("scenario: dmc |S|=%d |Xi|=%d |X|=%d |Y|=%d |Z|=%d |Shat|=%d\n", sc.nS, sc.nXi,
                sc.nX, sc.nY, sc.nZ, sc.nShat);
    std::printf("aux: |U|=%d |V|=%d\n", aux.nU, aux.nV);
    std::printf("mode: %s\n", dmc_mode_name(mode).c_str());
    print_rate("I(U,V;Y)", pt.i_uvy);
    print_rate("I(U,V;S)", pt.i_uvs);
    print_rate("I(V;Y|U)", pt.i_vy_u);
    print_rate("I(V;Xi,Z|U)", pt.i_sec_u);
    print_rate("I(U;Y)", pt.i_uy);
    print_rate("I(U;S)", pt.i_us);
    print_rate("e1 = I(U,V;Y)-I(U,V;S)", pt.e1);
    if (mode != DmcMode::none) {
        print_rate("e2 = I(V;Y|U)-I(V;Xi,Z|U)+min{0,I(U;Y)-I(U;S)}", pt.e2);
        print_rate("projected-pair min", pt.pair_min);
    }
    print_rate("R_M", pt.R);
    std::printf("D = %s\n", fmt_g(pt.D).c_str());
    std::printf("slack_e1 = %s\n", fmt_g(pt.e1 - pt.R).c_str());
    if (mode != DmcMode::none) std::printf("slack_e2 = %s\n", fmt_g(pt.e2 - pt.R).c_str());
    std::printf("independence_residual = %s  # I(Xi;U,Z)\n", fmt_g(pt.residual).c_str());
    std::printf("feasible: %s\n", pt.feasible ? "yes" : "no");
    return pt.feasible ? kExitOk : kExitInfeasible;
}

int cmd_dmc_search(const std::string& scenario_path, const std::string& mode_flag, int nu, int nv,
                   long budget, uint64_t seed, const std::string& out_path) {
    DmcScenario sc = require_dmc(load_scenario_file(scenario_path));
    DmcMode mode = mode_flag.empty() ? DmcMode::none : dmc_mode_from_name(mode_flag);
    DmcSearchConfig cfg;
    cfg.nU = nu;
    cfg.nV = nv;
    cfg.budget = budget;
    cfg.seed = seed;
    DmcFrontier res = search_aux(sc, mode, cfg);
    atomic_write_file(out_path, dmc_frontier_csv(res.points));
    std::printf("scenario: dmc |S|=%d |Xi|=%d |X|=%d |Y|=%d |Z|=%d |Shat|=%d\n", sc.nS, sc.nXi,
                sc.nX, sc.nY, sc.nZ, sc.nShat);
    std::printf("mode: %s  |U|=%d |V|=%d\n", dmc_mode_name(mode).c_str(), nu, nv);
    std::printf("note: searched over fixed auxiliary alphabet sizes; no cardinality bound is\n"
                "note: available, so the frontier is an inner approximation only.\n");
    std::printf("evaluated: %ld region evaluations, %ld infeasible discarded\n", res.evaluated,
                res.infeasible_discarded);
    std::printf("frontier points: %zu\n", res.points.size());
    if (!res.points.empty()) {
        double maxR = 0;
        for (const auto& p : res.points) maxR = std::max(maxR, p.R);
        print_rate("max R_M", maxR);
        std::printf("min D = %s\n", fmt_g(res.points.front().D).c_str());
    }
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

int cmd_fme(const std::string& file, const std::vector<std::string>& eliminate_vars,
            const std::vector<double>& scheme) {
    if (!scheme.empty()) {
        SchemeMi mi{scheme[0], scheme[1], scheme[2], scheme[3], scheme[4]};
        SchemeProjection pr = project_scheme_rates(mi);
        std::printf("inputs: I(U;S)=%s I(U,V;S)=%s I(V;Xi,Z|U)=%s I(U,V;Y)=%s I(V;Y|U)=%s\n",
                    fmt_g(mi.i_us).c_str(), fmt_g(mi.i_uvs).c_str(), fmt_g(mi.i_vxz_u).c_str(),
                    fmt_g(mi.i_uvy).c_str(), fmt_g(mi.i_vy_u).c_str());
        std::printf("closed form 1: I(U,V;Y)-I(U,V;S)              = %s\n",
                    fmt_g(pr.closed_form[0]).c_str());
        std::printf("closed form 2: I(V;Y|U)-I(V;Xi,Z|U)           = %s\n",
                    fmt_g(pr.closed_form[1]).c_str());
        std::printf("closed form 3: I(U,V;Y)-I(V;Xi,Z|U)-I(U;S)    = %s\n",
                    fmt_g(pr.closed_form[2]).c_str());
        std::printf("min of closed forms                           = %s\n",
                    fmt_g(pr.closed_form_min).c_str());
        std::printf("eliminated system bound on R_M                = %s\n",
                    fmt_g(pr.fme_bound).c_str());
        std::printf("projected system:\n%s", pr.projected.to_text().c_str());
        return kExitOk;
    }
    LinIneqSystem sys = parse_ineq_text(read_file(file));
    for (const auto& v : eliminate_vars) sys = eliminate(sys, v);
    std::printf("%s", sys.to_text().c_str());
    return kExitOk;
}

int cmd_simulate(const std::string& experiment_path, uint64_t seed, bool seed_set, long trials,
                 bool trials_set, const std::string& out_path) {
    Experiment ex = load_experiment_file(experiment_path);
    if (seed_set) ex.cfg.seed = seed;
    if (trials_set) ex.cfg.trials = trials;
    ex.cfg.validate();
    SimResult res = run_experiment(ex.sc, ex.aux, ex.cfg);
    std::printf("experiment: R_M=%s R_I=%s R_J=%s epsilon=%s trials=%ld seed=%llu leakage=%s\n",
                fmt_g(ex.cfg.R_M).c_str(), fmt_g(ex.cfg.R_I).c_str(), fmt_g(ex.cfg.R_J).c_str(),
                fmt_g(ex.cfg.eps).c_str(), ex.cfg.trials,
                (unsigned long long)ex.cfg.seed, ex.cfg.leakage_exact ? "exact" : "off");
    std::printf("note: asymptotic guarantees are not reproducible at desk-scale blocklengths;\n"
                "note: the contract of these numbers is trends and orderings across n.\n");
    for (const auto& r : res.rows) {
        std::printf("n=%d: N_I=%ld N_M=%ld N_J=%ld Pe=%s ci=%s distortion=%s", r.n, r.NI, r.NM,
                    r.NJ, fmt_g(r.Pe).c_str(), fmt_g(r.Pe_ci).c_str(),
                    fmt_g(r.distortion).c_str());
        if (r.leakage_method == "exact")
            std::printf(" leakage=%s nats/symbol (exact)\n", fmt_g(r.leakage).c_str());
        else
            std::printf(" leakage_method=off\n");
    }
    if (!out_path.empty()) {
        atomic_write_file(out_path, sim_csv(res));
        std::printf("wrote %s\n", out_path.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Rate-distortion region toolkit for state-dependent wiretap channels with a sensing"
        " encoder: frontier search, single-point evaluation, rate-system projection, and a"
        " desk-scale Monte-Carlo realization of the layered coding scheme. Set SECISAC_THREADS"
        " to pin the worker-thread count."};
    app.require_subcommand(1);

    std::string scenario, params, aux, out, mode, file, experiment;
    long gbudget = 200000, dbudget = 20000, trials = 0;
    uint64_t seed = 1;
    int nu = 2, nv = 2;
    std::vector<std::string> elim;
    std::vector<double> scheme;

    auto* gf = app.add_subcommand("gauss-frontier",
                                  "Trace the (D, R_M) frontier of a gaussian scenario");
    gf->add_option("--scenario", scenario, "scenario file (kind gaussian)")->required();
    gf->add_option("--mode", mode, "secrecy mode override: none|message_only|message_and_state");
    gf->add_option("--budget", gbudget, "rate-evaluation budget")->capture_default_str();
    gf->add_option("--seed", seed, "search seed")->capture_default_str();
    gf->add_option("--out", out, "output CSV path")->required();

    auto* ge = app.add_subcommand("gauss-eval", "Evaluate one gaussian auxiliary parameter set");
    ge->add_option("--scenario", scenario, "scenario file (kind gaussian)")->required();
    ge->add_option("--params", params, "auxiliary parameter file")->required();
    ge->add_option("--mode", mode, "secrecy mode override");

    auto* de = app.add_subcommand("dmc-eval", "Evaluate one finite-alphabet auxiliary channel");
    de->add_option("--scenario", scenario, "scenario file (kind dmc)")->required();
    de->add_option("--aux", aux, "auxiliary channel file")->required();
    de->add_option("--mode", mode, "secrecy mode: none|message_only|message_and_state");

    auto* ds = app.add_subcommand("dmc-search",
                                  "Search auxiliary channels for the (D, R_M) frontier");
    ds->add_option("--scenario", scenario, "scenario file (kind dmc)")->required();
    ds->add_option("--mode", mode, "secrecy mode (default none)");
    ds->add_option("--nu", nu, "auxiliary alphabet size |U|")->capture_default_str();
    ds->add_option("--nv", nv, "auxiliary alphabet size |V|")->capture_default_str();
    ds->add_option("--budget", dbudget, "region-evaluation budget")->capture_default_str();
    ds->add_option("--seed", seed, "search seed")->capture_default_str();
    ds->add_option("--out", out, "output CSV path")->required();

    auto* fm = app.add_subcommand("fme", "Project linear rate-inequality systems");
    fm->add_option("--file", file, "inequality file (vars header + one inequality per line)");
    fm->add_option("--eliminate", elim, "variable(s) to eliminate, in order");
    fm->add_option("--scheme", scheme,
                   "five mutual informations: I(U;S) I(U,V;S) I(V;Xi,Z|U) I(U,V;Y) I(V;Y|U)")
        ->expected(5);

    auto* sim = app.add_subcommand("simulate", "Run the desk-scale coding experiment");
    sim->add_option("--experiment", experiment, "experiment file")->required();
    auto* seed_opt = sim->add_option("--seed", seed, "master seed override");
    auto* trials_opt = sim->add_option("--trials", trials, "trial-count override");
    sim->add_option("--out", out, "per-n aggregate CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);  // prints the message or the help text
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (gf->parsed()) return cmd_gauss_frontier(scenario, mode, gbudget, seed, out);
        if (ge->parsed()) return cmd_gauss_eval(scenario, params, mode);
        if (de->parsed()) return cmd_dmc_eval(scenario, aux, mode);
        if (ds->parsed()) return cmd_dmc_search(scenario, mode, nu, nv, dbudget, seed, out);
        if (fm->parsed()) {
            if (file.empty() && scheme.empty())
                throw std::invalid_argument("fme: provide --file or --scheme");
            return cmd_fme(file, elim, scheme);
        }
        if (sim->parsed())
            return cmd_simulate(experiment, seed, seed_opt->count() > 0, trials,
                                trials_opt->count() > 0, out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const infeasible_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::length_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCap;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
