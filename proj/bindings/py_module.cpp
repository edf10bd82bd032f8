// Python face of the toolkit. Documents in, documents out: every entry point
// takes and returns JSON text so the Python layer stays schema-identical to
// the CLI file formats.

#include <pybind11/pybind11.h>

#include <json.hpp>

#include "secisac/dmc.hpp"
#include "secisac/fme.hpp"
#include "secisac/gauss_region.hpp"
#include "secisac/io.hpp"
#include "secisac/sim.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace secisac;

namespace {

json terms_json(const RateTerms& t) {
    return json{{"I_UV_Y", t.i_uvy},   {"I_UV_S", t.i_uvs}, {"I_V_Y_given_U", t.i_vy_u},
                {"I_V_XiZ_given_U", t.i_sec_u}, {"I_U_Y", t.i_uy},   {"I_U_S", t.i_us},
                {"e1", t.e1},          {"e2", t.e2}};
}

std::string gauss_eval_json(const std::string& scenario, const std::string& params,
                            const std::string& mode_flag) {
    ScenarioConfig cfg = parse_scenario_text(scenario).gauss;
    if (!parse_scenario_text(scenario).gaussian)
        throw std::invalid_argument("gauss_eval needs a gaussian scenario");
    SecrecyMode mode = mode_flag.empty() ? cfg.mode : mode_from_name(mode_flag);
    AuxParams p = parse_gauss_params_text(params);
    RateTerms t = eval_terms(cfg, p, mode);
    json out = terms_json(t);
    out["mode"] = mode_name(mode);
    out["R_M"] = t.rate;
    out["D"] = eval_distortion(cfg, p);
    out["power_used"] = p.power_used(cfg.Q);
    out["independence_residual"] = t.independence_residual;
    out["feasible"] = t.feasible;
    return out.dump();
}

std::string gauss_frontier_json(const std::string& scenario, const std::string& mode_flag,
                                long budget, uint64_t seed) {
    LoadedScenario ls = parse_scenario_text(scenario);
    if (!ls.gaussian) throw std::invalid_argument("gauss_frontier needs a gaussian scenario");
    SecrecyMode mode = mode_flag.empty() ? ls.gauss.mode : mode_from_name(mode_flag);
    SearchConfig search;
    search.budget = budget;
    search.seed = seed;
    FrontierResult res = frontier(ls.gauss, mode, search);
    json pts = json::array();
    for (const auto& p : res.points)
        pts.push_back(json{{"mode", mode_name(p.mode)},
                           {"D", p.D},
                           {"R_M", p.R},
                           {"params",
                            {{"sigma_T2", p.params.sT2},
                             {"sigma_F2", p.params.sF2},
                             {"sigma_G2", p.params.sG2},
                             {"delta", p.params.delta},
                             {"alpha", p.params.alpha},
                             {"epsilon", p.params.eps},
                             {"gamma", p.params.gamma}}},
                           {"power_used", p.power_used}});
    return json{{"points", pts}, {"evaluated", res.evaluated}}.dump();
}

std::string dmc_eval_json(const std::string& scenario, const std::string& aux,
                          const std::string& mode_flag) {
    LoadedScenario ls = parse_scenario_text(scenario);
    if (ls.gaussian) throw std::invalid_argument("dmc_eval needs a dmc scenario");
    AuxChannel a = parse_aux_text(aux, ls.dmc);
    DmcMode mode = mode_flag.empty() ? DmcMode::message_and_state : dmc_mode_from_name(mode_flag);
    DmcRegionPoint pt = eval_region(ls.dmc, a, mode);
    return json{{"mode", dmc_mode_name(mode)},
                {"R_M", pt.R},
                {"D", pt.D},
                {"e1", pt.e1},
                {"e2", pt.e2},
                {"I_UV_Y", pt.i_uvy},
                {"I_UV_S", pt.i_uvs},
                {"I_V_Y_given_U", pt.i_vy_u},
                {"I_V_XiZ_given_U", pt.i_sec_u},
                {"I_U_Y", pt.i_uy},
                {"I_U_S", pt.i_us},
                {"independence_residual", pt.residual},
                {"feasible", pt.feasible}}
        .dump();
}

std::string dmc_search_json(const std::string& scenario, const std::string& mode_flag, int nu,
                            int nv, long budget, uint64_t seed) {
    LoadedScenario ls = parse_scenario_text(scenario);
    if (ls.gaussian) throw std::invalid_argument("dmc_search needs a dmc scenario");
    DmcMode mode = mode_flag.empty() ? DmcMode::none : dmc_mode_from_name(mode_flag);
    DmcSearchConfig cfg;
    cfg.nU = nu;
    cfg.nV = nv;
    cfg.budget = budget;
    cfg.seed = seed;
    DmcFrontier res = search_aux(ls.dmc, mode, cfg);
    json pts = json::array();
    for (const auto& p : res.points)
        pts.push_back(json{{"mode", dmc_mode_name(p.mode)}, {"D", p.D}, {"R_M", p.R}});
    return json{{"points", pts}, {"evaluated", res.evaluated}}.dump();
}

std::string fme_scheme_json(double i_us, double i_uvs, double i_vxz_u, double i_uvy,
                            double i_vy_u) {
    SchemeProjection pr = project_scheme_rates({i_us, i_uvs, i_vxz_u, i_uvy, i_vy_u});
    return json{{"bound", pr.fme_bound},
                {"closed_forms", {pr.closed_form[0], pr.closed_form[1], pr.closed_form[2]}},
                {"closed_form_min", pr.closed_form_min},
                {"projected", pr.projected.to_text()}}
        .dump();
}

std::string simulate_json(const std::string& experiment) {
    Experiment ex = parse_experiment_text(experiment);
    SimResult res = run_experiment(ex.sc, ex.aux, ex.cfg);
    json rows = json::array();
    for (const auto& r : res.rows) {
        json row{{"n", r.n},
                 {"N_I", r.NI},
                 {"N_M", r.NM},
                 {"N_J", r.NJ},
                 {"Pe", r.Pe},
                 {"Pe_ci", r.Pe_ci},
                 {"distortion", r.distortion},
                 {"leakage_method", r.leakage_method}};
        if (r.leakage_method == "exact") row["leakage_nats_per_symbol"] = r.leakage;
        rows.push_back(std::move(row));
    }
    return json{{"rows", rows}}.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "achievable rate-distortion regions for state-dependent wiretap channels";
    m.def("gauss_eval_json", &gauss_eval_json, py::arg("scenario"), py::arg("params"),
          py::arg("mode") = "");
    m.def("gauss_frontier_json", &gauss_frontier_json, py::arg("scenario"), py::arg("mode") = "",
          py::arg("budget") = 200000L, py::arg("seed") = 1ULL,
          py::call_guard<py::gil_scoped_release>());
    m.def("dmc_eval_json", &dmc_eval_json, py::arg("scenario"), py::arg("aux"),
          py::arg("mode") = "");
    m.def("dmc_search_json", &dmc_search_json, py::arg("scenario"), py::arg("mode") = "",
          py::arg("nu") = 2, py::arg("nv") = 2, py::arg("budget") = 20000L, py::arg("seed") = 1ULL,
          py::call_guard<py::gil_scoped_release>());
    m.def("fme_scheme_json", &fme_scheme_json, py::arg("i_us"), py::arg("i_uvs"),
          py::arg("i_vxz_u"), py::arg("i_uvy"), py::arg("i_vy_u"));
    m.def("simulate_json", &simulate_json, py::arg("experiment"),
          py::call_guard<py::gil_scoped_release>());
}
