#pragma once
// File formats: JSON scenario/params/aux/experiment documents (strict keys,
// schema errors name the offending key or table row) and the plain-text
// inequality grammar. CSV emitters produce byte-stable output.

#include <string>
#include <vector>

#include "secisac/dmc.hpp"
#include "secisac/fme.hpp"
#include "secisac/gauss_region.hpp"
#include "secisac/sim.hpp"

namespace secisac {

struct LoadedScenario {
    bool gaussian = false;
    ScenarioConfig gauss;
    DmcScenario dmc;
};

LoadedScenario load_scenario_file(const std::string& path);
LoadedScenario parse_scenario_text(const std::string& text, const std::string& what = "scenario");
AuxParams load_gauss_params_file(const std::string& path);
AuxParams parse_gauss_params_text(const std::string& text,
                                  const std::string& what = "gaussian params");
AuxChannel load_aux_file(const std::string& path, const DmcScenario& sc);
AuxChannel parse_aux_text(const std::string& text, const DmcScenario& sc,
                          const std::string& what = "aux channel");

struct Experiment {
    DmcScenario sc;
    AuxChannel aux;
    SimConfig cfg;
};
Experiment load_experiment_file(const std::string& path);
Experiment parse_experiment_text(const std::string& text,
                                 const std::string& what = "experiment");

// One inequality per line, `2 R_I + 1 R_J <= 0.5`; variables declared up
// front by a `vars R_I R_J R_M` header line. '#' starts a comment.
LinIneqSystem parse_ineq_text(const std::string& text);

std::string read_file(const std::string& path);

std::string frontier_csv(const std::vector<RegionPoint>& pts);
std::string dmc_frontier_csv(const std::vector<DmcRegionPoint>& pts);
std::string sim_csv(const SimResult& res);

}  // namespace secisac
