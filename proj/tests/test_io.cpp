#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "secisac/io.hpp"
#include "secisac/util.hpp"

using namespace secisac;

namespace {

const char* kBinaryScenarioJson = R"({
  "kind": "dmc",
  "S": 2, "Xi": 2, "X": 2, "Y": 2, "Z": 2, "Shat": 2,
  "P_S": [0.5, 0.5],
  "P_Xi_S": [[1.0, 0.0], [0.0, 1.0]],
  "P_YZ_XS": [
    [[[0.72, 0.18], [0.08, 0.02]], [[0.08, 0.02], [0.72, 0.18]]],
    [[[0.02, 0.08], [0.18, 0.72]], [[0.18, 0.72], [0.02, 0.08]]]
  ],
  "distortion": [[0.0, 1.0], [1.0, 0.0]]
})";

const char* kFlipAuxJson = R"({
  "U": 1, "V": 2,
  "P_UVX_S": [
    [[[0.75, 0.0], [0.0, 0.25]]],
    [[[0.0, 0.25], [0.75, 0.0]]]
  ]
})";

std::string expect_throw_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    FAIL("expected invalid_argument");
    return "";
}

}  // namespace

TEST_CASE("gaussian scenario: defaults, overrides, secrecy mode, masking noise") {
    LoadedScenario sc = parse_scenario_text(R"({"kind": "gaussian"})");
    REQUIRE(sc.gaussian);
    CHECK(sc.gauss.P == 30.0);
    CHECK(sc.gauss.Q == 3.0);
    CHECK(sc.gauss.sigma2 == 1.0);
    CHECK(sc.gauss.sigma_e2 == 4.0);
    CHECK(sc.gauss.a == 0.7);
    CHECK(sc.gauss.b == 0.3);
    CHECK(sc.gauss.mode == SecrecyMode::message_and_state);
    CHECK_FALSE(sc.gauss.sigma_A2_unbounded);

    LoadedScenario sc2 = parse_scenario_text(
        R"({"kind": "gaussian", "P": 12.5, "secrecy_mode": "message_only", "sigma_A2": 2.0})");
    CHECK(sc2.gauss.P == 12.5);
    CHECK(sc2.gauss.mode == SecrecyMode::message_only);
    CHECK(sc2.gauss.sigma_A2 == 2.0);

    LoadedScenario sc3 =
        parse_scenario_text(R"({"kind": "gaussian", "sigma_A2": "unbounded"})");
    CHECK(sc3.gauss.sigma_A2_unbounded);

    CHECK_THROWS_AS((void)parse_scenario_text(R"({"kind": "gaussian", "sigma_A2": true})"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_scenario_text(R"({"kind": "gaussian", "sigma_A2": "huge"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_scenario_text(R"({"kind": "gaussian", "secrecy_mode": "best"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_scenario_text(R"({"kind": "gaussian", "P": -3})"),
                    std::invalid_argument);
}

TEST_CASE("scenario kind dispatch and unknown keys") {
    std::string msg = expect_throw_message(
        [] { (void)parse_scenario_text(R"({"kind": "gaussian", "powre": 30})"); });
    CHECK(msg.find("powre") != std::string::npos);
    CHECK(msg.find("gaussian scenario") != std::string::npos);

    CHECK_THROWS_AS((void)parse_scenario_text(R"({"kind": "quantum"})"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_scenario_text(R"({"P": 30})"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_scenario_text("not json at all"), std::invalid_argument);
}

TEST_CASE("dmc scenario parse lands every entry at the right flat index") {
    LoadedScenario sc = parse_scenario_text(kBinaryScenarioJson);
    REQUIRE_FALSE(sc.gaussian);
    const DmcScenario& d = sc.dmc;
    CHECK(d.nY == 2);
    // spot checks across the [x][s][y][z] layout
    CHECK(d.P_YZ_XS[0] == 0.72);                             // x0 s0 y0 z0
    CHECK(d.P_YZ_XS[((size_t)0 * 2 + 1) * 4 + 2] == 0.72);   // x0 s1 y1 z0
    CHECK(d.P_YZ_XS[((size_t)1 * 2 + 0) * 4 + 3] == 0.72);   // x1 s0 y1 z1
    CHECK(d.P_YZ_XS[((size_t)1 * 2 + 1) * 4 + 1] == 0.72);   // x1 s1 y0 z1
    CHECK(d.P_Xi_S[0] == 1.0);
    CHECK(d.dist[1] == 1.0);
}

TEST_CASE("dmc scenario errors name the offending row") {
    std::string bad = kBinaryScenarioJson;
    size_t pos = bad.find("[[[0.02, 0.08], [0.18, 0.72]]");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 29, "[[[0.02, 0.08], [0.18, 0.62]]");  // x=1 s=0 sums to 0.9
    std::string msg = expect_throw_message([&] { (void)parse_scenario_text(bad); });
    CHECK(msg.find("P_YZ_XS") != std::string::npos);
    CHECK(msg.find("x=1") != std::string::npos);
    CHECK(msg.find("s=0") != std::string::npos);

    std::string shape = kBinaryScenarioJson;
    pos = shape.find("\"P_S\": [0.5, 0.5]");
    shape.replace(pos, 17, "\"P_S\": [0.5, 0.25, 0.25]");
    msg = expect_throw_message([&] { (void)parse_scenario_text(shape); });
    CHECK(msg.find("P_S") != std::string::npos);
    CHECK(msg.find("length 2") != std::string::npos);
}

TEST_CASE("gaussian params require the full key set") {
    AuxParams p = parse_gauss_params_text(
        R"({"sigma_T2": 30.0, "sigma_F2": 0.0, "sigma_G2": 0.0, "delta": 0.0,
            "alpha": 0.967741935483871, "epsilon": 0.0, "gamma": 0.0})");
    CHECK(p.sT2 == 30.0);
    CHECK(p.alpha == 0.967741935483871);
    CHECK(p.eps == 0.0);

    std::string msg = expect_throw_message([] {
        (void)parse_gauss_params_text(
            R"({"sigma_T2": 30.0, "sigma_F2": 0.0, "sigma_G2": 0.0, "delta": 0.0,
                "alpha": 0.9, "epsilon": 0.0})");
    });
    CHECK(msg.find("gamma") != std::string::npos);
    CHECK_THROWS_AS((void)parse_gauss_params_text(R"({"sigma_T2": 1, "power": 2})"),
                    std::invalid_argument);
}

TEST_CASE("aux channel parse validates against the scenario dimensions") {
    DmcScenario d = parse_scenario_text(kBinaryScenarioJson).dmc;
    AuxChannel aux = parse_aux_text(kFlipAuxJson, d);
    CHECK(aux.nU == 1);
    CHECK(aux.nV == 2);
    CHECK(aux.P_UVX_S[0] == 0.75);   // s0 u0 v0 x0
    CHECK(aux.P_UVX_S[7] == 0.0);    // s1 u0 v1 x1

    std::string wrong = R"({"U": 1, "V": 2, "P_UVX_S": [
        [[[0.75, 0.0], [0.0, 0.25]]]
    ]})";  // only one state row
    std::string msg = expect_throw_message([&] { (void)parse_aux_text(wrong, d); });
    CHECK(msg.find("P_UVX_S") != std::string::npos);
    CHECK(msg.find("for s") != std::string::npos);

    std::string leaky = R"({"U": 1, "V": 2, "P_UVX_S": [
        [[[0.75, 0.0], [0.0, 0.35]]],
        [[[0.0, 0.25], [0.75, 0.0]]]
    ]})";  // s=0 block sums to 1.1
    CHECK_THROWS_AS((void)parse_aux_text(leaky, d), std::invalid_argument);
}

TEST_CASE("experiment document round-trips into a runnable config") {
    std::string text = std::string(R"({
      "scenario": )") + kBinaryScenarioJson + R"(,
      "aux": )" + kFlipAuxJson + R"(,
      "n_values": [2, 4],
      "R_M": 0.17, "R_I": 0.0, "R_J": 0.14,
      "epsilon": 0.5,
      "trials": 100,
      "seed": 7,
      "leakage": "exact"
    })";
    Experiment ex = parse_experiment_text(text);
    CHECK(ex.sc.nY == 2);
    CHECK(ex.aux.nV == 2);
    CHECK(ex.cfg.n_values == std::vector<int>{2, 4});
    CHECK(ex.cfg.R_M == 0.17);
    CHECK(ex.cfg.R_J == 0.14);
    CHECK(ex.cfg.eps == 0.5);
    CHECK(ex.cfg.trials == 100);
    CHECK(ex.cfg.seed == 7);
    CHECK(ex.cfg.leakage_exact);
}

TEST_CASE("experiment document rejects bad structure with specifics") {
    std::string gauss = R"({
      "scenario": {"kind": "gaussian"},
      "aux": {"U": 1, "V": 1, "P_UVX_S": [[[[1.0]]]]},
      "n_values": [2], "R_M": 0, "R_I": 0, "R_J": 0, "trials": 10
    })";
    std::string msg = expect_throw_message([&] { (void)parse_experiment_text(gauss); });
    CHECK(msg.find("dmc") != std::string::npos);

    std::string base = std::string(R"({"scenario": )") + kBinaryScenarioJson +
                       R"(, "aux": )" + kFlipAuxJson;
    CHECK_THROWS_AS((void)parse_experiment_text(
                        base + R"(, "n_values": [2.5], "R_M": 0, "R_I": 0, "R_J": 0, "trials": 5})"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_experiment_text(
                        base + R"(, "n_values": [2], "R_M": 0, "R_I": 0, "R_J": 0, "trials": 5,
                        "leakage": "sometimes"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_experiment_text(
                        base + R"(, "n_values": [2], "R_M": 0, "R_I": 0, "R_J": 0, "trials": 5,
                        "typo": 1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_experiment_text(
                        base + R"(, "n_values": [2], "R_M": 0, "R_I": 0, "R_J": 0, "trials": 0})"),
                    std::invalid_argument);
}

TEST_CASE("inequality grammar: header, terms, senses, comments") {
    LinIneqSystem sys = parse_ineq_text(
        "# rate region slice\n"
        "vars R_I R_J\n"
        "2 R_I + 1 R_J <= 0.5\n"
        "1 R_J - 0.25 R_I >= 0.1   # lower bound\n"
        "\n");
    REQUIRE(sys.vars == std::vector<std::string>{"R_I", "R_J"});
    REQUIRE(sys.rows.size() == 2);
    CHECK(sys.rows[0].c == std::vector<double>{2.0, 1.0});
    CHECK(sys.rows[0].rhs == 0.5);
    CHECK(sys.rows[1].c == std::vector<double>{0.25, -1.0});  // >= stored negated
    CHECK(sys.rows[1].rhs == -0.1);

    LinIneqSystem empty = parse_ineq_text("");
    CHECK(empty.vars.empty());
    CHECK(empty.rows.empty());
    CHECK(parse_ineq_text("# only comments\n\n").rows.empty());
}

TEST_CASE("inequality grammar errors carry line numbers") {
    std::string msg =
        expect_throw_message([] { (void)parse_ineq_text("1 R_I <= 0.5\n"); });
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("vars") != std::string::npos);

    msg = expect_throw_message(
        [] { (void)parse_ineq_text("vars R_I\n1 BOGUS <= 0.5\n"); });
    CHECK(msg == "line 2: unknown variable 'BOGUS'");

    CHECK_THROWS_AS((void)parse_ineq_text("vars R_I R_I\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_ineq_text("vars R_I\nx R_I <= 1\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_ineq_text("vars R_I\n1 R_I <= \n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_ineq_text("vars R_I\n1 R_I <= 1 junk\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_ineq_text("vars R_I\n1 R_I = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_ineq_text("vars R_I\n1 <= 1\n"), std::invalid_argument);
}

TEST_CASE("gaussian frontier csv layout is stable") {
    RegionPoint p;
    p.mode = SecrecyMode::none;
    p.D = 0.25;
    p.R = 0.5;
    p.params = AuxParams{};
    p.power_used = 0;
    std::string csv = frontier_csv({p});
    CHECK(csv ==
          "mode,D,R_M_nats,R_M_bits,sigma_T2,sigma_F2,sigma_G2,delta,alpha,epsilon,gamma,"
          "power_used\n"
          "none,0.25,0.5,0.721347520444,0,0,0,0,0,0,0,0\n");
    CHECK(frontier_csv({}).find('\n') == frontier_csv({}).size() - 1);  // header only
}

TEST_CASE("dmc frontier csv reuses the schema with empty parameter columns") {
    DmcRegionPoint p;
    p.mode = DmcMode::message_and_state;
    p.D = 0.25;
    p.R = 0.5;
    std::string csv = dmc_frontier_csv({p});
    CHECK(csv ==
          "mode,D,R_M_nats,R_M_bits,sigma_T2,sigma_F2,sigma_G2,delta,alpha,epsilon,gamma,"
          "power_used\n"
          "message_and_state,0.25,0.5,0.721347520444,,,,,,,,\n");
}

TEST_CASE("sim csv blanks unavailable leakage") {
    SimResult res;
    SimRow r;
    r.n = 4;
    r.Pe = 0.5;
    r.Pe_ci = 0.125;
    r.distortion = 0.25;
    r.leakage = std::nan("");
    r.leakage_method = "off";
    res.rows.push_back(r);
    SimRow e = r;
    e.n = 6;
    e.leakage = 0.125;
    e.leakage_method = "exact";
    res.rows.push_back(e);
    CHECK(sim_csv(res) ==
          "n,Pe,Pe_ci,distortion,leakage_nats_per_symbol,leakage_method\n"
          "4,0.5,0.125,0.25,,off\n"
          "6,0.5,0.125,0.25,0.125,exact\n");
}

TEST_CASE("atomic file writes leave no droppings and replace contents") {
    namespace fs = std::filesystem;
    std::string dir = fs::temp_directory_path() / "secisac_io_test";
    fs::create_directories(dir);
    std::string path = dir + "/out.csv";
    atomic_write_file(path, "first\n");
    CHECK(read_file(path) == "first\n");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    atomic_write_file(path, "second\n");
    CHECK(read_file(path) == "second\n");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    fs::remove_all(dir);

    std::string msg = expect_throw_message([] { (void)read_file("/nonexistent/nope.json"); });
    CHECK(msg.find("/nonexistent/nope.json") != std::string::npos);
}

TEST_CASE("file loaders surface the path on open failure") {
    CHECK_THROWS_AS((void)load_scenario_file("/nonexistent/sc.json"), std::invalid_argument);
    CHECK_THROWS_AS((void)load_experiment_file("/nonexistent/ex.json"), std::invalid_argument);
    DmcScenario d = parse_scenario_text(kBinaryScenarioJson).dmc;
    CHECK_THROWS_AS((void)load_aux_file("/nonexistent/aux.json", d), std::invalid_argument);
    CHECK_THROWS_AS((void)load_gauss_params_file("/nonexistent/p.json"), std::invalid_argument);
}
