#pragma once
// Exact finite-alphabet evaluation: joint pmf assembly over the seven-tuple
// (S, Xi, U, V, X, Y, Z), plug-in information quantities, the Xi _||_ (U,Z)
// feasibility residual, the posterior-optimal reconstruction map, and seeded
// randomized search over auxiliary channels P_{UVX|S}.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace secisac {

struct DmcScenario {
    int nS = 0, nXi = 0, nX = 0, nY = 0, nZ = 0, nShat = 0;
    std::vector<double> P_S;      // [s]
    std::vector<double> P_Xi_S;   // [s][xi]
    std::vector<double> P_YZ_XS;  // [x][s][y][z]
    std::vector<double> dist;     // [s][shat], finite, >= 0

    void validate() const;  // throws std::invalid_argument naming the bad row
};

struct AuxChannel {
    int nU = 0, nV = 0;
    std::vector<double> P_UVX_S;  // [s][u][v][x]

    void validate(const DmcScenario& sc) const;
};

// coordinate order: S, Xi, U, V, X, Y, Z
enum Coord : int { cS = 0, cXi = 1, cU = 2, cV = 3, cX = 4, cY = 5, cZ = 6 };

struct Joint {
    std::array<int, 7> dim{};
    std::vector<double> p;  // row-major over the coordinate order above

    size_t size() const { return p.size(); }
};

Joint assemble_joint(const DmcScenario& sc, const AuxChannel& aux);

// Marginal entropy of the coordinates in `mask` (bit i set = coordinate i), nats.
double entropy(const Joint& j, unsigned mask);

// I(A;B|C) from the exact table; masks must be pairwise disjoint. Clamped >= 0.
double info(const Joint& j, unsigned maskA, unsigned maskB, unsigned maskC = 0);

// I(Xi; U,Z) — the state-secrecy feasibility residual.
double independence_residual(const Joint& j);

struct Reconstruction {
    std::vector<int> g;       // [u][v][y] -> shat
    double expected_distortion = 0;
};
Reconstruction optimal_g(const DmcScenario& sc, const Joint& j);

enum class DmcMode { none, message_only, message_and_state };
std::string dmc_mode_name(DmcMode m);
DmcMode dmc_mode_from_name(const std::string& s);

struct DmcRegionPoint {
    DmcMode mode = DmcMode::none;
    double R = 0, D = 0;
    double e1 = 0, e2 = 0;
    double i_uvy = 0, i_uvs = 0, i_vy_u = 0, i_sec_u = 0, i_uy = 0, i_us = 0;
    double pair_min = 0;  // min of the two-sided projection forms
    double residual = 0;  // I(Xi;U,Z)
    bool feasible = true;
    bool achievable = false;  // feasible and both rate bounds >= 0
    AuxChannel aux;
};

// Evaluates one auxiliary channel. Asserts (throws std::logic_error) if the
// secrecy bound's min-form and the projected-pair form disagree beyond 1e-9.
DmcRegionPoint eval_region(const DmcScenario& sc, const AuxChannel& aux, DmcMode mode);

struct DmcSearchConfig {
    int nU = 2, nV = 2;
    long budget = 20000;  // cap on eval_region calls
    uint64_t seed = 1;
    int buckets = 64;
    int refine_top = 32;
    double table_cap = 1e7;  // joint-table entry cap
};

struct DmcFrontier {
    std::vector<DmcRegionPoint> points;
    long evaluated = 0;
    long infeasible_discarded = 0;
};

// Dirichlet multi-start plus deterministic-table enumeration and corner line
// searches; deterministic given seed, shared pool across mode objectives.
DmcFrontier search_aux(const DmcScenario& sc, DmcMode mode, const DmcSearchConfig& cfg);

}  // namespace secisac
