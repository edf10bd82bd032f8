#pragma once
// Desk-scale Monte-Carlo realization of the layered random-coding scheme:
// superposition codebooks, likelihood encoding, memoryless input synthesis,
// robust-typicality decoding, symbol-wise reconstruction, and exact
// marginalization of the eavesdropper leakage for the fixed codebook.
//
// The asymptotic guarantees are not reproducible at n <= 12; the simulator's
// contract is trends and orderings, which the report states explicitly.

#include <cstdint>
#include <string>
#include <vector>

#include "secisac/dmc.hpp"
#include "secisac/util.hpp"

namespace secisac {

struct SimConfig {
    std::vector<int> n_values;
    double R_M = 0, R_I = 0, R_J = 0;  // nats per channel use
    double eps = 0.15;                 // robust-typicality slack
    long trials = 0;
    uint64_t seed = 1;
    bool leakage_exact = false;
    double leakage_cap = 1e7;        // |Z|^n * |Xi|^n * (message count)
    double codebook_cap = 1048576;   // total stored codeword symbols

    void validate() const;  // throws std::invalid_argument
};

// Single-letter tables the scheme operates on, all derived from the exact
// seven-coordinate joint of (scenario, aux).
struct SchemeTables {
    int nS = 0, nXi = 0, nU = 0, nV = 0, nX = 0, nY = 0, nZ = 0, nShat = 0;
    std::vector<double> P_S;      // [s]
    std::vector<double> P_Xi_S;   // [s][xi]
    std::vector<double> P_U;      // [u]
    std::vector<double> P_V_U;    // [u][v]
    std::vector<double> P_UV;     // [u][v]
    std::vector<double> P_S_UV;   // [u][v][s]; rows with zero P_UV mass left 0
    std::vector<double> P_X_UVS;  // [u][v][s][x]
    std::vector<double> P_Z_UVS;  // [u][v][s][z]
    std::vector<double> P_UVY;    // [u][v][y]
    std::vector<double> dist;     // [s][shat]
    std::vector<int> g;           // [u][v][y] -> shat
    double exact_distortion = 0;  // n=1 value under g
};
SchemeTables derive_tables(const DmcScenario& sc, const AuxChannel& aux);

struct Codebook {
    int n = 0;
    long NI = 0, NM = 0, NJ = 0;
    std::vector<int> u;  // [i][t]
    std::vector<int> v;  // [i][m][j][t]
    uint64_t seed = 0;

    int u_at(long i, int t) const { return u[(size_t)i * n + t]; }
    int v_at(long i, long m, long j, int t) const {
        return v[((((size_t)i * NM + m) * NJ + j) * n) + t];
    }
};

long codeword_count(int n, double rate);  // ceil(e^{nR}), >= 1

// Lower level i.i.d. P_U; upper level per-position P_{V|U} conditioned on the
// covering lower codeword. Throws std::length_error when the total symbol
// count exceeds cfg.codebook_cap, naming the offending dimension.
Codebook gen_codebooks(const SchemeTables& tb, int n, const SimConfig& cfg);

struct EncodeResult {
    bool ok = false;
    long i = 0, j = 0;
};
// Samples (i, j) proportional to prod_t P_{S|UV}(s_t | u_t(i), v_t(m,j|i)).
// All-zero weights -> ok=false (counted as a trial error by the caller).
EncodeResult likelihood_encode(const SchemeTables& tb, const Codebook& cb, long m,
                               const std::vector<int>& sn, Rng& rng);

// Per-position sampling of X ~ P_{X|UVS} and then (Y, Z) ~ P_{YZ|XS}.
void transmit(const SchemeTables& tb, const DmcScenario& sc, const Codebook& cb, long i, long m,
              long j, const std::vector<int>& sn, Rng& rng, std::vector<int>& xn,
              std::vector<int>& yn, std::vector<int>& zn);

struct DecodeResult {
    bool ok = false;
    long i = 0, j = 0, m = 0;
};
// Robust typicality against P_UVY: every cell count within eps * n * p of
// n * p, zero-probability cells required absent. Uniform pick among all
// typical triples; ok=false when there are none.
DecodeResult decode(const SchemeTables& tb, const Codebook& cb, const std::vector<int>& yn,
                    double eps, Rng& rng);

std::vector<int> reconstruct(const SchemeTables& tb, const Codebook& cb, long i, long m, long j,
                             const std::vector<int>& yn);
double mean_distortion(const SchemeTables& tb, const std::vector<int>& sn,
                       const std::vector<int>& shatn);

struct LeakageResult {
    double nats_per_symbol = 0;
    bool available = false;
};
// Exact I(M, Xi^n; Z^n)/n for the fixed codebook by marginalizing over
// (i, j, s^n). Returns available=false when |Z|^n * |Xi|^n * NM exceeds cap.
LeakageResult exact_leakage(const SchemeTables& tb, const Codebook& cb, double cap);

struct SimRow {
    int n = 0;
    long NI = 0, NM = 0, NJ = 0;
    long trials = 0, errors = 0, encoder_failures = 0, decode_failures = 0;
    double Pe = 0, Pe_ci = 0;
    double distortion = 0;
    double leakage = 0;  // nats per symbol; NaN when method is "off"
    std::string leakage_method = "off";
};
struct SimResult {
    std::vector<SimRow> rows;
};

// Per-n codebook + independent parallel trials with counter-derived RNG
// streams; bit-identical output for identical inputs and seed.
SimResult run_experiment(const DmcScenario& sc, const AuxChannel& aux, const SimConfig& cfg);

}  // namespace secisac
