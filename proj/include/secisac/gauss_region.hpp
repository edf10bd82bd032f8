#pragma once
// The Gaussian scenario: state-dependent channel Y = X + S + N with
// eavesdropper Z = aX + bS + N_e, masked state Xi = S + A, and the auxiliary
// family U = F + delta*S + G, V = T + alpha*S + G, X = T + F + eps*G + gamma*S
// under the average power constraint sT2 + sF2 + eps^2*sG2 + gamma^2*Q <= P.
// Evaluates the achievable message rate per secrecy mode and the MMSE sensing
// distortion, and traces the (D, R_M) frontier by seeded multi-start search.

#include <cstdint>
#include <string>
#include <vector>

#include "secisac/gauss.hpp"

namespace secisac {

enum class SecrecyMode { none, message_only, message_and_state };

std::string mode_name(SecrecyMode m);
SecrecyMode mode_from_name(const std::string& s);

struct ScenarioConfig {
    double P = 30, Q = 3, sigma2 = 1, sigma_e2 = 4;
    double a = 0.7, b = 0.3;
    SecrecyMode mode = SecrecyMode::message_and_state;
    double sigma_A2 = 0;        // masking-noise variance; ignored if unbounded
    bool sigma_A2_unbounded = false;  // Xi degenerates to a constant

    void validate() const;  // throws std::invalid_argument
};

struct AuxParams {
    double sT2 = 0, sF2 = 0, sG2 = 0;
    double delta = 0, alpha = 0, eps = 0, gamma = 0;

    double power_used(double Q) const { return sT2 + sF2 + eps * eps * sG2 + gamma * gamma * Q; }
};

struct RateTerms {
    double i_uvy = 0, i_uvs = 0, i_vy_u = 0, i_sec_u = 0, i_uy = 0, i_us = 0;
    double e1 = 0, e2 = 0;      // e2 meaningful only under a secrecy mode
    double rate = 0;            // clamped at 0
    bool feasible = true;       // Xi independent of (U,Z) when required
    double independence_residual = 0;  // max |cross-covariance|
};

GaussianSystem build_system(const ScenarioConfig& cfg, const AuxParams& p);

// Hard substitutions forced by the Gaussian independence requirement
// Xi _||_ (U, Z): Cov(Xi,Z) = (a*gamma + b)*Q and Cov(Xi,U) = delta*Q must
// vanish, so gamma = -b/a and delta = 0 whenever the state-secrecy constraint
// is active with finite masking noise.
struct SecrecySubstitutions {
    bool active = false;
    double gamma = 0, delta = 0;
};
SecrecySubstitutions secrecy_substitutions(const ScenarioConfig& cfg, SecrecyMode mode);

RateTerms eval_terms(const ScenarioConfig& cfg, const AuxParams& p, SecrecyMode mode);
double eval_rate(const ScenarioConfig& cfg, const AuxParams& p, SecrecyMode mode);
double eval_distortion(const ScenarioConfig& cfg, const AuxParams& p);

struct RegionPoint {
    SecrecyMode mode;
    double D = 0, R = 0;
    AuxParams params;
    double power_used = 0;
    double slack_e1 = 0, slack_e2 = 0, slack_power = 0;
    double independence_residual = 0;
};

struct SearchConfig {
    long budget = 200000;  // cap on rate evaluations
    uint64_t seed = 1;
    int buckets = 64;          // log-spaced distortion buckets
    int refine_top = 32;       // refinement starts per bucket
    double bucket_lo = 0.01;   // bucket range [bucket_lo, Q]
};

struct FrontierResult {
    std::vector<RegionPoint> points;  // concave-envelope vertices, D ascending
    long evaluated = 0;
    long infeasible_discarded = 0;
};

// Deterministic given (cfg, mode, search.seed). All three mode objectives are
// refined from the same candidate pool and every visited parameter vector is
// evaluated under the requested mode, which makes the frontiers pointwise
// comparable across modes run with the same seed.
FrontierResult frontier(const ScenarioConfig& cfg, SecrecyMode mode, const SearchConfig& search);

}  // namespace secisac
