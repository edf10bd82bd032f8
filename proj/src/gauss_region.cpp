#include "secisac/gauss_region.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "secisac/util.hpp"

namespace secisac {

std::string mode_name(SecrecyMode m) {
    switch (m) {
        case SecrecyMode::none: return "none";
        case SecrecyMode::message_only: return "message_only";
        case SecrecyMode::message_and_state: return "message_and_state";
    }
    return "?";
}

SecrecyMode mode_from_name(const std::string& s) {
    if (s == "none") return SecrecyMode::none;
    if (s == "message_only") return SecrecyMode::message_only;
    if (s == "message_and_state") return SecrecyMode::message_and_state;
    throw std::invalid_argument("unknown secrecy mode '" + s + "'");
}

void ScenarioConfig::validate() const {
    if (!(P > 0)) throw std::invalid_argument("scenario: P must be > 0");
    if (!(Q > 0)) throw std::invalid_argument("scenario: Q must be > 0");
    if (!(sigma2 > 0)) throw std::invalid_argument("scenario: sigma2 must be > 0");
    if (!(sigma_e2 > 0)) throw std::invalid_argument("scenario: sigma_e2 must be > 0");
    if (!sigma_A2_unbounded && sigma_A2 < 0)
        throw std::invalid_argument("scenario: sigma_A2 must be >= 0 or \"unbounded\"");
}

GaussianSystem build_system(const ScenarioConfig& cfg, const AuxParams& p) {
    if (p.sT2 < 0 || p.sF2 < 0 || p.sG2 < 0)
        throw std::invalid_argument("aux params: negative variance");
    double used = p.power_used(cfg.Q);
    if (used > cfg.P * (1 + 1e-12) + 1e-12)
        throw std::invalid_argument("aux params: power constraint violated (" +
                                    fmt_g(used) + " > " + fmt_g(cfg.P) + ")");

    BaseSources base;
    base.add("S", cfg.Q);
    base.add("A", cfg.sigma_A2_unbounded ? 0.0 : cfg.sigma_A2);
    base.add("T", p.sT2);
    base.add("F", p.sF2);
    base.add("G", p.sG2);
    base.add("N", cfg.sigma2);
    base.add("Ne", cfg.sigma_e2);
    const size_t k = base.size();
    auto lin = [&](std::initializer_list<std::pair<const char*, double>> terms) {
        LinearExpr e;
        e.c.assign(k, 0.0);
        for (const auto& t : terms) e.c[base.index(t.first)] += t.second;
        return e;
    };

    GaussianSystem sys(base);
    sys.define("S", lin({{"S", 1}}));
    if (cfg.sigma_A2_unbounded)
        sys.define("Xi", lin({}));  // masking noise swamps S: Xi carries nothing
    else
        sys.define("Xi", lin({{"S", 1}, {"A", 1}}));
    sys.define("U", lin({{"F", 1}, {"S", p.delta}, {"G", 1}}));
    sys.define("V", lin({{"T", 1}, {"S", p.alpha}, {"G", 1}}));
    sys.define("X", lin({{"T", 1}, {"F", 1}, {"G", p.eps}, {"S", p.gamma}}));
    sys.define("Y", lin({{"T", 1}, {"F", 1}, {"G", p.eps}, {"S", p.gamma + 1}, {"N", 1}}));
    sys.define("Z", lin({{"T", cfg.a}, {"F", cfg.a}, {"G", cfg.a * p.eps},
                         {"S", cfg.a * p.gamma + cfg.b}, {"Ne", 1}}));
    return sys;
}

SecrecySubstitutions secrecy_substitutions(const ScenarioConfig& cfg, SecrecyMode mode) {
    SecrecySubstitutions sub;
    if (mode != SecrecyMode::message_and_state || cfg.sigma_A2_unbounded) return sub;
    if (cfg.a == 0 && cfg.b != 0)
        throw infeasible_error(
            "infeasible: a=0 with b!=0 leaves no gamma making Z independent of Xi");
    sub.active = true;
    sub.gamma = cfg.a == 0 ? 0.0 : -cfg.b / cfg.a;
    sub.delta = 0.0;
    return sub;
}

RateTerms eval_terms(const ScenarioConfig& cfg, const AuxParams& p, SecrecyMode mode) {
    GaussianSystem sys = build_system(cfg, p);
    RateTerms t;
    t.i_uvy = mutual_info(sys, {"U", "V"}, {"Y"});
    t.i_uvs = mutual_info(sys, {"U", "V"}, {"S"});
    t.e1 = t.i_uvy - t.i_uvs;
    if (mode == SecrecyMode::none) {
        // no eavesdropper: only the Gelfand-Pinsker constraint remains
        t.rate = std::max(0.0, t.e1);
        t.e2 = t.e1;
        return t;
    }
    t.i_vy_u = cond_mutual_info(sys, {"V"}, {"Y"}, {"U"});
    t.i_uy = mutual_info(sys, {"U"}, {"Y"});
    t.i_us = mutual_info(sys, {"U"}, {"S"});
    bool state_secret = mode == SecrecyMode::message_and_state && !cfg.sigma_A2_unbounded;
    if (state_secret) {
        auto chk = check_independence(sys, "Xi", {"U", "Z"});
        t.independence_residual = chk.max_abs_cross_cov;
        t.feasible = chk.independent;
        t.i_sec_u = cond_mutual_info(sys, {"V"}, {"Xi", "Z"}, {"U"});
    } else {
        t.i_sec_u = cond_mutual_info(sys, {"V"}, {"Z"}, {"U"});
    }
    double balance = t.i_uy - t.i_us;  // -inf possible; never +inf (Y has own noise)
    t.e2 = t.i_vy_u - t.i_sec_u + std::min(0.0, balance);
    t.rate = t.feasible ? std::max(0.0, std::min(t.e1, t.e2)) : 0.0;
    return t;
}

double eval_rate(const ScenarioConfig& cfg, const AuxParams& p, SecrecyMode mode) {
    return eval_terms(cfg, p, mode).rate;
}

double eval_distortion(const ScenarioConfig& cfg, const AuxParams& p) {
    GaussianSystem sys = build_system(cfg, p);
    return mmse_distortion(sys, "S", {"U", "V", "Y"});
}

namespace {

// Scale codeword power down onto the constraint surface; the map keeps every
// parameter vector evaluable so samplers and line searches never throw.
AuxParams project_power(const ScenarioConfig& cfg, AuxParams p) {
    p.sT2 = std::max(0.0, p.sT2);
    p.sF2 = std::max(0.0, p.sF2);
    p.sG2 = std::max(0.0, p.sG2);
    double used = p.power_used(cfg.Q);
    if (used > cfg.P) {
        double t = cfg.P / used;
        p.sT2 *= t;
        p.sF2 *= t;
        p.sG2 *= t;
        p.gamma *= std::sqrt(t);
    }
    return p;
}

AuxParams apply_substitutions(const SecrecySubstitutions& sub, AuxParams p) {
    if (sub.active) {
        p.gamma = sub.gamma;
        p.delta = sub.delta;
    }
    return p;
}

AuxParams sample_params(const ScenarioConfig& cfg, Rng& rng) {
    AuxParams p;
    double gmax = std::sqrt(cfg.P / cfg.Q);
    p.sT2 = rng.uniform() * cfg.P;
    p.sF2 = rng.uniform() * cfg.P;
    p.sG2 = rng.uniform() * 2 * cfg.P;
    p.eps = rng.uniform(-2.5, 2.5);
    p.gamma = rng.uniform(-gmax, gmax);
    p.delta = rng.uniform(-2, 2);
    p.alpha = rng.uniform(-2, 2);
    return project_power(cfg, p);
}

std::vector<AuxParams> special_params(const ScenarioConfig& cfg) {
    std::vector<AuxParams> out;
    AuxParams zero;
    out.push_back(zero);
    AuxParams dpc;  // writing on dirty paper: full power on T, MMSE-weighted state bias
    dpc.sT2 = cfg.P;
    dpc.alpha = cfg.P / (cfg.P + cfg.sigma2);
    out.push_back(dpc);
    double g = std::sqrt(cfg.P / cfg.Q);
    AuxParams up = zero;   // uncoded amplification of S
    up.gamma = g;
    out.push_back(up);
    AuxParams un = zero;
    un.gamma = -g;
    out.push_back(un);
    if (cfg.a != 0) {      // uncoded state cancellation at the eavesdropper
        AuxParams us = zero;
        us.gamma = -cfg.b / cfg.a;
        out.push_back(us);
        AuxParams dpcs = dpc;  // dirty-paper layout inside the cancelling slice
        dpcs.gamma = us.gamma;
        dpcs.sT2 = std::max(0.0, cfg.P - us.gamma * us.gamma * cfg.Q);
        out.push_back(dpcs);
    }
    return out;
}

constexpr int kModeCount = 3;
constexpr double kBoundTol = 1e-12;

struct EvalRow {
    AuxParams p;
    double D = 0;
    double rate[kModeCount] = {0, 0, 0};   // none, message_only, message_and_state
    bool achievable[kModeCount] = {};      // feasible and both bounds >= 0
    bool infeasible[kModeCount] = {};      // independence requirement violated
};

}  // namespace

FrontierResult frontier(const ScenarioConfig& cfg, SecrecyMode mode, const SearchConfig& search) {
    cfg.validate();
    FrontierResult res;
    if (search.budget <= 0) return res;

    const SecrecySubstitutions sub = secrecy_substitutions(cfg, SecrecyMode::message_and_state);
    const SecrecyMode modes[kModeCount] = {SecrecyMode::none, SecrecyMode::message_only,
                                           SecrecyMode::message_and_state};
    const long budget = search.budget;

    // ---- candidate pool ------------------------------------------------
    // Closed-form corner layouts first so tiny budgets still yield the known
    // operating points, then uniform power-polytope samples; each parameter
    // vector is paired with its state-secrecy substituted copy so all three
    // mode objectives range over one common pool.
    std::vector<AuxParams> pool;
    auto pool_evals = [&] { return (long)pool.size() * kModeCount; };
    for (const auto& s : special_params(cfg)) {
        if (pool_evals() + kModeCount > budget) break;
        pool.push_back(project_power(cfg, s));
        if (pool_evals() + kModeCount > budget) break;
        pool.push_back(project_power(cfg, apply_substitutions(sub, s)));
    }
    if (pool.empty() && budget > 0) pool.push_back(AuxParams{});
    {
        Rng rng(derive_seed(search.seed, 0xA11CE));
        long target = budget / 2;  // pool phase gets about half the budget
        while (pool_evals() + 2 * kModeCount <= target) {
            AuxParams p = sample_params(cfg, rng);
            pool.push_back(p);
            pool.push_back(project_power(cfg, apply_substitutions(sub, p)));
        }
    }

    auto evaluate_pool = [&](const std::vector<AuxParams>& params) {
        std::vector<EvalRow> rows(params.size());
        parallel_for(params.size(), [&](size_t i) {
            EvalRow r;
            r.p = params[i];
            r.D = eval_distortion(cfg, r.p);
            for (int m = 0; m < kModeCount; ++m) {
                RateTerms t = eval_terms(cfg, r.p, modes[m]);
                r.rate[m] = t.rate;
                r.infeasible[m] = !t.feasible;
                r.achievable[m] = t.feasible && t.e1 >= -kBoundTol &&
                                  (modes[m] == SecrecyMode::none || t.e2 >= -kBoundTol);
            }
            rows[i] = r;
        });
        return rows;
    };

    std::vector<EvalRow> rows = evaluate_pool(pool);
    res.evaluated += pool_evals();

    // ---- bucketed refinement -------------------------------------------
    // The best candidates of each log-spaced distortion bucket get a
    // coordinate-wise golden-section polish, once per mode objective. Starts
    // are ordered bucket-rank first so a tight budget still refines every
    // bucket's best point. All probed vectors re-enter the shared pool.
    auto bucket_of = [&](double D) {
        double lo = std::log(search.bucket_lo), hi = std::log(cfg.Q);
        double x = std::log(std::min(std::max(D, search.bucket_lo), cfg.Q));
        int b = (int)((x - lo) / (hi - lo) * search.buckets);
        return std::min(std::max(b, 0), search.buckets - 1);
    };
    const int kIters = 12;
    const long kPerStart = 2L * 7 * (kIters + 3) + 2;  // two sweeps over seven coordinates
    long refine_per_mode = std::max<long>(0, (budget - res.evaluated) / kModeCount);
    double gmax = std::sqrt(cfg.P / cfg.Q);

    std::vector<AuxParams> refined;
    for (int m = 0; m < kModeCount; ++m) {
        std::vector<std::vector<std::pair<double, size_t>>> byb(search.buckets);
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i].achievable[m] && rows[i].rate[m] > 0)
                byb[bucket_of(rows[i].D)].push_back({rows[i].rate[m], i});
        for (auto& v : byb)
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
        std::vector<AuxParams> starts;  // rank-0 of every bucket, then rank-1, ...
        for (int k = 0; k < search.refine_top; ++k)
            for (const auto& v : byb)
                if ((size_t)k < v.size()) starts.push_back(rows[v[(size_t)k].second].p);
        size_t affordable = (size_t)std::max<long>(0, refine_per_mode / kPerStart);
        if (starts.size() > affordable) starts.resize(affordable);

        const bool fix_secret_coords = modes[m] == SecrecyMode::message_and_state && sub.active;
        std::vector<AuxParams> local(starts.size());
        std::vector<long> spent(starts.size(), 0);
        parallel_for(starts.size(), [&](size_t si) {
            AuxParams cur = fix_secret_coords ? apply_substitutions(sub, starts[si]) : starts[si];
            cur = project_power(cfg, cur);
            long n_eval = 0;
            auto obj = [&](const AuxParams& q) {
                ++n_eval;
                return eval_rate(cfg, project_power(cfg, q), modes[m]);
            };
            struct Coord { int id; double lo, hi; };
            const Coord coords[7] = {{0, 0, cfg.P},  {1, 0, cfg.P},  {2, 0, 4 * cfg.P},
                                     {3, -2, 2},     {4, -2.5, 2.5}, {5, -gmax, gmax},
                                     {6, -2, 2}};
            auto with = [&](int id, double v) {
                AuxParams q = cur;
                switch (id) {
                    case 0: q.sT2 = v; break;
                    case 1: q.sF2 = v; break;
                    case 2: q.sG2 = v; break;
                    case 3: q.alpha = v; break;
                    case 4: q.eps = v; break;
                    case 5: q.gamma = v; break;
                    case 6: q.delta = v; break;
                }
                return q;
            };
            double best = obj(cur);
            for (int sweep = 0; sweep < 2; ++sweep) {
                for (const auto& c : coords) {
                    if (fix_secret_coords && (c.id == 5 || c.id == 6)) continue;
                    double vstar = golden_max([&](double v) { return obj(with(c.id, v)); },
                                              c.lo, c.hi, kIters);
                    AuxParams cand = project_power(cfg, with(c.id, vstar));
                    double f = obj(cand);
                    if (f > best) {
                        best = f;
                        cur = cand;
                    }
                }
            }
            local[si] = cur;
            spent[si] = n_eval;
        });
        for (size_t si = 0; si < starts.size(); ++si) {
            refined.push_back(local[si]);
            res.evaluated += spent[si];
        }
    }

    if (!refined.empty()) {
        std::vector<EvalRow> extra = evaluate_pool(refined);
        res.evaluated += (long)extra.size() * kModeCount;
        rows.insert(rows.end(), extra.begin(), extra.end());
    }

    // ---- assemble the requested mode's frontier -------------------------
    const int mi = static_cast<int>(mode);
    std::vector<DRPoint> pts;
    pts.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].infeasible[mi]) ++res.infeasible_discarded;
        if (!rows[i].achievable[mi]) continue;
        pts.push_back({rows[i].D, rows[i].rate[mi], i});
    }
    std::vector<DRPoint> front = pareto_concave_frontier(std::move(pts));
    for (const auto& fp : front) {
        const EvalRow& r = rows[fp.tag];
        RegionPoint rp;
        rp.mode = mode;
        rp.D = r.D;
        rp.R = r.rate[mi];
        rp.params = r.p;
        rp.power_used = r.p.power_used(cfg.Q);
        RateTerms t = eval_terms(cfg, r.p, mode);
        rp.slack_e1 = std::max(0.0, t.e1 - t.rate);
        rp.slack_e2 = mode == SecrecyMode::none ? rp.slack_e1 : std::max(0.0, t.e2 - t.rate);
        rp.slack_power = cfg.P - rp.power_used;
        rp.independence_residual = t.independence_residual;
        res.points.push_back(rp);
    }
    return res;
}

}  // namespace secisac
