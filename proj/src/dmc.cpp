#include "secisac/dmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "secisac/util.hpp"

namespace secisac {

namespace {

constexpr double kSimplexTol = 1e-12;
constexpr double kResidualTol = 1e-9;
constexpr double kBoundTol = 1e-12;

void check_distribution(const std::vector<double>& p, size_t off, size_t len, const std::string& what) {
    double sum = 0;
    for (size_t i = 0; i < len; ++i) {
        double v = p[off + i];
        if (v < 0 || !std::isfinite(v))
            throw std::invalid_argument(what + ": entry " + std::to_string(i) + " is not a probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::invalid_argument(what + ": row sums to " + fmt_g(sum) + ", expected 1");
}

}  // namespace

void DmcScenario::validate() const {
    if (nS < 1 || nXi < 1 || nX < 1 || nY < 1 || nZ < 1 || nShat < 1)
        throw std::invalid_argument("scenario: all alphabet sizes must be >= 1");
    if ((int)P_S.size() != nS) throw std::invalid_argument("scenario: P_S length != |S|");
    check_distribution(P_S, 0, nS, "P_S");
    if ((int)P_Xi_S.size() != nS * nXi) throw std::invalid_argument("scenario: P_Xi_S shape mismatch");
    for (int s = 0; s < nS; ++s)
        check_distribution(P_Xi_S, (size_t)s * nXi, nXi, "P_Xi_S[s=" + std::to_string(s) + "]");
    if ((int)P_YZ_XS.size() != nX * nS * nY * nZ)
        throw std::invalid_argument("scenario: P_YZ_XS shape mismatch");
    for (int x = 0; x < nX; ++x)
        for (int s = 0; s < nS; ++s)
            check_distribution(P_YZ_XS, ((size_t)x * nS + s) * nY * nZ, (size_t)nY * nZ,
                               "P_YZ_XS[x=" + std::to_string(x) + "][s=" + std::to_string(s) + "]");
    if ((int)dist.size() != nS * nShat) throw std::invalid_argument("scenario: distortion table shape mismatch");
    for (double d : dist)
        if (!(d >= 0) || !std::isfinite(d))
            throw std::invalid_argument("scenario: distortion entries must be finite and >= 0");
}

void AuxChannel::validate(const DmcScenario& sc) const {
    if (nU < 1 || nV < 1) throw std::invalid_argument("aux: |U| and |V| must be >= 1");
    if ((int)P_UVX_S.size() != sc.nS * nU * nV * sc.nX)
        throw std::invalid_argument("aux: P_UVX_S shape mismatch");
    for (int s = 0; s < sc.nS; ++s)
        check_distribution(P_UVX_S, (size_t)s * nU * nV * sc.nX, (size_t)nU * nV * sc.nX,
                           "P_UVX_S[s=" + std::to_string(s) + "]");
}

Joint assemble_joint(const DmcScenario& sc, const AuxChannel& aux) {
    sc.validate();
    aux.validate(sc);
    Joint j;
    j.dim = {sc.nS, sc.nXi, aux.nU, aux.nV, sc.nX, sc.nY, sc.nZ};
    size_t total = 1;
    for (int d : j.dim) total *= (size_t)d;
    j.p.assign(total, 0.0);
    size_t idx = 0;
    double sum = 0;
    for (int s = 0; s < sc.nS; ++s)
        for (int xi = 0; xi < sc.nXi; ++xi)
            for (int u = 0; u < aux.nU; ++u)
                for (int v = 0; v < aux.nV; ++v)
                    for (int x = 0; x < sc.nX; ++x) {
                        double base = sc.P_S[(size_t)s] * sc.P_Xi_S[(size_t)s * sc.nXi + xi] *
                                      aux.P_UVX_S[(((size_t)s * aux.nU + u) * aux.nV + v) * sc.nX + x];
                        const double* ch = &sc.P_YZ_XS[((size_t)x * sc.nS + s) * sc.nY * sc.nZ];
                        for (int y = 0; y < sc.nY; ++y)
                            for (int z = 0; z < sc.nZ; ++z) {
                                double val = base * ch[(size_t)y * sc.nZ + z];
                                j.p[idx++] = val;
                                sum += val;
                            }
                    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::logic_error("assembled joint sums to " + fmt_g(sum));
    return j;
}

double entropy(const Joint& j, unsigned mask) {
    if (mask == 0) return 0.0;
    size_t msize = 1;
    for (int k = 0; k < 7; ++k)
        if (mask & (1u << k)) msize *= (size_t)j.dim[k];
    std::vector<double> marg(msize, 0.0);
    std::array<size_t, 7> stride{};  // stride of each coordinate inside the marginal
    {
        size_t acc = 1;
        for (int k = 6; k >= 0; --k) {
            if (mask & (1u << k)) {
                stride[(size_t)k] = acc;
                acc *= (size_t)j.dim[k];
            } else {
                stride[(size_t)k] = 0;
            }
        }
    }
    std::array<int, 7> c{};
    for (size_t idx = 0; idx < j.p.size(); ++idx) {
        size_t mi = 0;
        for (int k = 0; k < 7; ++k) mi += stride[(size_t)k] * (size_t)c[(size_t)k];
        marg[mi] += j.p[idx];
        for (int k = 6; k >= 0; --k) {
            if (++c[(size_t)k] < j.dim[(size_t)k]) break;
            c[(size_t)k] = 0;
        }
    }
    double h = 0;
    for (double v : marg)
        if (v > 0) h -= v * std::log(v);
    return h;
}

double info(const Joint& j, unsigned maskA, unsigned maskB, unsigned maskC) {
    if ((maskA & maskB) || (maskA & maskC) || (maskB & maskC))
        throw std::invalid_argument("info(): coordinate sets overlap");
    double v = entropy(j, maskA | maskC) + entropy(j, maskB | maskC) -
               entropy(j, maskA | maskB | maskC) - entropy(j, maskC);
    return v < 0 ? 0.0 : v;
}

double independence_residual(const Joint& j) {
    return info(j, 1u << cXi, (1u << cU) | (1u << cZ));
}

Reconstruction optimal_g(const DmcScenario& sc, const Joint& j) {
    const int nU = j.dim[cU], nV = j.dim[cV], nY = j.dim[cY];
    // P(s, u, v, y)
    std::vector<double> puvys((size_t)nU * nV * nY * sc.nS, 0.0);
    std::array<int, 7> c{};
    for (size_t idx = 0; idx < j.p.size(); ++idx) {
        size_t key = (((size_t)c[cU] * nV + c[cV]) * nY + c[cY]) * sc.nS + c[cS];
        puvys[key] += j.p[idx];
        for (int k = 6; k >= 0; --k) {
            if (++c[(size_t)k] < j.dim[(size_t)k]) break;
            c[(size_t)k] = 0;
        }
    }
    Reconstruction rec;
    rec.g.assign((size_t)nU * nV * nY, 0);
    double total = 0;
    for (size_t cell = 0; cell < (size_t)nU * nV * nY; ++cell) {
        const double* ps = &puvys[cell * sc.nS];
        double mass = 0;
        for (int s = 0; s < sc.nS; ++s) mass += ps[s];
        if (mass <= 0) {
            rec.g[cell] = 0;  // unreachable cell: first reconstruction symbol
            continue;
        }
        int best = 0;
        double bestcost = std::numeric_limits<double>::infinity();
        for (int sh = 0; sh < sc.nShat; ++sh) {
            double cost = 0;
            for (int s = 0; s < sc.nS; ++s) cost += ps[s] * sc.dist[(size_t)s * sc.nShat + sh];
            if (cost < bestcost - 0) {  // ties keep the smallest index
                bestcost = cost;
                best = sh;
            }
        }
        rec.g[cell] = best;
        total += bestcost;
    }
    rec.expected_distortion = total;
    return rec;
}

std::string dmc_mode_name(DmcMode m) {
    switch (m) {
        case DmcMode::none: return "none";
        case DmcMode::message_only: return "message_only";
        case DmcMode::message_and_state: return "message_and_state";
    }
    return "?";
}

DmcMode dmc_mode_from_name(const std::string& s) {
    if (s == "none") return DmcMode::none;
    if (s == "message_only") return DmcMode::message_only;
    if (s == "message_and_state") return DmcMode::message_and_state;
    throw std::invalid_argument("unknown secrecy mode '" + s + "'");
}

DmcRegionPoint eval_region(const DmcScenario& sc, const AuxChannel& aux, DmcMode mode) {
    Joint j = assemble_joint(sc, aux);
    DmcRegionPoint pt;
    pt.mode = mode;
    pt.aux = aux;
    const unsigned mU = 1u << cU, mV = 1u << cV, mS = 1u << cS, mY = 1u << cY,
                   mZ = 1u << cZ, mXi = 1u << cXi;
    pt.i_uvy = info(j, mU | mV, mY);
    pt.i_uvs = info(j, mU | mV, mS);
    pt.i_vy_u = info(j, mV, mY, mU);
    pt.i_uy = info(j, mU, mY);
    pt.i_us = info(j, mU, mS);
    pt.residual = independence_residual(j);
    pt.e1 = pt.i_uvy - pt.i_uvs;
    switch (mode) {
        case DmcMode::none:
            pt.i_sec_u = 0;
            pt.e2 = pt.e1;
            pt.feasible = true;
            break;
        case DmcMode::message_only:
            pt.i_sec_u = info(j, mV, mZ, mU);
            pt.feasible = true;
            break;
        case DmcMode::message_and_state:
            pt.i_sec_u = info(j, mV, mXi | mZ, mU);
            pt.feasible = pt.residual <= kResidualTol;
            break;
    }
    if (mode == DmcMode::none) {
        pt.R = std::max(0.0, pt.e1);
        pt.pair_min = pt.e1;
        pt.achievable = pt.e1 >= -kBoundTol;
    } else {
        pt.e2 = pt.i_vy_u - pt.i_sec_u + std::min(0.0, pt.i_uy - pt.i_us);
        // cross-check: the min-form must equal the projected two-bound pair
        pt.pair_min = std::min(pt.i_vy_u - pt.i_sec_u, pt.i_uvy - pt.i_sec_u - pt.i_us);
        if (std::abs(pt.e2 - pt.pair_min) > 1e-9)
            throw std::logic_error("min-form/projection mismatch: " + fmt_g(pt.e2) + " vs " +
                                   fmt_g(pt.pair_min));
        pt.R = pt.feasible ? std::max(0.0, std::min(pt.e1, pt.e2)) : 0.0;
        pt.achievable = pt.feasible && pt.e1 >= -kBoundTol && pt.e2 >= -kBoundTol;
    }
    Reconstruction rec = optimal_g(sc, j);
    pt.D = rec.expected_distortion;
    return pt;
}

namespace {

double max_distortion(const DmcScenario& sc) {
    double m = 0;
    for (double d : sc.dist) m = std::max(m, d);
    return m;
}

}  // namespace

DmcFrontier search_aux(const DmcScenario& sc, DmcMode mode, const DmcSearchConfig& cfg) {
    sc.validate();
    size_t joint_size = (size_t)sc.nS * sc.nXi * cfg.nU * cfg.nV * sc.nX * sc.nY * sc.nZ;
    if ((double)joint_size > cfg.table_cap)
        throw std::length_error(
            "joint table dimension |S|*|Xi|*|U|*|V|*|X|*|Y|*|Z| = " + std::to_string(joint_size) +
            " entries exceeds cap " + fmt_g(cfg.table_cap));
    DmcFrontier res;
    if (cfg.budget <= 0) return res;

    const int cell_dim = cfg.nU * cfg.nV * sc.nX;
    const DmcMode modes[3] = {DmcMode::none, DmcMode::message_only, DmcMode::message_and_state};

    auto make_aux = [&](const std::vector<double>& theta) {
        AuxChannel a;
        a.nU = cfg.nU;
        a.nV = cfg.nV;
        a.P_UVX_S = theta;
        return a;
    };

    // ---- candidate tables -----------------------------------------------
    std::vector<std::vector<double>> pool;
    long cap = cfg.budget;
    auto pool_evals = [&] { return (long)pool.size() * 3; };

    // canonical layouts: uniform table; V carries X uniformly; V carries the
    // state-shifted input (the usual binning layout when alphabets align)
    {
        std::vector<double> uni((size_t)sc.nS * cell_dim, 1.0 / cell_dim);
        pool.push_back(uni);
        if (cfg.nV >= sc.nX) {
            std::vector<double> vx((size_t)sc.nS * cell_dim, 0.0);
            for (int s = 0; s < sc.nS; ++s)
                for (int x = 0; x < sc.nX; ++x)
                    vx[(((size_t)s * cfg.nU + 0) * cfg.nV + x) * sc.nX + x] = 1.0 / sc.nX;
            pool.push_back(vx);
            std::vector<double> vxs((size_t)sc.nS * cell_dim, 0.0);
            for (int s = 0; s < sc.nS; ++s)
                for (int x = 0; x < sc.nX; ++x) {
                    int v = (x + s) % cfg.nV;
                    vxs[(((size_t)s * cfg.nU + 0) * cfg.nV + v) * sc.nX + x] += 1.0 / sc.nX;
                }
            pool.push_back(vxs);
        }
    }
    while (pool_evals() > cap && pool.size() > 1) pool.pop_back();

    // deterministic tables for tiny alphabets: every map S -> (u,v,x)
    {
        double combos = std::pow((double)cell_dim, (double)sc.nS);
        if (combos <= 4096) {
            long n = (long)combos;
            for (long code = 0; code < n && pool_evals() + 3 <= cap / 4; ++code) {
                std::vector<double> t((size_t)sc.nS * cell_dim, 0.0);
                long c = code;
                for (int s = 0; s < sc.nS; ++s) {
                    t[(size_t)s * cell_dim + (c % cell_dim)] = 1.0;
                    c /= cell_dim;
                }
                pool.push_back(std::move(t));
            }
        }
    }

    // Dirichlet(1) multi-start
    {
        Rng rng(derive_seed(cfg.seed, 0xD1C7));
        std::vector<double> cell((size_t)cell_dim);
        while (pool_evals() + 3 <= cap / 2) {
            std::vector<double> t((size_t)sc.nS * cell_dim);
            for (int s = 0; s < sc.nS; ++s) {
                rng.dirichlet1(cell);
                std::copy(cell.begin(), cell.end(), t.begin() + (size_t)s * cell_dim);
            }
            pool.push_back(std::move(t));
        }
    }

    struct Row {
        double D = 0;
        double rate[3] = {0, 0, 0};
        bool achievable[3] = {};
        bool infeasible[3] = {};
    };
    auto evaluate_pool = [&](const std::vector<std::vector<double>>& tables) {
        std::vector<Row> rows(tables.size());
        parallel_for(tables.size(), [&](size_t i) {
            AuxChannel a = make_aux(tables[i]);
            Row r;
            for (int m = 0; m < 3; ++m) {
                DmcRegionPoint pt = eval_region(sc, a, modes[m]);
                r.rate[m] = pt.R;
                r.achievable[m] = pt.achievable;
                r.infeasible[m] = !pt.feasible;
                if (m == 0) r.D = pt.D;
            }
            rows[i] = r;
        });
        return rows;
    };

    std::vector<Row> rows = evaluate_pool(pool);
    res.evaluated += pool_evals();

    // ---- corner line-search refinement ----------------------------------
    // For a chosen state, mix the current table toward each vertex of its
    // cell simplex with a golden-section weight; repeated sweeps reach faces
    // and interior stationary mixtures alike.
    const double Dmax = std::max(max_distortion(sc), 1e-9);
    auto bucket_of = [&](double D) {
        int b = (int)(D / Dmax * cfg.buckets);
        return std::min(std::max(b, 0), cfg.buckets - 1);
    };
    const int kIters = 10;
    const long kPerStart = 2L * sc.nS * cell_dim * (kIters + 3) + 2;
    long refine_per_mode = std::max<long>(0, (cap - res.evaluated) / 3);

    std::vector<std::vector<double>> refined;
    for (int m = 0; m < 3; ++m) {
        std::vector<std::vector<std::pair<double, size_t>>> byb((size_t)cfg.buckets);
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i].achievable[m] && rows[i].rate[m] > 0)
                byb[(size_t)bucket_of(rows[i].D)].push_back({rows[i].rate[m], i});
        for (auto& v : byb)
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
        std::vector<size_t> starts;
        for (int k = 0; k < cfg.refine_top; ++k)
            for (const auto& v : byb)
                if ((size_t)k < v.size()) starts.push_back(v[(size_t)k].second);
        size_t affordable = (size_t)std::max<long>(0, refine_per_mode / kPerStart);
        if (starts.size() > affordable) starts.resize(affordable);

        std::vector<std::vector<double>> local(starts.size());
        std::vector<long> spent(starts.size(), 0);
        parallel_for(starts.size(), [&](size_t si) {
            std::vector<double> cur = pool[starts[si]];
            long n_eval = 0;
            auto obj = [&](const std::vector<double>& t) {
                ++n_eval;
                return eval_region(sc, make_aux(t), modes[m]).R;
            };
            double best = obj(cur);
            for (int sweep = 0; sweep < 2; ++sweep) {
                for (int s = 0; s < sc.nS; ++s) {
                    for (int corner = 0; corner < cell_dim; ++corner) {
                        auto mix = [&](double w) {
                            std::vector<double> t = cur;
                            double* cell = &t[(size_t)s * cell_dim];
                            for (int k = 0; k < cell_dim; ++k) cell[k] *= (1 - w);
                            cell[corner] += w;
                            return t;
                        };
                        double wstar = golden_max([&](double w) { return obj(mix(w)); }, 0.0, 1.0, kIters);
                        std::vector<double> cand = mix(wstar);
                        double f = obj(cand);
                        if (f > best) {
                            best = f;
                            cur = std::move(cand);
                        }
                    }
                }
            }
            local[si] = std::move(cur);
            spent[si] = n_eval;
        });
        for (size_t si = 0; si < starts.size(); ++si) {
            refined.push_back(std::move(local[si]));
            res.evaluated += spent[si];
        }
    }

    if (!refined.empty()) {
        std::vector<Row> extra = evaluate_pool(refined);
        res.evaluated += (long)extra.size() * 3;
        for (auto& t : refined) pool.push_back(std::move(t));
        rows.insert(rows.end(), extra.begin(), extra.end());
    }

    // ---- frontier of the requested mode ----------------------------------
    const int mi = static_cast<int>(mode);
    std::vector<DRPoint> pts;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].infeasible[mi]) ++res.infeasible_discarded;
        if (!rows[i].achievable[mi]) continue;
        pts.push_back({rows[i].D, rows[i].rate[mi], i});
    }
    std::vector<DRPoint> front = pareto_concave_frontier(std::move(pts));
    for (const auto& fp : front) {
        DmcRegionPoint pt = eval_region(sc, make_aux(pool[fp.tag]), mode);
        res.points.push_back(std::move(pt));
    }
    return res;
}

}  // namespace secisac
