#include "secisac/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secisac {

void SimConfig::validate() const {
    if (n_values.empty()) throw std::invalid_argument("experiment: n_values must be non-empty");
    for (int n : n_values)
        if (n < 1) throw std::invalid_argument("experiment: blocklength n must be >= 1");
    if (!(R_M >= 0) || !(R_I >= 0) || !(R_J >= 0) || !std::isfinite(R_M + R_I + R_J))
        throw std::invalid_argument("experiment: rates must be finite and >= 0");
    if (!(eps > 0)) throw std::invalid_argument("experiment: epsilon must be > 0");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
}

SchemeTables derive_tables(const DmcScenario& sc, const AuxChannel& aux) {
    Joint j = assemble_joint(sc, aux);
    SchemeTables tb;
    tb.nS = sc.nS;
    tb.nXi = sc.nXi;
    tb.nU = aux.nU;
    tb.nV = aux.nV;
    tb.nX = sc.nX;
    tb.nY = sc.nY;
    tb.nZ = sc.nZ;
    tb.nShat = sc.nShat;
    tb.P_S = sc.P_S;
    tb.P_Xi_S = sc.P_Xi_S;
    tb.dist = sc.dist;

    const int nU = tb.nU, nV = tb.nV, nX = tb.nX, nY = tb.nY, nZ = tb.nZ, nS = tb.nS;
    tb.P_U.assign((size_t)nU, 0.0);
    tb.P_UV.assign((size_t)nU * nV, 0.0);
    tb.P_S_UV.assign((size_t)nU * nV * nS, 0.0);
    tb.P_X_UVS.assign((size_t)nU * nV * nS * nX, 0.0);
    tb.P_Z_UVS.assign((size_t)nU * nV * nS * nZ, 0.0);
    tb.P_UVY.assign((size_t)nU * nV * nY, 0.0);

    std::array<int, 7> c{};
    for (size_t idx = 0; idx < j.p.size(); ++idx) {
        double p = j.p[idx];
        if (p > 0) {
            size_t uv = (size_t)c[cU] * nV + c[cV];
            tb.P_UV[uv] += p;
            tb.P_S_UV[uv * nS + c[cS]] += p;
            tb.P_X_UVS[(uv * nS + c[cS]) * nX + c[cX]] += p;
            tb.P_Z_UVS[(uv * nS + c[cS]) * nZ + c[cZ]] += p;
            tb.P_UVY[uv * nY + c[cY]] += p;
        }
        for (int k = 6; k >= 0; --k) {
            if (++c[(size_t)k] < j.dim[(size_t)k]) break;
            c[(size_t)k] = 0;
        }
    }
    for (int u = 0; u < nU; ++u)
        for (int v = 0; v < nV; ++v) tb.P_U[(size_t)u] += tb.P_UV[(size_t)u * nV + v];
    tb.P_V_U.assign((size_t)nU * nV, 0.0);
    for (int u = 0; u < nU; ++u)
        for (int v = 0; v < nV; ++v)
            if (tb.P_U[(size_t)u] > 0)
                tb.P_V_U[(size_t)u * nV + v] = tb.P_UV[(size_t)u * nV + v] / tb.P_U[(size_t)u];
    // conditionals given (u, v, s); unreachable rows stay zero
    for (int u = 0; u < nU; ++u)
        for (int v = 0; v < nV; ++v) {
            size_t uv = (size_t)u * nV + v;
            double muv = tb.P_UV[uv];
            for (int s = 0; s < nS; ++s) {
                double mus = tb.P_S_UV[uv * nS + s];
                for (int x = 0; x < nX; ++x)
                    tb.P_X_UVS[(uv * nS + s) * nX + x] =
                        mus > 0 ? tb.P_X_UVS[(uv * nS + s) * nX + x] / mus : 0.0;
                for (int z = 0; z < nZ; ++z)
                    tb.P_Z_UVS[(uv * nS + s) * nZ + z] =
                        mus > 0 ? tb.P_Z_UVS[(uv * nS + s) * nZ + z] / mus : 0.0;
                tb.P_S_UV[uv * nS + s] = muv > 0 ? mus / muv : 0.0;
            }
        }
    // X|UVS and Z|UVS for (u,v,s) pairs with zero mass under the aux are
    // unreachable by construction (codewords are drawn from P_U, P_{V|U});
    // fall back to the direct aux tables where the state decouples:
    for (int u = 0; u < nU; ++u)
        for (int v = 0; v < nV; ++v) {
            size_t uv = (size_t)u * nV + v;
            for (int s = 0; s < nS; ++s) {
                double mass = 0;
                for (int x = 0; x < nX; ++x) mass += tb.P_X_UVS[(uv * nS + s) * nX + x];
                if (mass > 0) continue;
                // renormalize P_{UVX|S} over x for this (s,u,v) if possible
                double cell = 0;
                for (int x = 0; x < nX; ++x)
                    cell += aux.P_UVX_S[(((size_t)s * nU + u) * nV + v) * nX + x];
                if (cell <= 0) continue;  // truly impossible pair; encoder weight is 0 anyway
                for (int x = 0; x < nX; ++x)
                    tb.P_X_UVS[(uv * nS + s) * nX + x] =
                        aux.P_UVX_S[(((size_t)s * nU + u) * nV + v) * nX + x] / cell;
                for (int x = 0; x < nX; ++x) {
                    double px = tb.P_X_UVS[(uv * nS + s) * nX + x];
                    if (px <= 0) continue;
                    const double* ch = &sc.P_YZ_XS[((size_t)x * nS + s) * nY * nZ];
                    for (int y = 0; y < nY; ++y)
                        for (int z = 0; z < nZ; ++z)
                            tb.P_Z_UVS[(uv * nS + s) * nZ + z] += px * ch[(size_t)y * nZ + z];
                }
            }
        }
    Reconstruction rec = optimal_g(sc, j);
    tb.g = rec.g;
    tb.exact_distortion = rec.expected_distortion;
    return tb;
}

long codeword_count(int n, double rate) {
    // guard against 2.0000000000000004-style representation error in e^{nR}
    double raw = std::exp((double)n * rate);
    long cnt = (long)std::ceil(raw - 1e-9);
    return cnt < 1 ? 1 : cnt;
}

Codebook gen_codebooks(const SchemeTables& tb, int n, const SimConfig& cfg) {
    Codebook cb;
    cb.n = n;
    cb.NI = codeword_count(n, cfg.R_I);
    cb.NM = codeword_count(n, cfg.R_M);
    cb.NJ = codeword_count(n, cfg.R_J);
    cb.seed = derive_seed(cfg.seed, (uint64_t)n, 0xC0DE);
    double symbols = (double)cb.NI * n + (double)cb.NI * cb.NM * cb.NJ * n;
    if (symbols > cfg.codebook_cap)
        throw std::length_error(
            "codebook dimension n*N_I + n*N_I*N_M*N_J = " + fmt_g(symbols) +
            " symbols exceeds cap " + fmt_g(cfg.codebook_cap) +
            " (n=" + std::to_string(n) + ", N_I=" + std::to_string(cb.NI) +
            ", N_M=" + std::to_string(cb.NM) + ", N_J=" + std::to_string(cb.NJ) + ")");
    Rng rng(cb.seed);
    cb.u.resize((size_t)cb.NI * n);
    for (long i = 0; i < cb.NI; ++i)
        for (int t = 0; t < n; ++t) cb.u[(size_t)i * n + t] = (int)rng.discrete(tb.P_U);
    cb.v.resize((size_t)cb.NI * cb.NM * cb.NJ * n);
    std::vector<double> row((size_t)tb.nV);
    for (long i = 0; i < cb.NI; ++i)
        for (long m = 0; m < cb.NM; ++m)
            for (long j = 0; j < cb.NJ; ++j)
                for (int t = 0; t < n; ++t) {
                    int u = cb.u_at(i, t);
                    std::copy(tb.P_V_U.begin() + (size_t)u * tb.nV,
                              tb.P_V_U.begin() + (size_t)(u + 1) * tb.nV, row.begin());
                    cb.v[((((size_t)i * cb.NM + m) * cb.NJ + j) * n) + t] = (int)rng.discrete(row);
                }
    return cb;
}

EncodeResult likelihood_encode(const SchemeTables& tb, const Codebook& cb, long m,
                               const std::vector<int>& sn, Rng& rng) {
    const int n = cb.n;
    const long pairs = cb.NI * cb.NJ;
    std::vector<double> logw((size_t)pairs);
    double maxv = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < cb.NI; ++i)
        for (long j = 0; j < cb.NJ; ++j) {
            double lw = 0;
            for (int t = 0; t < n; ++t) {
                double p = tb.P_S_UV[((size_t)cb.u_at(i, t) * tb.nV + cb.v_at(i, m, j, t)) * tb.nS +
                                     sn[(size_t)t]];
                if (p <= 0) {
                    lw = -std::numeric_limits<double>::infinity();
                    break;
                }
                lw += std::log(p);
            }
            logw[(size_t)(i * cb.NJ + j)] = lw;
            maxv = std::max(maxv, lw);
        }
    EncodeResult res;
    if (!std::isfinite(maxv)) return res;  // every pair has zero likelihood
    std::vector<double> w((size_t)pairs);
    for (long k = 0; k < pairs; ++k)
        w[(size_t)k] = std::isfinite(logw[(size_t)k]) ? std::exp(logw[(size_t)k] - maxv) : 0.0;
    long pick = (long)rng.discrete(w);
    res.ok = true;
    res.i = pick / cb.NJ;
    res.j = pick % cb.NJ;
    return res;
}

namespace {

// zero-mass rows only arise through the encoder-failure fallback pair; pin
// those to symbol 0 instead of throwing
int sample_row(Rng& rng, const std::vector<double>& row) {
    double tot = 0;
    for (double x : row) tot += x;
    if (!(tot > 0)) return 0;
    return (int)rng.discrete(row);
}

}  // namespace

void transmit(const SchemeTables& tb, const DmcScenario& sc, const Codebook& cb, long i, long m,
              long j, const std::vector<int>& sn, Rng& rng, std::vector<int>& xn,
              std::vector<int>& yn, std::vector<int>& zn) {
    const int n = cb.n;
    xn.resize((size_t)n);
    yn.resize((size_t)n);
    zn.resize((size_t)n);
    std::vector<double> rowx((size_t)tb.nX), rowyz((size_t)tb.nY * tb.nZ);
    for (int t = 0; t < n; ++t) {
        int u = cb.u_at(i, t), v = cb.v_at(i, m, j, t), s = sn[(size_t)t];
        size_t base = (((size_t)u * tb.nV + v) * tb.nS + s) * tb.nX;
        std::copy(tb.P_X_UVS.begin() + base, tb.P_X_UVS.begin() + base + tb.nX, rowx.begin());
        int x = sample_row(rng, rowx);
        size_t chb = ((size_t)x * tb.nS + s) * tb.nY * tb.nZ;
        std::copy(sc.P_YZ_XS.begin() + chb, sc.P_YZ_XS.begin() + chb + (size_t)tb.nY * tb.nZ,
                  rowyz.begin());
        int yz = (int)rng.discrete(rowyz);
        xn[(size_t)t] = x;
        yn[(size_t)t] = yz / tb.nZ;
        zn[(size_t)t] = yz % tb.nZ;
    }
}

DecodeResult decode(const SchemeTables& tb, const Codebook& cb, const std::vector<int>& yn,
                    double eps, Rng& rng) {
    const int n = cb.n;
    const size_t cells = (size_t)tb.nU * tb.nV * tb.nY;
    std::vector<int> cnt(cells);
    std::vector<long> typical;
    for (long i = 0; i < cb.NI; ++i)
        for (long m = 0; m < cb.NM; ++m)
            for (long j = 0; j < cb.NJ; ++j) {
                std::fill(cnt.begin(), cnt.end(), 0);
                for (int t = 0; t < n; ++t)
                    ++cnt[((size_t)cb.u_at(i, t) * tb.nV + cb.v_at(i, m, j, t)) * tb.nY +
                          yn[(size_t)t]];
                bool ok = true;
                for (size_t cell = 0; cell < cells && ok; ++cell) {
                    double np = n * tb.P_UVY[cell];
                    if (std::abs((double)cnt[cell] - np) > eps * np + 1e-12) ok = false;
                }
                if (ok) typical.push_back((i * cb.NM + m) * cb.NJ + j);
            }
    DecodeResult res;
    if (typical.empty()) return res;
    long pick = typical[(size_t)rng.below((uint64_t)typical.size())];
    res.ok = true;
    res.i = pick / (cb.NM * cb.NJ);
    res.m = (pick / cb.NJ) % cb.NM;
    res.j = pick % cb.NJ;
    return res;
}

std::vector<int> reconstruct(const SchemeTables& tb, const Codebook& cb, long i, long m, long j,
                             const std::vector<int>& yn) {
    std::vector<int> shat((size_t)cb.n);
    for (int t = 0; t < cb.n; ++t)
        shat[(size_t)t] = tb.g[((size_t)cb.u_at(i, t) * tb.nV + cb.v_at(i, m, j, t)) * tb.nY +
                               yn[(size_t)t]];
    return shat;
}

double mean_distortion(const SchemeTables& tb, const std::vector<int>& sn,
                       const std::vector<int>& shatn) {
    double d = 0;
    for (size_t t = 0; t < sn.size(); ++t)
        d += tb.dist[(size_t)sn[t] * tb.nShat + shatn[t]];
    return d / (double)sn.size();
}

LeakageResult exact_leakage(const SchemeTables& tb, const Codebook& cb, double cap) {
    LeakageResult res;
    const int n = cb.n;
    double txi = std::pow((double)tb.nXi, n), tz = std::pow((double)tb.nZ, n);
    if (txi * tz * (double)cb.NM > cap) return res;  // method off
    const size_t TXi = (size_t)std::llround(txi), TZ = (size_t)std::llround(tz);
    const size_t T = TXi * TZ;
    const int base = tb.nXi * tb.nZ;
    const size_t sCount = [&] {
        size_t c = 1;
        for (int t = 0; t < n; ++t) c *= (size_t)tb.nS;
        return c;
    }();

    // P(m, xi^n, z^n) with the per-position pair (xi_t, z_t) interleaved into
    // one radix-(|Xi||Z|) index
    std::vector<double> P((size_t)cb.NM * T, 0.0);
    parallel_for((size_t)cb.NM, [&](size_t mi) {
        long m = (long)mi;
        double* Pm = &P[mi * T];
        std::vector<int> sn((size_t)n);
        std::vector<double> w((size_t)(cb.NI * cb.NJ));
        std::vector<double> buf, nxt;
        std::vector<double> kern((size_t)n * base);
        for (size_t sidx = 0; sidx < sCount; ++sidx) {
            {
                size_t r = sidx;
                for (int t = n - 1; t >= 0; --t) {
                    sn[(size_t)t] = (int)(r % (size_t)tb.nS);
                    r /= (size_t)tb.nS;
                }
            }
            double ps = 1.0;
            for (int t = 0; t < n; ++t) ps *= tb.P_S[(size_t)sn[(size_t)t]];
            if (ps <= 0) continue;
            double W = 0;
            for (long i = 0; i < cb.NI; ++i)
                for (long j = 0; j < cb.NJ; ++j) {
                    double wt = 1.0;
                    for (int t = 0; t < n && wt > 0; ++t)
                        wt *= tb.P_S_UV[((size_t)cb.u_at(i, t) * tb.nV + cb.v_at(i, m, j, t)) *
                                            tb.nS +
                                        sn[(size_t)t]];
                    w[(size_t)(i * cb.NJ + j)] = wt;
                    W += wt;
                }
            if (W <= 0) {  // encoder failure fallback: first pair deterministically
                std::fill(w.begin(), w.end(), 0.0);
                w[0] = 1.0;
                W = 1.0;
            }
            for (long i = 0; i < cb.NI; ++i)
                for (long j = 0; j < cb.NJ; ++j) {
                    double lam = w[(size_t)(i * cb.NJ + j)] / W;
                    if (lam <= 0) continue;
                    for (int t = 0; t < n; ++t) {
                        int u = cb.u_at(i, t), v = cb.v_at(i, m, j, t), s = sn[(size_t)t];
                        const double* pz = &tb.P_Z_UVS[(((size_t)u * tb.nV + v) * tb.nS + s) * tb.nZ];
                        const double* pxi = &tb.P_Xi_S[(size_t)s * tb.nXi];
                        for (int xi = 0; xi < tb.nXi; ++xi)
                            for (int z = 0; z < tb.nZ; ++z)
                                kern[(size_t)t * base + xi * tb.nZ + z] = pxi[xi] * pz[z];
                    }
                    buf.assign(1, ps * lam);
                    for (int t = 0; t < n; ++t) {
                        nxt.assign(buf.size() * (size_t)base, 0.0);
                        for (size_t e = 0; e < buf.size(); ++e) {
                            double b = buf[e];
                            if (b <= 0) continue;
                            for (int d = 0; d < base; ++d)
                                nxt[e * (size_t)base + (size_t)d] = b * kern[(size_t)t * base + d];
                        }
                        buf.swap(nxt);
                    }
                    for (size_t e = 0; e < T; ++e) Pm[e] += buf[e];
                }
        }
    });
    double inv = 1.0 / (double)cb.NM;
    for (double& p : P) p *= inv;

    // marginals: split each interleaved index into its xi- and z-components
    std::vector<double> Pz(TZ, 0.0), Pmx((size_t)cb.NM * TXi, 0.0);
    std::vector<size_t> xi_of(T), z_of(T);
    {
        std::vector<int> digits((size_t)n);
        for (size_t idx = 0; idx < T; ++idx) {
            size_t r = idx, xid = 0, zid = 0;
            for (int t = n - 1; t >= 0; --t) {
                digits[(size_t)t] = (int)(r % (size_t)base);
                r /= (size_t)base;
            }
            for (int t = 0; t < n; ++t) {
                xid = xid * (size_t)tb.nXi + (size_t)(digits[(size_t)t] / tb.nZ);
                zid = zid * (size_t)tb.nZ + (size_t)(digits[(size_t)t] % tb.nZ);
            }
            xi_of[idx] = xid;
            z_of[idx] = zid;
        }
    }
    for (long m = 0; m < cb.NM; ++m)
        for (size_t idx = 0; idx < T; ++idx) {
            double p = P[(size_t)m * T + idx];
            if (p > 0) {
                Pz[z_of[idx]] += p;
                Pmx[(size_t)m * TXi + xi_of[idx]] += p;
            }
        }
    double I = 0;
    for (long m = 0; m < cb.NM; ++m)
        for (size_t idx = 0; idx < T; ++idx) {
            double p = P[(size_t)m * T + idx];
            if (p > 0) I += p * std::log(p / (Pmx[(size_t)m * TXi + xi_of[idx]] * Pz[z_of[idx]]));
        }
    res.nats_per_symbol = std::max(0.0, I / n);
    res.available = true;
    return res;
}

SimResult run_experiment(const DmcScenario& sc, const AuxChannel& aux, const SimConfig& cfg) {
    cfg.validate();
    SchemeTables tb = derive_tables(sc, aux);
    SimResult out;
    for (int n : cfg.n_values) {
        Codebook cb = gen_codebooks(tb, n, cfg);
        SimRow row;
        row.n = n;
        row.NI = cb.NI;
        row.NM = cb.NM;
        row.NJ = cb.NJ;
        row.trials = cfg.trials;
        std::vector<uint8_t> err((size_t)cfg.trials), encfail((size_t)cfg.trials),
            decfail((size_t)cfg.trials);
        std::vector<double> dsum((size_t)cfg.trials);
        parallel_for((size_t)cfg.trials, [&](size_t trial) {
            Rng rng(derive_seed(cfg.seed, (uint64_t)n, (uint64_t)trial, 0x7219A1));
            long m = (long)rng.below((uint64_t)cb.NM);
            std::vector<int> sn((size_t)n);
            for (int t = 0; t < n; ++t) sn[(size_t)t] = (int)rng.discrete(tb.P_S);
            EncodeResult enc = likelihood_encode(tb, cb, m, sn, rng);
            long ei = enc.ok ? enc.i : 0, ej = enc.ok ? enc.j : 0;
            std::vector<int> xn, yn, zn;
            transmit(tb, sc, cb, ei, m, ej, sn, rng, xn, yn, zn);
            DecodeResult dec = decode(tb, cb, yn, cfg.eps, rng);
            bool error = !enc.ok || !dec.ok || dec.i != ei || dec.j != ej || dec.m != m;
            std::vector<int> shat = dec.ok ? reconstruct(tb, cb, dec.i, dec.m, dec.j, yn)
                                           : reconstruct(tb, cb, 0, 0, 0, yn);
            err[trial] = error ? 1 : 0;
            encfail[trial] = enc.ok ? 0 : 1;
            decfail[trial] = dec.ok ? 0 : 1;
            dsum[trial] = mean_distortion(tb, sn, shat);
        });
        double dtot = 0;
        for (long t = 0; t < cfg.trials; ++t) {
            row.errors += err[(size_t)t];
            row.encoder_failures += encfail[(size_t)t];
            row.decode_failures += decfail[(size_t)t];
            dtot += dsum[(size_t)t];
        }
        row.Pe = (double)row.errors / (double)cfg.trials;
        row.Pe_ci = wilson_halfwidth(row.Pe, cfg.trials);
        row.distortion = dtot / (double)cfg.trials;
        if (cfg.leakage_exact) {
            LeakageResult lk = exact_leakage(tb, cb, cfg.leakage_cap);
            if (lk.available) {
                row.leakage = lk.nats_per_symbol;
                row.leakage_method = "exact";
            } else {
                row.leakage = std::numeric_limits<double>::quiet_NaN();
                row.leakage_method = "off";
            }
        } else {
            row.leakage = std::numeric_limits<double>::quiet_NaN();
            row.leakage_method = "off";
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace secisac
