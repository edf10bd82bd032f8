#pragma once
// Shared plumbing: deterministic RNG primitives, parallel map, Pareto/envelope
// helpers and stable text formatting. Everything here is seed-deterministic and
// independent of thread count so command outputs can be byte-compared.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace secisac {

// Scenario/mode combinations with no feasible operating point (distinct from
// malformed input, which is std::invalid_argument, and from resource caps,
// which are std::length_error).
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable sub-stream seed from a master seed plus salts (module tag, index, ...).
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = master;
    splitmix64(s);
    s ^= 0xd1b54a32d192ed03ULL * (a + 1);
    splitmix64(s);
    s ^= 0x8cb92ba72f3d8dd7ULL * (b + 1);
    splitmix64(s);
    s ^= 0xaef17502108ef2d9ULL * (c + 1);
    return splitmix64(s);
}

// mt19937_64 with hand-rolled variate transforms. std::normal_distribution and
// friends are implementation-defined, which would break byte-identical output
// across toolchains, so the transforms are spelled out here.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    uint64_t below(uint64_t n) {  // unbiased [0, n)
        if (n <= 1) return 0;
        uint64_t lim = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
        uint64_t x;
        do { x = eng_(); } while (x >= lim);
        return x % n;
    }

    double normal() {  // Marsaglia polar, cached pair
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // index from an unnormalized nonnegative weight vector
    size_t discrete(const std::vector<double>& w) {
        double tot = 0;
        for (double x : w) tot += x;
        if (!(tot > 0)) throw std::runtime_error("discrete(): all weights zero");
        double r = uniform() * tot, acc = 0;
        for (size_t k = 0; k < w.size(); ++k) {
            acc += w[k];
            if (r < acc) return k;
        }
        return w.size() - 1;
    }

    // symmetric Dirichlet(1) == normalized exponentials
    void dirichlet1(std::vector<double>& out) {
        double tot = 0;
        for (double& x : out) {
            double u = uniform();
            x = -std::log(1.0 - u);
            tot += x;
        }
        for (double& x : out) x /= tot;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0;
    bool have_spare_ = false;
};

inline int thread_count() {
    if (const char* env = std::getenv("SECISAC_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

// Chunked parallel loop; fn(i) must write only to slot i of preallocated
// storage, which keeps results identical for any thread count.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    int nt = thread_count();
    if (nt <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Maximize f over [lo, hi] by golden-section with a fixed iteration count.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters = 20) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

inline double wilson_halfwidth(double phat, long n, double z = 1.959963984540054) {
    if (n <= 0) return 1.0;
    double z2 = z * z;
    return z * std::sqrt(phat * (1 - phat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

// (distortion, rate) pair used by both frontier builders.
struct DRPoint {
    double D;
    double R;
    size_t tag;  // index into the caller's parameter pool
};

// Pareto filter (min D, max R) followed by the upper concave envelope over D:
// time sharing between two achievable operating points is itself achievable,
// so the reported frontier is the concave majorant's vertex set.
inline std::vector<DRPoint> pareto_concave_frontier(std::vector<DRPoint> pts) {
    if (pts.empty()) return pts;
    std::sort(pts.begin(), pts.end(), [](const DRPoint& a, const DRPoint& b) {
        if (a.D != b.D) return a.D < b.D;
        if (a.R != b.R) return a.R > b.R;
        return a.tag < b.tag;
    });
    std::vector<DRPoint> pareto;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (p.R > best) {
            pareto.push_back(p);
            best = p.R;
        }
    }
    // upper hull over (D, R); points already have strictly increasing D and R
    std::vector<DRPoint> hull;
    for (const auto& p : pareto) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            double cross = (b.D - a.D) * (p.R - a.R) - (b.R - a.R) * (p.D - a.D);
            if (cross >= 0) hull.pop_back();  // b under or on chord a-p
            else break;
        }
        hull.push_back(p);
    }
    return hull;
}

inline std::string strprintf(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    va_list ap2;
    va_copy(ap2, ap);
    int n = std::vsnprintf(nullptr, 0, fmt, ap);
    va_end(ap);
    std::string out(n, '\0');
    std::vsnprintf(out.data(), n + 1, fmt, ap2);
    va_end(ap2);
    return out;
}

inline std::string fmt_g(double v, int prec = 10) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return strprintf("%.*g", prec, v);
}

void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace secisac
