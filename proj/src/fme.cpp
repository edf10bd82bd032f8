#include "secisac/fme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "secisac/util.hpp"

namespace secisac {

namespace {
constexpr double kTol = 1e-12;
}

int LinIneqSystem::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return (int)i;
    return -1;
}

void LinIneqSystem::add(const std::vector<double>& c, const std::string& sense, double rhs) {
    if (c.size() != vars.size()) throw std::invalid_argument("inequality arity mismatch");
    LinIneq r;
    if (sense == "<=") {
        r.c = c;
        r.rhs = rhs;
    } else if (sense == ">=") {
        r.c.resize(c.size());
        for (size_t i = 0; i < c.size(); ++i) r.c[i] = -c[i];
        r.rhs = -rhs;
    } else {
        throw std::invalid_argument("unknown sense '" + sense + "'");
    }
    rows.push_back(std::move(r));
}

std::string LinIneqSystem::to_text() const {
    std::string out;
    for (const auto& r : rows) {
        bool first = true;
        for (size_t i = 0; i < vars.size(); ++i) {
            if (r.c[i] == 0) continue;
            if (first) {
                out += fmt_g(r.c[i], 12) + " " + vars[i];
                first = false;
            } else {
                out += r.c[i] < 0 ? " - " : " + ";
                out += fmt_g(std::abs(r.c[i]), 12) + " " + vars[i];
            }
        }
        if (first) out += "0";
        out += " <= " + fmt_g(r.rhs, 12) + "\n";
    }
    return out;
}

namespace {

bool all_zero(const std::vector<double>& c) {
    for (double x : c)
        if (std::abs(x) > kTol) return false;
    return true;
}

// normalize by the largest |coefficient| so duplicate detection is scale-free
void normalize(LinIneq& r) {
    double mx = 0;
    for (double x : r.c) mx = std::max(mx, std::abs(x));
    if (mx <= kTol) return;
    for (double& x : r.c) x /= mx;
    r.rhs /= mx;
}

bool same_coeffs(const LinIneq& a, const LinIneq& b) {
    for (size_t i = 0; i < a.c.size(); ++i)
        if (std::abs(a.c[i] - b.c[i]) > kTol) return false;
    return true;
}

// drop trivially-true constant rows, duplicates, and rows dominated by an
// identical-coefficient row with smaller rhs
std::vector<LinIneq> tidy(std::vector<LinIneq> rows) {
    std::vector<LinIneq> out;
    for (auto& r : rows) {
        if (all_zero(r.c)) {
            if (r.rhs >= -kTol) continue;  // 0 <= nonnegative: prune
            // keep an infeasibility witness, canonical form
            LinIneq w;
            w.c.assign(r.c.size(), 0.0);
            w.rhs = r.rhs;
            bool have = false;
            for (auto& o : out)
                if (all_zero(o.c)) {
                    o.rhs = std::min(o.rhs, w.rhs);
                    have = true;
                }
            if (!have) out.push_back(w);
            continue;
        }
        normalize(r);
        bool keep = true;
        for (auto& o : out) {
            if (all_zero(o.c)) continue;
            if (same_coeffs(o, r)) {
                o.rhs = std::min(o.rhs, r.rhs);
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

LinIneqSystem eliminate(const LinIneqSystem& sys, const std::string& var) {
    int vi = sys.var_index(var);
    if (vi < 0) throw std::invalid_argument("unknown variable '" + var + "'");

    std::vector<LinIneq> uppers, lowers, others;
    for (const auto& r : sys.rows) {
        double a = r.c[(size_t)vi];
        if (a > kTol) uppers.push_back(r);
        else if (a < -kTol) lowers.push_back(r);
        else others.push_back(r);
    }

    auto strip = [&](const LinIneq& r) {
        LinIneq s;
        s.c.reserve(r.c.size() - 1);
        for (size_t i = 0; i < r.c.size(); ++i)
            if ((int)i != vi) s.c.push_back(r.c[i]);
        s.rhs = r.rhs;
        return s;
    };

    std::vector<LinIneq> combined;
    for (const auto& r : others) combined.push_back(strip(r));
    for (const auto& up : uppers) {
        double au = up.c[(size_t)vi];
        for (const auto& lo : lowers) {
            double al = -lo.c[(size_t)vi];
            LinIneq r;
            r.c.resize(sys.vars.size() - 1);
            size_t k = 0;
            for (size_t i = 0; i < sys.vars.size(); ++i) {
                if ((int)i == vi) continue;
                r.c[k++] = up.c[i] / au + lo.c[i] / al;
            }
            r.rhs = up.rhs / au + lo.rhs / al;
            combined.push_back(std::move(r));
        }
    }

    LinIneqSystem out;
    for (size_t i = 0; i < sys.vars.size(); ++i)
        if ((int)i != vi) out.vars.push_back(sys.vars[i]);
    out.rows = tidy(std::move(combined));
    return out;
}

SchemeProjection project_scheme_rates(const SchemeMi& mi) {
    const double vals[5] = {mi.i_us, mi.i_uvs, mi.i_vxz_u, mi.i_uvy, mi.i_vy_u};
    const char* names[5] = {"I(U;S)", "I(U,V;S)", "I(V;Xi,Z|U)", "I(U,V;Y)", "I(V;Y|U)"};
    for (int i = 0; i < 5; ++i)
        if (!(vals[i] >= 0) || !std::isfinite(vals[i]))
            throw std::invalid_argument(std::string("scheme mi: ") + names[i] + " must be finite and >= 0");
    if (mi.i_uvs < mi.i_us - kTol)
        throw std::invalid_argument("scheme mi: chain inconsistency I(U,V;S) < I(U;S)");
    if (mi.i_uvy < mi.i_vy_u - kTol)
        throw std::invalid_argument("scheme mi: chain inconsistency I(U,V;Y) < I(V;Y|U)");

    LinIneqSystem sys;
    sys.vars = {"R_I", "R_J", "R_M"};
    sys.add({1, 0, 0}, ">=", mi.i_us);       // cover the state at the cloud layer
    sys.add({1, 1, 0}, ">=", mi.i_uvs);      // cover the state jointly
    sys.add({0, 1, 0}, ">=", mi.i_vxz_u);    // soft-covering threshold
    sys.add({1, 1, 1}, "<=", mi.i_uvy);      // joint decodability
    sys.add({0, 1, 1}, "<=", mi.i_vy_u);     // satellite decodability
    sys.add({1, 0, 0}, ">=", 0);
    sys.add({0, 1, 0}, ">=", 0);
    sys.add({0, 0, 1}, ">=", 0);

    LinIneqSystem projected = eliminate(eliminate(sys, "R_I"), "R_J");

    SchemeProjection out;
    out.projected = projected;
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& r : projected.rows) {
        if (r.c[0] > kTol) bound = std::min(bound, r.rhs / r.c[0]);
        if (all_zero(r.c) && r.rhs < -kTol)
            throw std::invalid_argument("scheme mi: rate system infeasible");
    }
    out.fme_bound = bound;
    out.closed_form[0] = mi.i_uvy - mi.i_uvs;
    out.closed_form[1] = mi.i_vy_u - mi.i_vxz_u;
    out.closed_form[2] = (mi.i_uvy - mi.i_us) - mi.i_vxz_u;
    out.closed_form_min = std::min({out.closed_form[0], out.closed_form[1], out.closed_form[2]});
    if (!(std::abs(out.fme_bound - out.closed_form_min) <= kTol))
        throw std::logic_error("FME projection disagrees with the closed-form message-rate bounds");
    return out;
}

}  // namespace secisac
