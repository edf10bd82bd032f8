#include "secisac/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secisac {

void BaseSources::add(const std::string& name, double v) {
    for (const auto& n : names)
        if (n == name) throw std::invalid_argument("duplicate base source '" + name + "'");
    if (v < 0) throw std::invalid_argument("negative variance for base source '" + name + "'");
    names.push_back(name);
    var.push_back(v);
}

size_t BaseSources::index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw std::invalid_argument("unknown base source '" + name + "'");
}

void GaussianSystem::define(const std::string& name, LinearExpr expr) {
    if (expr.c.size() != base_.size())
        throw std::invalid_argument("coefficient vector length mismatch for '" + name + "'");
    for (auto& v : vars_)
        if (v.first == name) {
            v.second = std::move(expr);
            return;
        }
    vars_.emplace_back(name, std::move(expr));
}

const LinearExpr& GaussianSystem::expr(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.first == name) return v.second;
    throw std::invalid_argument("unknown variable '" + name + "'");
}

bool GaussianSystem::has(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.first == name) return true;
    return false;
}

Eigen::MatrixXd cov(const GaussianSystem& sys, const VarSet& rows, const VarSet& cols) {
    const auto& d = sys.base().var;
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& ri = sys.expr(rows[i]).c;
        for (size_t j = 0; j < cols.size(); ++j) {
            const auto& cj = sys.expr(cols[j]).c;
            double acc = 0;
            for (size_t k = 0; k < d.size(); ++k) acc += ri[k] * cj[k] * d[k];
            out(static_cast<long>(i), static_cast<long>(j)) = acc;
        }
    }
    return out;
}

LogPDet logpdet(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() == 0) return {0.0, 0};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double lmax = 0;
    for (long i = 0; i < ev.size(); ++i) lmax = std::max(lmax, ev[i]);
    if (lmax <= 0) return {0.0, 0};
    double cutoff = rel_tol * lmax;
    double acc = 0;
    int rank = 0;
    for (long i = 0; i < ev.size(); ++i) {
        if (ev[i] > cutoff) {
            acc += std::log(ev[i]);
            ++rank;
        }
    }
    return {acc, rank};
}

namespace {

void check_disjoint(const VarSet& a, const VarSet& b, const char* what) {
    for (const auto& x : a)
        for (const auto& y : b)
            if (x == y) throw std::invalid_argument(std::string(what) + ": sets overlap on '" + x + "'");
}

// Sets are canonicalized (name-sorted) before any eigendecomposition so that
// results do not depend on caller-side ordering: I(A;B) and I(B;A) build the
// identical union matrix and come out bit-equal.
VarSet join(const VarSet& a, const VarSet& b) {
    VarSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    return out;
}

double block_logpdet(const GaussianSystem& sys, VarSet v, int* rank) {
    std::sort(v.begin(), v.end());
    LogPDet l = logpdet(cov(sys, v, v));
    *rank = l.rank;
    return l.value;
}

}  // namespace

double mutual_info(const GaussianSystem& sys, const VarSet& A, const VarSet& B) {
    check_disjoint(A, B, "mutual_info");
    int ra, rb, rab;
    double la = block_logpdet(sys, A, &ra);
    double lb = block_logpdet(sys, B, &rb);
    double lab = block_logpdet(sys, join(A, B), &rab);
    if (ra + rb > rab) return std::numeric_limits<double>::infinity();
    double v = 0.5 * (la + lb - lab);
    return v < 0 ? 0.0 : v;
}

double cond_mutual_info(const GaussianSystem& sys, const VarSet& A, const VarSet& B, const VarSet& C) {
    check_disjoint(A, B, "cond_mutual_info");
    check_disjoint(A, C, "cond_mutual_info");
    if (C.empty()) return mutual_info(sys, A, B);
    int rac, rbc, rc, rabc;
    double lac = block_logpdet(sys, join(A, C), &rac);
    double lbc = block_logpdet(sys, join(B, C), &rbc);
    double lc = block_logpdet(sys, C, &rc);
    double labc = block_logpdet(sys, join(join(A, C), B), &rabc);
    if (rac + rbc > rc + rabc) return std::numeric_limits<double>::infinity();
    double v = 0.5 * (lac + lbc - lc - labc);
    return v < 0 ? 0.0 : v;
}

double mmse_distortion(const GaussianSystem& sys, const std::string& target, const VarSet& observed) {
    for (const auto& o : observed)
        if (o == target) throw std::invalid_argument("mmse_distortion: target '" + target + "' in observed set");
    double vt = cov(sys, {target}, {target})(0, 0);
    if (observed.empty()) return vt;
    Eigen::MatrixXd so = cov(sys, observed, observed);
    Eigen::MatrixXd st = cov(sys, observed, {target});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(so);
    const auto& ev = es.eigenvalues();
    double lmax = 0;
    for (long i = 0; i < ev.size(); ++i) lmax = std::max(lmax, ev[i]);
    double cutoff = 1e-12 * lmax;
    Eigen::VectorXd proj = es.eigenvectors().transpose() * st;  // coordinates of Sigma_{O,t}
    double explained = 0;
    for (long i = 0; i < ev.size(); ++i)
        if (ev[i] > cutoff && lmax > 0) explained += proj[i] * proj[i] / ev[i];
    double d = vt - explained;
    if (d < 0) d = 0;
    if (d > vt) d = vt;
    return d;
}

IndependenceCheck check_independence(const GaussianSystem& sys, const std::string& a,
                                     const VarSet& others, double tol) {
    Eigen::MatrixXd c = cov(sys, {a}, others);
    double mx = 0;
    for (long j = 0; j < c.cols(); ++j) mx = std::max(mx, std::abs(c(0, j)));
    return {mx <= tol, mx};
}

}  // namespace secisac
