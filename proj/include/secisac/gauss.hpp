#pragma once
// Covariance algebra for jointly Gaussian systems given as linear maps of
// independent zero-mean base sources. Mutual information is computed from
// log-pseudo-determinants with explicit rank accounting, so degenerate
// variables (zero variance, deterministic linear relations) are handled
// exactly: an MI is +inf precisely when one side is a.s. determined by the
// other beyond their common support.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace secisac {

struct BaseSources {
    std::vector<std::string> names;
    std::vector<double> var;

    void add(const std::string& name, double v);
    size_t index(const std::string& name) const;
    size_t size() const { return names.size(); }
};

struct LinearExpr {
    std::vector<double> c;  // one coefficient per base source
};

class GaussianSystem {
public:
    explicit GaussianSystem(BaseSources base) : base_(std::move(base)) {}

    void define(const std::string& name, LinearExpr expr);
    const LinearExpr& expr(const std::string& name) const;
    bool has(const std::string& name) const;
    const BaseSources& base() const { return base_; }

private:
    BaseSources base_;
    std::vector<std::pair<std::string, LinearExpr>> vars_;
};

using VarSet = std::vector<std::string>;

Eigen::MatrixXd cov(const GaussianSystem& sys, const VarSet& rows, const VarSet& cols);

struct LogPDet {
    double value;  // sum of log of eigenvalues above the rank cutoff
    int rank;
};
// Cutoff: eigenvalues > 1e-12 * (largest eigenvalue); deterministic, no jitter.
LogPDet logpdet(const Eigen::MatrixXd& m, double rel_tol = 1e-12);

// I(A;B) in nats; +inf when the joint covariance rank drops below
// rank(A)+rank(B). Throws std::invalid_argument on overlapping sets.
double mutual_info(const GaussianSystem& sys, const VarSet& A, const VarSet& B);

// I(A;B|C) = I(A;B,C) - I(A;C), evaluated via four log-pseudo-determinants;
// clamped at 0 against rounding.
double cond_mutual_info(const GaussianSystem& sys, const VarSet& A, const VarSet& B, const VarSet& C);

// Linear-MMSE residual Var(target | observed) using an eigen pseudo-inverse;
// equals the Bayes-optimal squared-error distortion for jointly Gaussian data.
double mmse_distortion(const GaussianSystem& sys, const std::string& target, const VarSet& observed);

struct IndependenceCheck {
    bool independent;
    double max_abs_cross_cov;
};
// Zero cross-covariance is necessary and sufficient for independence of
// jointly Gaussian zero-mean variables.
IndependenceCheck check_independence(const GaussianSystem& sys, const std::string& a,
                                     const VarSet& others, double tol = 1e-9);

}  // namespace secisac
