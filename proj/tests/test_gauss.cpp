#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "secisac/gauss.hpp"
#include "secisac/gauss_region.hpp"
#include "secisac/util.hpp"

using namespace secisac;

namespace {

// Default-scenario system with X = gamma*S only (no codeword components).
GaussianSystem uncoded_system(double gamma, double Q = 3, double s2 = 1, double se2 = 4,
                              double a = 0.7, double b = 0.3) {
    BaseSources bs;
    bs.add("S", Q);
    bs.add("N", s2);
    bs.add("Ne", se2);
    GaussianSystem sys(bs);
    auto lin = [&](double cs, double cn, double cne) {
        LinearExpr e;
        e.c = {cs, cn, cne};
        return e;
    };
    sys.define("S", lin(1, 0, 0));
    sys.define("X", lin(gamma, 0, 0));
    sys.define("Y", lin(1 + gamma, 1, 0));
    sys.define("Z", lin(a * gamma + b, 0, 1));
    return sys;
}

// Small random system over 4 base sources; coefficients kept away from exact
// degeneracy so information quantities stay finite.
GaussianSystem random_system(Rng& rng) {
    BaseSources bs;
    for (int k = 0; k < 4; ++k) bs.add("b" + std::to_string(k), 0.2 + 3.0 * rng.uniform());
    GaussianSystem sys(bs);
    for (const char* nm : {"U", "V", "Y", "S"}) {
        LinearExpr e;
        e.c.resize(4);
        for (double& c : e.c) c = rng.uniform(-1.5, 1.5);
        sys.define(nm, e);
    }
    return sys;
}

}  // namespace

TEST_CASE("covariance of S with itself is its variance") {
    GaussianSystem sys = uncoded_system(0.0);
    Eigen::MatrixXd c = cov(sys, {"S"}, {"S"});
    CHECK(c.rows() == 1);
    CHECK(c(0, 0) == 3.0);
}

TEST_CASE("silent encoder: Var(Y) is state power plus noise power") {
    GaussianSystem sys = uncoded_system(0.0);
    CHECK(cov(sys, {"Y"}, {"Y"})(0, 0) == 4.0);
}

TEST_CASE("gamma = -b/a cancels the state out of the eavesdropper output") {
    GaussianSystem sys = uncoded_system(-0.3 / 0.7);
    CHECK(std::abs(cov(sys, {"S"}, {"Z"})(0, 0)) <= 1e-15);
}

TEST_CASE("covariance of unknown variable throws") {
    GaussianSystem sys = uncoded_system(0.0);
    CHECK_THROWS_AS((void)cov(sys, {"S"}, {"W"}), std::invalid_argument);
    CHECK_THROWS_AS((void)mutual_info(sys, {"S"}, {"S"}), std::invalid_argument);  // overlap
}

TEST_CASE("point-to-point AWGN rate: I(X;Y) = 0.5*ln(1 + 30)") {
    BaseSources bs;
    bs.add("X", 30);
    bs.add("N", 1);
    GaussianSystem sys(bs);
    sys.define("X", LinearExpr{{1, 0}});
    sys.define("Y", LinearExpr{{1, 1}});
    double mi = mutual_info(sys, {"X"}, {"Y"});
    CHECK(mi == doctest::Approx(0.5 * std::log(31.0)).epsilon(1e-12));
    CHECK(mi == doctest::Approx(1.717).epsilon(1e-3));
}

TEST_CASE("zero cross-covariance gives zero mutual information") {
    BaseSources bs;
    bs.add("P", 2);
    bs.add("Q", 5);
    GaussianSystem sys(bs);
    sys.define("A", LinearExpr{{1, 0}});
    sys.define("B", LinearExpr{{0, 1}});
    CHECK(mutual_info(sys, {"A"}, {"B"}) == 0.0);
}

TEST_CASE("deterministic relation between sets gives +inf") {
    BaseSources bs;
    bs.add("W", 1.7);
    bs.add("N", 1);
    GaussianSystem sys(bs);
    sys.define("X", LinearExpr{{1, 0}});
    sys.define("Xcopy", LinearExpr{{1, 0}});
    CHECK(std::isinf(mutual_info(sys, {"X"}, {"Xcopy"})));
}

TEST_CASE("mutual information matches a histogram estimate on samples") {
    // Correlated pair with exact MI -0.5*ln(1-rho^2); the plug-in histogram
    // estimator on binned samples is consistent up to the binning loss, which
    // at 64 bins over +-5 sigma is far below the 0.02 gate.
    BaseSources bs;
    bs.add("W", 1.0);
    bs.add("E", 1.0);
    GaussianSystem sys(bs);
    double rho = 0.6;
    sys.define("V", LinearExpr{{1, 0}});
    sys.define("Y", LinearExpr{{rho, std::sqrt(1 - rho * rho)}});
    double exact = mutual_info(sys, {"V"}, {"Y"});
    CHECK(exact == doctest::Approx(-0.5 * std::log(1 - rho * rho)).epsilon(1e-12));

    const int B = 64;
    const long N = 1000000;
    std::vector<long> cnt(B * B, 0);
    Rng rng(20240811);
    auto bin = [&](double x) {
        int k = (int)((x + 5.0) / 10.0 * B);
        return std::min(std::max(k, 0), B - 1);
    };
    for (long t = 0; t < N; ++t) {
        double w = rng.normal(), e = rng.normal();
        double v = w;
        double y = rho * w + std::sqrt(1 - rho * rho) * e;
        ++cnt[bin(v) * B + bin(y)];
    }
    std::vector<double> pr(B, 0), pc(B, 0);
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j) {
            pr[i] += cnt[i * B + j];
            pc[j] += cnt[i * B + j];
        }
    double est = 0;
    for (int i = 0; i < B; ++i)
        for (int j = 0; j < B; ++j) {
            if (!cnt[i * B + j]) continue;
            double pij = (double)cnt[i * B + j] / N;
            est += pij * std::log(pij * N * N / (pr[i] * pc[j]));
        }
    CHECK(std::abs(est - exact) < 0.02);
}

TEST_CASE("conditioning on nothing is plain mutual information") {
    Rng rng(5);
    GaussianSystem sys = random_system(rng);
    CHECK(cond_mutual_info(sys, {"U"}, {"Y"}, {}) == mutual_info(sys, {"U"}, {"Y"}));
}

TEST_CASE("conditioning on a duplicate of B removes all information") {
    BaseSources bs;
    bs.add("W", 2);
    bs.add("E", 1);
    GaussianSystem sys(bs);
    sys.define("A", LinearExpr{{1, 1}});
    sys.define("B", LinearExpr{{1, 0}});
    sys.define("Bdup", LinearExpr{{1, 0}});  // same linear form, different name
    CHECK(cond_mutual_info(sys, {"A"}, {"B"}, {"Bdup"}) == doctest::Approx(0.0).scale(1e-9));
}

TEST_CASE("chain rule I(UV;Y) = I(U;Y) + I(V;Y|U) on random systems") {
    Rng rng(17);
    for (int t = 0; t < 1000; ++t) {
        GaussianSystem sys = random_system(rng);
        double lhs = mutual_info(sys, {"U", "V"}, {"Y"});
        double rhs = mutual_info(sys, {"U"}, {"Y"}) + cond_mutual_info(sys, {"V"}, {"Y"}, {"U"});
        if (std::isinf(lhs) || std::isinf(rhs)) continue;  // degenerate draw
        CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
}

TEST_CASE("mutual information is symmetric, bit for bit") {
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        GaussianSystem sys = random_system(rng);
        CHECK(mutual_info(sys, {"U", "S"}, {"Y", "V"}) == mutual_info(sys, {"Y", "V"}, {"U", "S"}));
    }
}

TEST_CASE("scaling a variable leaves mutual information unchanged") {
    Rng rng(29);
    for (int t = 0; t < 200; ++t) {
        GaussianSystem sys = random_system(rng);
        double before = mutual_info(sys, {"U"}, {"Y"});
        LinearExpr e = sys.expr("Y");
        for (double& c : e.c) c *= 3.7;
        sys.define("Y", e);
        double after = mutual_info(sys, {"U"}, {"Y"});
        if (std::isinf(before)) { CHECK(std::isinf(after)); continue; }
        CHECK(std::abs(before - after) <= 1e-9);
    }
}

TEST_CASE("uninformative observation leaves the full state variance") {
    BaseSources bs;
    bs.add("S", 3);
    bs.add("E", 1);
    GaussianSystem sys(bs);
    sys.define("S", LinearExpr{{1, 0}});
    sys.define("W", LinearExpr{{0, 1}});
    CHECK(mmse_distortion(sys, "S", {"W"}) == 3.0);
    CHECK(mmse_distortion(sys, "S", {}) == 3.0);
}

TEST_CASE("uncoded secret transmission: estimating S from Y") {
    GaussianSystem sys = uncoded_system(-0.3 / 0.7);
    double d = mmse_distortion(sys, "S", {"Y"});
    double c = 1.0 - 0.3 / 0.7;
    CHECK(d == doctest::Approx(3.0 * 1.0 / (3.0 * c * c + 1.0)).epsilon(1e-12));
    CHECK(d == doctest::Approx(1.516).epsilon(1e-3));
}

TEST_CASE("uncoded full-power state amplification: estimating S from Y") {
    GaussianSystem sys = uncoded_system(std::sqrt(30.0 / 3.0));
    double d = mmse_distortion(sys, "S", {"Y"});
    double denom = (std::sqrt(3.0) + std::sqrt(30.0)) * (std::sqrt(3.0) + std::sqrt(30.0)) + 1.0;
    CHECK(d == doctest::Approx(3.0 / denom).epsilon(1e-12));
    CHECK(d == doctest::Approx(0.056).epsilon(2e-2));
    CHECK(std::abs(d - 0.0566) < 5e-4);
}

TEST_CASE("adding an observation never hurts the estimator") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        GaussianSystem sys = random_system(rng);
        double d1 = mmse_distortion(sys, "S", {"U"});
        double d2 = mmse_distortion(sys, "S", {"U", "V"});
        double d3 = mmse_distortion(sys, "S", {"U", "V", "Y"});
        CHECK(d1 >= d2 - 1e-9);
        CHECK(d2 >= d3 - 1e-9);
        CHECK(d3 >= 0.0);
        CHECK(d1 <= cov(sys, {"S"}, {"S"})(0, 0) + 1e-9);
    }
}

TEST_CASE("mmse with a redundant duplicate observation is unchanged") {
    // Singular observation covariance exercised through the pseudo-inverse.
    Rng rng(37);
    GaussianSystem sys = random_system(rng);
    LinearExpr e = sys.expr("Y");
    sys.define("Ydup", e);
    double d1 = mmse_distortion(sys, "S", {"Y"});
    double d2 = mmse_distortion(sys, "S", {"Y", "Ydup"});
    CHECK(std::abs(d1 - d2) <= 1e-9);
}

TEST_CASE("masking-channel independence check on constructed systems") {
    ScenarioConfig cfg;  // defaults: a=0.7, b=0.3, Q=3, sigma_A2=0

    AuxParams ok;
    ok.sT2 = 4;
    ok.sF2 = 2;
    ok.sG2 = 1;
    ok.alpha = 0.5;
    ok.delta = 0;
    ok.gamma = -0.3 / 0.7;
    GaussianSystem s1 = build_system(cfg, ok);
    CHECK(check_independence(s1, "Xi", {"U", "Z"}).independent);

    AuxParams leakZ = ok;
    leakZ.gamma = 0;  // Z keeps its b*S term
    GaussianSystem s2 = build_system(cfg, leakZ);
    auto r2 = check_independence(s2, "Xi", {"U", "Z"});
    CHECK_FALSE(r2.independent);
    CHECK(r2.max_abs_cross_cov == doctest::Approx(0.9).epsilon(1e-12));

    AuxParams leakU = ok;
    leakU.delta = 0.1;  // U = F + delta*S + G picks up the state
    GaussianSystem s3 = build_system(cfg, leakU);
    auto r3 = check_independence(s3, "Xi", {"U", "Z"});
    CHECK_FALSE(r3.independent);
    CHECK(r3.max_abs_cross_cov == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("every valid system yields a PSD covariance") {
    Rng rng(41);
    for (int t = 0; t < 300; ++t) {
        GaussianSystem sys = random_system(rng);
        Eigen::MatrixXd c = cov(sys, {"U", "V", "Y", "S"}, {"U", "V", "Y", "S"});
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
        double lmax = es.eigenvalues().maxCoeff();
        CHECK(es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, lmax));
    }
}

TEST_CASE("logpdet of an empty or zero matrix is rank zero") {
    CHECK(logpdet(Eigen::MatrixXd::Zero(0, 0)).rank == 0);
    CHECK(logpdet(Eigen::MatrixXd::Zero(2, 2)).rank == 0);
    CHECK(logpdet(Eigen::MatrixXd::Zero(2, 2)).value == 0.0);
}

TEST_CASE("duplicate base source or negative variance rejected") {
    BaseSources bs;
    bs.add("S", 1);
    CHECK_THROWS_AS(bs.add("S", 2), std::invalid_argument);
    CHECK_THROWS_AS(bs.add("T", -0.5), std::invalid_argument);
}
