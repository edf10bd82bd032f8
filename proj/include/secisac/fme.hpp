#pragma once
// Fourier-Motzkin elimination over small named-variable inequality systems,
// plus the projection of the two-layer coding scheme's rate conditions onto
// the message rate. Systems here have at most a handful of variables, so only
// syntactic redundancy removal is done (duplicates and identical-coefficient
// dominance); no LP-based pruning.

#include <string>
#include <vector>

namespace secisac {

struct LinIneq {
    std::vector<double> c;  // coefficients, aligned with LinIneqSystem::vars
    double rhs = 0;         // normalized sense: c . x <= rhs
};

struct LinIneqSystem {
    std::vector<std::string> vars;
    std::vector<LinIneq> rows;

    int var_index(const std::string& name) const;  // -1 if absent
    // Append c . x (sense) rhs; sense is "<=" or ">=".
    void add(const std::vector<double>& c, const std::string& sense, double rhs);
    std::string to_text() const;
};

// Project out one variable by pairwise combination of its upper and lower
// bounds. Trivially-true constant rows are pruned; an infeasible constant row
// (0 <= negative) is kept to witness emptiness. Throws if var is undeclared.
LinIneqSystem eliminate(const LinIneqSystem& sys, const std::string& var);

struct SchemeMi {
    double i_us;      // I(U;S)
    double i_uvs;     // I(U,V;S)
    double i_vxz_u;   // I(V;Xi,Z|U)
    double i_uvy;     // I(U,V;Y)
    double i_vy_u;    // I(V;Y|U)
};

struct SchemeProjection {
    double fme_bound;         // max message rate surviving elimination
    double closed_form[3];    // I(UV;Y)-I(UV;S), I(V;Y|U)-I(V;XiZ|U), I(UV;Y)-I(U;S)-I(V;XiZ|U)
    double closed_form_min;
    LinIneqSystem projected;  // remaining system over R_M only
};

// Builds the scheme's rate system (covering lower bounds, decodability upper
// bounds, nonnegativity), eliminates R_I then R_J, and checks the surviving
// message-rate ceiling against the three closed forms. Throws
// std::invalid_argument on negative or chain-inconsistent inputs.
SchemeProjection project_scheme_rates(const SchemeMi& mi);

}  // namespace secisac
