#include "secisac/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace secisac {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(what + ": " + e.what());
    }
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& ctx) {
    if (!obj.is_object()) throw std::invalid_argument(ctx + ": expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const auto& k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) throw std::invalid_argument("unknown key '" + item.key() + "' in " + ctx);
    }
}

double get_num(const json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.contains(key)) throw std::invalid_argument(ctx + ": missing key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) throw std::invalid_argument(ctx + ": key '" + key + "' must be a number");
    return v.get<double>();
}

double get_num_or(const json& obj, const std::string& key, double dflt, const std::string& ctx) {
    return obj.contains(key) ? get_num(obj, key, ctx) : dflt;
}

int get_int(const json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.contains(key)) throw std::invalid_argument(ctx + ": missing key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(ctx + ": key '" + key + "' must be an integer");
    return v.get<int>();
}

// flattens a nested probability array, checking shape level by level so the
// error names the offending row, e.g. "P_YZ_XS[x=1][s=0]"
void flatten_table(const json& node, const std::vector<std::pair<std::string, int>>& dims,
                   size_t level, std::string path, std::vector<double>& out) {
    if (level == dims.size()) {
        if (!node.is_number())
            throw std::invalid_argument(path + ": expected a number");
        out.push_back(node.get<double>());
        return;
    }
    if (!node.is_array() || (int)node.size() != dims[level].second)
        throw std::invalid_argument(path + ": expected an array of length " +
                                    std::to_string(dims[level].second) + " for " +
                                    dims[level].first);
    for (int k = 0; k < dims[level].second; ++k)
        flatten_table(node[(size_t)k], dims, level + 1,
                      path + "[" + dims[level].first + "=" + std::to_string(k) + "]", out);
}

std::vector<double> load_table(const json& obj, const std::string& key,
                               const std::vector<std::pair<std::string, int>>& dims,
                               const std::string& ctx) {
    if (!obj.contains(key)) throw std::invalid_argument(ctx + ": missing key '" + key + "'");
    std::vector<double> out;
    size_t total = 1;
    for (const auto& d : dims) total *= (size_t)d.second;
    out.reserve(total);
    flatten_table(obj.at(key), dims, 0, key, out);
    return out;
}

ScenarioConfig parse_gauss_scenario(const json& j) {
    reject_unknown(j, {"kind", "P", "Q", "sigma2", "sigma_e2", "a", "b", "secrecy_mode",
                       "sigma_A2"},
                   "gaussian scenario");
    ScenarioConfig sc;
    sc.P = get_num_or(j, "P", sc.P, "gaussian scenario");
    sc.Q = get_num_or(j, "Q", sc.Q, "gaussian scenario");
    sc.sigma2 = get_num_or(j, "sigma2", sc.sigma2, "gaussian scenario");
    sc.sigma_e2 = get_num_or(j, "sigma_e2", sc.sigma_e2, "gaussian scenario");
    sc.a = get_num_or(j, "a", sc.a, "gaussian scenario");
    sc.b = get_num_or(j, "b", sc.b, "gaussian scenario");
    if (j.contains("secrecy_mode")) {
        if (!j.at("secrecy_mode").is_string())
            throw std::invalid_argument("gaussian scenario: secrecy_mode must be a string");
        sc.mode = mode_from_name(j.at("secrecy_mode").get<std::string>());
    }
    if (j.contains("sigma_A2")) {
        const json& v = j.at("sigma_A2");
        if (v.is_string()) {
            if (v.get<std::string>() != "unbounded")
                throw std::invalid_argument(
                    "gaussian scenario: sigma_A2 must be a number or \"unbounded\"");
            sc.sigma_A2_unbounded = true;
            sc.sigma_A2 = 0;
        } else if (v.is_number()) {
            sc.sigma_A2 = v.get<double>();
        } else {
            throw std::invalid_argument(
                "gaussian scenario: sigma_A2 must be a number or \"unbounded\"");
        }
    }
    sc.validate();
    return sc;
}

DmcScenario parse_dmc_scenario(const json& j) {
    reject_unknown(j, {"kind", "S", "Xi", "X", "Y", "Z", "Shat", "P_S", "P_Xi_S", "P_YZ_XS",
                       "distortion"},
                   "dmc scenario");
    DmcScenario sc;
    sc.nS = get_int(j, "S", "dmc scenario");
    sc.nXi = get_int(j, "Xi", "dmc scenario");
    sc.nX = get_int(j, "X", "dmc scenario");
    sc.nY = get_int(j, "Y", "dmc scenario");
    sc.nZ = get_int(j, "Z", "dmc scenario");
    sc.nShat = get_int(j, "Shat", "dmc scenario");
    if (sc.nS < 1 || sc.nXi < 1 || sc.nX < 1 || sc.nY < 1 || sc.nZ < 1 || sc.nShat < 1)
        throw std::invalid_argument("dmc scenario: alphabet sizes must be >= 1");
    sc.P_S = load_table(j, "P_S", {{"s", sc.nS}}, "dmc scenario");
    sc.P_Xi_S = load_table(j, "P_Xi_S", {{"s", sc.nS}, {"xi", sc.nXi}}, "dmc scenario");
    sc.P_YZ_XS = load_table(
        j, "P_YZ_XS", {{"x", sc.nX}, {"s", sc.nS}, {"y", sc.nY}, {"z", sc.nZ}}, "dmc scenario");
    sc.dist = load_table(j, "distortion", {{"s", sc.nS}, {"shat", sc.nShat}}, "dmc scenario");
    sc.validate();
    return sc;
}

LoadedScenario parse_scenario(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw std::invalid_argument("scenario: missing string key 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    LoadedScenario out;
    if (kind == "gaussian") {
        out.gaussian = true;
        out.gauss = parse_gauss_scenario(j);
    } else if (kind == "dmc") {
        out.gaussian = false;
        out.dmc = parse_dmc_scenario(j);
    } else {
        throw std::invalid_argument("scenario: kind must be \"gaussian\" or \"dmc\", got \"" +
                                    kind + "\"");
    }
    return out;
}

AuxChannel parse_aux(const json& j, const DmcScenario& sc) {
    reject_unknown(j, {"U", "V", "P_UVX_S"}, "aux channel");
    AuxChannel aux;
    aux.nU = get_int(j, "U", "aux channel");
    aux.nV = get_int(j, "V", "aux channel");
    if (aux.nU < 1 || aux.nV < 1)
        throw std::invalid_argument("aux channel: U and V must be >= 1");
    aux.P_UVX_S = load_table(
        j, "P_UVX_S", {{"s", sc.nS}, {"u", aux.nU}, {"v", aux.nV}, {"x", sc.nX}}, "aux channel");
    aux.validate(sc);
    return aux;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedScenario load_scenario_file(const std::string& path) {
    return parse_scenario(parse_json(read_file(path), path));
}

LoadedScenario parse_scenario_text(const std::string& text, const std::string& what) {
    return parse_scenario(parse_json(text, what));
}

AuxParams parse_gauss_params_text(const std::string& text, const std::string& what) {
    json j = parse_json(text, what);
    reject_unknown(j, {"sigma_T2", "sigma_F2", "sigma_G2", "delta", "alpha", "epsilon", "gamma"},
                   "gaussian params");
    AuxParams p;
    p.sT2 = get_num(j, "sigma_T2", "gaussian params");
    p.sF2 = get_num(j, "sigma_F2", "gaussian params");
    p.sG2 = get_num(j, "sigma_G2", "gaussian params");
    p.delta = get_num(j, "delta", "gaussian params");
    p.alpha = get_num(j, "alpha", "gaussian params");
    p.eps = get_num(j, "epsilon", "gaussian params");
    p.gamma = get_num(j, "gamma", "gaussian params");
    return p;
}

AuxParams load_gauss_params_file(const std::string& path) {
    return parse_gauss_params_text(read_file(path), path);
}

AuxChannel load_aux_file(const std::string& path, const DmcScenario& sc) {
    return parse_aux(parse_json(read_file(path), path), sc);
}

AuxChannel parse_aux_text(const std::string& text, const DmcScenario& sc,
                          const std::string& what) {
    return parse_aux(parse_json(text, what), sc);
}

Experiment parse_experiment_text(const std::string& text, const std::string& what) {
    json j = parse_json(text, what);
    reject_unknown(j,
                   {"scenario", "aux", "n_values", "R_M", "R_I", "R_J", "epsilon", "trials",
                    "seed", "leakage", "leakage_cap", "codebook_cap"},
                   "experiment");
    if (!j.contains("scenario")) throw std::invalid_argument("experiment: missing key 'scenario'");
    LoadedScenario sc = parse_scenario(j.at("scenario"));
    if (sc.gaussian)
        throw std::invalid_argument("experiment: simulation requires a dmc scenario");
    Experiment ex;
    ex.sc = sc.dmc;
    if (!j.contains("aux")) throw std::invalid_argument("experiment: missing key 'aux'");
    ex.aux = parse_aux(j.at("aux"), ex.sc);
    if (!j.contains("n_values") || !j.at("n_values").is_array())
        throw std::invalid_argument("experiment: missing array key 'n_values'");
    for (const auto& v : j.at("n_values")) {
        if (!v.is_number_integer())
            throw std::invalid_argument("experiment: n_values entries must be integers");
        ex.cfg.n_values.push_back(v.get<int>());
    }
    ex.cfg.R_M = get_num(j, "R_M", "experiment");
    ex.cfg.R_I = get_num(j, "R_I", "experiment");
    ex.cfg.R_J = get_num(j, "R_J", "experiment");
    ex.cfg.eps = get_num_or(j, "epsilon", ex.cfg.eps, "experiment");
    if (!j.contains("trials")) throw std::invalid_argument("experiment: missing key 'trials'");
    if (!j.at("trials").is_number_integer())
        throw std::invalid_argument("experiment: trials must be an integer");
    ex.cfg.trials = j.at("trials").get<long>();
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer())
            throw std::invalid_argument("experiment: seed must be an integer");
        ex.cfg.seed = j.at("seed").get<uint64_t>();
    }
    if (j.contains("leakage")) {
        if (!j.at("leakage").is_string())
            throw std::invalid_argument("experiment: leakage must be \"exact\" or \"off\"");
        std::string lk = j.at("leakage").get<std::string>();
        if (lk == "exact")
            ex.cfg.leakage_exact = true;
        else if (lk == "off")
            ex.cfg.leakage_exact = false;
        else
            throw std::invalid_argument("experiment: leakage must be \"exact\" or \"off\"");
    }
    ex.cfg.leakage_cap = get_num_or(j, "leakage_cap", ex.cfg.leakage_cap, "experiment");
    ex.cfg.codebook_cap = get_num_or(j, "codebook_cap", ex.cfg.codebook_cap, "experiment");
    ex.cfg.validate();
    return ex;
}

Experiment load_experiment_file(const std::string& path) {
    return parse_experiment_text(read_file(path), path);
}

LinIneqSystem parse_ineq_text(const std::string& text) {
    LinIneqSystem sys;
    std::istringstream in(text);
    std::string line;
    bool have_vars = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        std::string where = "line " + std::to_string(lineno);
        if (!have_vars) {
            if (tok[0] != "vars")
                throw std::invalid_argument(where +
                                            ": expected a 'vars NAME...' header, got '" + tok[0] +
                                            "'");
            for (size_t k = 1; k < tok.size(); ++k) {
                if (sys.var_index(tok[k]) >= 0)
                    throw std::invalid_argument(where + ": duplicate variable '" + tok[k] + "'");
                sys.vars.push_back(tok[k]);
            }
            have_vars = true;
            continue;
        }
        // grammar: c NAME (+|- c NAME)* (<=|>=) rhs
        std::vector<double> c(sys.vars.size(), 0.0);
        size_t k = 0;
        double sign = 1.0;
        bool done = false;
        while (k < tok.size() && !done) {
            if (tok[k] == "<=" || tok[k] == ">=") break;
            char* end = nullptr;
            double coef = std::strtod(tok[k].c_str(), &end);
            if (end == tok[k].c_str() || *end != '\0')
                throw std::invalid_argument(where + ": cannot parse coefficient '" + tok[k] + "'");
            if (k + 1 >= tok.size())
                throw std::invalid_argument(where + ": coefficient '" + tok[k] +
                                            "' not followed by a variable");
            int vi = sys.var_index(tok[k + 1]);
            if (vi < 0)
                throw std::invalid_argument(where + ": unknown variable '" + tok[k + 1] + "'");
            c[(size_t)vi] += sign * coef;
            k += 2;
            if (k < tok.size() && (tok[k] == "+" || tok[k] == "-")) {
                sign = tok[k] == "+" ? 1.0 : -1.0;
                ++k;
            } else {
                done = true;
            }
        }
        if (k >= tok.size() || (tok[k] != "<=" && tok[k] != ">="))
            throw std::invalid_argument(where + ": expected '<=' or '>=', got '" +
                                        (k < tok.size() ? tok[k] : std::string("end of line")) +
                                        "'");
        std::string sense = tok[k];
        ++k;
        if (k >= tok.size())
            throw std::invalid_argument(where + ": missing right-hand side");
        char* end = nullptr;
        double rhs = std::strtod(tok[k].c_str(), &end);
        if (end == tok[k].c_str() || *end != '\0')
            throw std::invalid_argument(where + ": cannot parse right-hand side '" + tok[k] + "'");
        ++k;
        if (k != tok.size())
            throw std::invalid_argument(where + ": unexpected trailing token '" + tok[k] + "'");
        sys.add(c, sense, rhs);
    }
    return sys;
}

namespace {

std::string csv_num(double v) {
    if (std::isnan(v)) return "";
    return fmt_g(v, 12);
}

}  // namespace

std::string frontier_csv(const std::vector<RegionPoint>& pts) {
    std::string out =
        "mode,D,R_M_nats,R_M_bits,sigma_T2,sigma_F2,sigma_G2,delta,alpha,epsilon,gamma,"
        "power_used\n";
    for (const auto& p : pts) {
        out += mode_name(p.mode);
        out += "," + csv_num(p.D) + "," + csv_num(p.R) + "," + csv_num(p.R / std::log(2.0));
        out += "," + csv_num(p.params.sT2) + "," + csv_num(p.params.sF2) + "," +
               csv_num(p.params.sG2) + "," + csv_num(p.params.delta) + "," +
               csv_num(p.params.alpha) + "," + csv_num(p.params.eps) + "," +
               csv_num(p.params.gamma) + "," + csv_num(p.power_used) + "\n";
    }
    return out;
}

std::string dmc_frontier_csv(const std::vector<DmcRegionPoint>& pts) {
    std::string out =
        "mode,D,R_M_nats,R_M_bits,sigma_T2,sigma_F2,sigma_G2,delta,alpha,epsilon,gamma,"
        "power_used\n";
    for (const auto& p : pts) {
        out += dmc_mode_name(p.mode);
        out += "," + csv_num(p.D) + "," + csv_num(p.R) + "," + csv_num(p.R / std::log(2.0));
        out += ",,,,,,,,\n";  // channel-parameter columns are gaussian-only
    }
    return out;
}

std::string sim_csv(const SimResult& res) {
    std::string out = "n,Pe,Pe_ci,distortion,leakage_nats_per_symbol,leakage_method\n";
    for (const auto& r : res.rows) {
        out += std::to_string(r.n) + "," + csv_num(r.Pe) + "," + csv_num(r.Pe_ci) + "," +
               csv_num(r.distortion) + "," + csv_num(r.leakage) + "," + r.leakage_method + "\n";
    }
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out.write(content.data(), (std::streamsize)content.size());
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace secisac
