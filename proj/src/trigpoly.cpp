#include "klab/trigpoly.hpp"

#include <cmath>

#include "klab/errors.hpp"

namespace klab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}
}  // namespace

RealField evaluate(const TrigPoly& p, const LatticePtr& lat) {
    RealField out(lat);
    for (const TrigTerm& term : p.terms) {
        for (const TrigFactor& f : term.factors)
            if (f.axis < 0 || f.axis >= lat->real_dim())
                throw ConfigError("trig factor axis out of range");
        for (std::size_t node = 0; node < out.size(); ++node) {
            double v = term.coeff;
            for (const TrigFactor& f : term.factors) {
                const double arg = kTwoPi * f.k * lat->coord(node, f.axis) /
                                   lat->period(f.axis);
                v *= f.is_cos ? std::cos(arg) : std::sin(arg);
            }
            out[node] += v;
        }
    }
    return out;
}

TrigPoly trigpoly_from_json(const nlohmann::json& j) {
    check_keys(j, {"terms"}, "trig polynomial");
    TrigPoly p;
    for (const auto& jt : j.at("terms")) {
        check_keys(jt, {"coeff", "factors"}, "trig term");
        TrigTerm t;
        t.coeff = jt.at("coeff").get<double>();
        if (jt.contains("factors")) {
            for (const auto& jf : jt.at("factors")) {
                check_keys(jf, {"axis", "fn", "k"}, "trig factor");
                TrigFactor f;
                f.axis = jf.at("axis").get<int>();
                const std::string fn = jf.at("fn").get<std::string>();
                if (fn != "cos" && fn != "sin")
                    throw ConfigError("trig factor fn must be cos or sin");
                f.is_cos = fn == "cos";
                f.k = jf.value("k", 1);
                t.factors.push_back(f);
            }
        }
        p.terms.push_back(std::move(t));
    }
    return p;
}

nlohmann::json trigpoly_to_json(const TrigPoly& p) {
    nlohmann::json j;
    j["terms"] = nlohmann::json::array();
    for (const TrigTerm& t : p.terms) {
        nlohmann::json jt;
        jt["coeff"] = t.coeff;
        jt["factors"] = nlohmann::json::array();
        for (const TrigFactor& f : t.factors) {
            nlohmann::json jf;
            jf["axis"] = f.axis;
            jf["fn"] = f.is_cos ? "cos" : "sin";
            jf["k"] = f.k;
            jt["factors"].push_back(jf);
        }
        j["terms"].push_back(jt);
    }
    return j;
}

}  // namespace klab
