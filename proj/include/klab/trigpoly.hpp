#pragma once

#include <json.hpp>

#include "klab/field.hpp"

namespace klab {

// Finite trigonometric polynomial: sum of coeff * prod_f trig(2 pi k x_a / L_a).
// Exactly evaluable on any lattice, so scenario fields are reproducible
// across implementations.
struct TrigFactor {
    int axis = 0;
    bool is_cos = true;
    int k = 1;
};

struct TrigTerm {
    double coeff = 0;
    std::vector<TrigFactor> factors;
};

struct TrigPoly {
    std::vector<TrigTerm> terms;
};

RealField evaluate(const TrigPoly& p, const LatticePtr& lat);

TrigPoly trigpoly_from_json(const nlohmann::json& j);
nlohmann::json trigpoly_to_json(const TrigPoly& p);

}  // namespace klab
