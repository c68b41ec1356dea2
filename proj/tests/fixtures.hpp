#pragma once

#include "edsfrey/io.hpp"

#include "oracles.hpp"

#include <string>

namespace fixtures {

inline std::string curve_path(const std::string& name) {
    return std::string(EDSFREY_DATA_DIR) + "/curves/" + name + ".json";
}

inline edsfrey::CurveInput curve(const std::string& name) { return edsfrey::load_curve(curve_path(name)); }

// The bundled curves with a non-torsion generator.
inline const std::vector<std::string>& bundled() {
    static const std::vector<std::string> names{"37a", "25x", "53a_4P"};
    return names;
}

inline std::vector<mpz_class> oracle_terms(const edsfrey::CurveInput& c, unsigned long N) {
    return oracle::eds_by_addition(c.a, c.x, c.y, N);
}

}  // namespace fixtures
