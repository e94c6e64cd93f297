#pragma once

#include <string>
#include <string_view>

#include "lclab/measure.hpp"

namespace lclab {

// JSON schema:
//   {"atoms":[{"x":..,"w":..}],
//    "pieces":[{"a":..,"b":..|"inf","coeffs":[..],"rate":..}],
//    "signed":false}
// The rate field is optional and defaults to 0.
HalfLineMeasure measure_from_json_text(std::string_view text);
std::string measure_to_json_text(const HalfLineMeasure& mu, int indent = 2);

HalfLineMeasure load_measure_file(const std::string& path);

// Accepts either a named measure ("uniform(1,2)") or a path to a JSON file.
HalfLineMeasure resolve_measure(const std::string& name_or_path);

}  // namespace lclab
