#pragma once

#include <string>

#include <json.hpp>

#include "lindyn/fhc.hpp"
#include "lindyn/inverse_analysis.hpp"

namespace lindyn {

using json = nlohmann::json;

// Scalars serialize as {"m": decimal mantissa string, "e": exponent};
// vectors as arrays of {"i", "m", "e"}. Round trips are bit-exact.
json dyadic_to_json(const Dyadic& d);
Dyadic dyadic_from_json(const json& j);

json finvec_to_json(const FinVec& v);
FinVec finvec_from_json(const json& j);

json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const json& j);

/// Loads a schedule from a file path or one of the built-in names
/// ("canonical", "toy4"), derives the structure and finalizes a synthesized
/// coupling rule if the schedule asks for one.
OperatorSpec load_spec(const std::string& path_or_name, int k_max_override = -1);

FinVec load_finvec(const std::string& path);
void write_json_atomic(const std::string& path, const json& j);

}  // namespace lindyn
