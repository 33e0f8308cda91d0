#pragma once

#include <json.hpp>

#include "curves/halving.hpp"
#include "curves/moves.hpp"

namespace curves {

using nlohmann::json;

// Strict parsers: unknown fields are rejected with SchemaError.

json diagram_to_json(const CurveDiagram& d);
CurveDiagram diagram_from_json(const json& j);

json move_to_json(const Move& m);
Move move_from_json(const json& j);

json script_to_json(const HomotopyScript& s);
HomotopyScript script_from_json(const json& j);

// {"path":[{"level","crossing":id|null,"side"}],"outcome":"point"|"resume_at_level","resume_level"?}
json halving_to_json(const SubcurveSelection& sel);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace curves
