#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hb/homotopy.hpp"
#include "hb/smoothing.hpp"

namespace hbcli {

using json = nlohmann::json;

// Malformed input; `what()` starts with the offending field path.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& path, const std::string& msg) : std::runtime_error(path + ": " + msg) {}
};

// A file path, or inline JSON when the argument starts with '{'.
json load_json(const std::string& arg, const std::string& what);

// {"type": "disc"} | {"type": "fourier", "c0", "cos", "sin"} |
// {"type": "samples", "points": [[x, y], ...]} |
// {"type": "smoothed_polygon", "polygon", "s", "width"?}
// with optional "rotate", "about", "translate", "mark_shift".
hb::TableCurve parse_table(const json& j, const std::string& path = "table");

hb::FourierSupportSpec parse_support(const json& j, const std::string& path);

// {"vertices": [[x, y], ...], "mark": t0, "normalize"?: bool}
hb::PolygonSpec parse_polygon(const json& j, const std::string& path = "polygon");

// {"type": "translation", "table", "v"} | {"type": "support_interp", "from", "to"} |
// {"type": "normal_perturbation", "table", "f"} |
// {"type": "smoothing_restriction", "polygon", "from", "to", "width"?}
hb::TablePath parse_path(const json& j, const std::string& path = "path");

}  // namespace hbcli
