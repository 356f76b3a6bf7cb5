#pragma once

#include <json.hpp>

#include <string>

namespace aplab::cli {

using json = nlohmann::ordered_json;

/// Pretty-printed JSON with every double written at 17 significant digits.
/// NaN and infinities become null.
std::string to_text(const json& doc);

/// Number formatted the same way, for CSV cells.
std::string format_double(double v);

} // namespace aplab::cli
