#pragma once

#include <json.hpp>

#include <optional>
#include <string>

namespace mmi {

using json = nlohmann::json;

// JSON text with every floating value printed to 17 significant digits and
// keys in sorted order, so equal inputs give byte-identical output.
std::string dump_json(const json& value, int indent = 2);

std::string format_double(double x);

// "p/q" when x is within tol of a fraction with denominator <= max_den.
std::optional<std::string> exact_rational(double x, long long max_den = 100000, double tol = 1e-12);

} // namespace mmi
