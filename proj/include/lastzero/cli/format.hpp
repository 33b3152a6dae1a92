#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace lastzero::cli {

inline constexpr int kSignificantDigits = 12;

/// Locale-independent shortest form with at most 12 significant digits.
std::string format_number(double v);

/// v rounded to 12 significant digits (what format_number prints).
double round_significant(double v);

/// JSON value for a computed result: rounded, and null when not finite.
nlohmann::json json_number(double v);

std::string csv_line(const std::vector<std::string>& cells);

}  // namespace lastzero::cli
