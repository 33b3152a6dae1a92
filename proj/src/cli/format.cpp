#include "lastzero/cli/format.hpp"

#include <charconv>
#include <cmath>

namespace lastzero::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, kSignificantDigits);
  return {buf, res.ptr};
}

double round_significant(double v) {
  if (!std::isfinite(v)) return v;
  const auto s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

}  // namespace lastzero::cli
