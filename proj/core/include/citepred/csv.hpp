#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace citepred::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and doubled
/// quotes; embedded newlines are not supported.
std::vector<std::string> split_line(std::string_view line);

/// Quotes a field only when it contains a comma, quote or leading/trailing space.
std::string escape(std::string_view field);

/// Line-oriented reader that skips blank lines and `#` metadata lines and
/// tracks the physical line number for diagnostics.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input.
  std::optional<std::vector<std::string>> next();
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Fixed-point rendering with `digits` decimals, used by the aligned text tables.
std::string format_fixed(double value, int digits);

/// Parses a decimal with `.` separator; the whole field must be consumed.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace citepred::csv
