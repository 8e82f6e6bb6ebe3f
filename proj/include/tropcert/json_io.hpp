#pragma once

// JSON interchange. Every emitted document carries "schema": 1; rationals
// are strings "p/q" or "p" in lowest terms.

#include <cstddef>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tropcert/certify.hpp"
#include "tropcert/curve.hpp"
#include "tropcert/fan.hpp"
#include "tropcert/special_fiber.hpp"

namespace tropcert {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Parse or schema failure at a 1-based line and column of the input text.
class InputError : public Error {
 public:
  InputError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::ParseError, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

TropicalCurve parse_curve(std::string_view text);
MetricGraph parse_metric_graph(std::string_view text);
C0Witness parse_witness(std::string_view text);

json to_json(const TropicalCurve& c);
json to_json(const MetricGraph& g);
json to_json(const ValidationReport& r);
json to_json(const Fan& f);
json to_json(const RatMatrix& m);
json to_json(const AbundancyMatrix& m);
json to_json(const SuperabundanceReport& r);
json to_json(const C0Witness& w);
json to_json(const Certificate& c);

// Line segments for plotting (n <= 3): decimals plus the exact curve.
// Throws UnsupportedDimension.
json plot_json(const TropicalCurve& c);

// Sorted keys, no whitespace.
std::string canonical_dump(const json& j);
// Indented document with a trailing newline.
std::string pretty_dump(const json& j);

std::string sha256_hex(std::string_view data);
std::string curve_hash(const TropicalCurve& c);

}  // namespace tropcert
