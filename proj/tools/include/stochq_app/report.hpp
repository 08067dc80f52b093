#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace stochq::app {

using Json = nlohmann::ordered_json;

/// Bad command-line input; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Value = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  /// Leading columns that identify a row; rendered verbatim, not at fixed precision.
  std::size_t label_columns = 1;
  std::vector<std::vector<Value>> rows;

  bool operator==(const Table&) const = default;
};

struct Metric {
  std::string name;
  double value = 0.0;
  std::optional<double> half_width;

  bool operator==(const Metric&) const = default;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  /// One of "<=", "<", ">=", ">", "==".
  std::string relation;
  double threshold = 0.0;

  bool operator==(const Check&) const = default;
};

/// Builds a check that passes iff `value relation threshold`.
Check make_check(std::string name, double value, std::string relation, double threshold);

struct Report {
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, Value>> inputs;
  std::vector<Table> tables;
  std::vector<Metric> metrics;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool all_passed() const;
  bool operator==(const Report&) const = default;
};

enum class Format { Markdown, Csv, Json };

Format parse_format(const std::string& text);

Json to_json(const Report& report);
/// Inverse of to_json. Throws UsageError on a malformed document.
Report report_from_json(const Json& doc);

std::string render_json(const Report& report);
std::string render_markdown(const Report& report, int precision);
/// RFC 4180: CRLF line ends, fields quoted when they contain a comma, quote or
/// line break. One record per cell in long form: section,name,row,column,value.
std::string render_csv(const Report& report, int precision);
std::string render(const Report& report, Format format, int precision);

/// Fixed-point text with `precision` decimals, rounded half to even on the
/// exact binary value. Negative zero prints without a sign.
std::string format_fixed(double value, int precision);
/// Shortest text that round-trips to the same double.
std::string format_shortest(double value);

}  // namespace stochq::app
