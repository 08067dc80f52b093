#include "stochq_app/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace stochq::app {
namespace {

// Every finite double has at most 1074 fractional decimal digits.
constexpr int kExactDigits = 1100;

std::string value_text(const Value& v, bool label, int precision) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const double d = std::get<double>(v);
  return label ? format_shortest(d) : format_fixed(d, precision);
}

Json value_json(const Value& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

Value value_from_json(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  throw UsageError("report: cell must be a string or a number");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_record(std::ostringstream& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << csv_field(f);
    first = false;
  }
  out << "\r\n";
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw UsageError(std::string("report: missing field '") + key + "'");
  }
  return doc.at(key);
}

}  // namespace

Check make_check(std::string name, double value, std::string relation, double threshold) {
  bool ok = false;
  if (relation == "<=") ok = value <= threshold;
  else if (relation == "<") ok = value < threshold;
  else if (relation == ">=") ok = value >= threshold;
  else if (relation == ">") ok = value > threshold;
  else if (relation == "==") ok = value == threshold;
  else throw std::invalid_argument("make_check: unknown relation " + relation);
  return Check{std::move(name), ok, value, std::move(relation), threshold};
}

bool Report::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Format parse_format(const std::string& text) {
  if (text == "md" || text == "markdown") return Format::Markdown;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("unknown format '" + text + "' (expected md, csv or json)");
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double value, int precision) {
  if (!std::isfinite(value)) return format_shortest(value);
  if (precision < 0) precision = 0;
  std::string exact(kExactDigits + 400, '\0');
  const auto res = std::to_chars(exact.data(), exact.data() + exact.size(), std::fabs(value),
                                 std::chars_format::fixed, kExactDigits);
  exact.resize(static_cast<std::size_t>(res.ptr - exact.data()));

  const std::size_t dot = exact.find('.');
  std::string digits = exact.substr(0, dot) + exact.substr(dot + 1, static_cast<std::size_t>(precision));
  const std::string rest = exact.substr(dot + 1 + static_cast<std::size_t>(precision));

  bool round_up = false;
  if (!rest.empty() && rest[0] > '5') {
    round_up = true;
  } else if (!rest.empty() && rest[0] == '5') {
    const bool above_half = rest.find_first_not_of('0', 1) != std::string::npos;
    round_up = above_half || ((digits.back() - '0') % 2 == 1);
  }
  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == '9') digits[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) digits.insert(digits.begin(), '1');
    else ++digits[static_cast<std::size_t>(i)];
  }

  const std::size_t int_len = digits.size() - static_cast<std::size_t>(precision);
  std::string out = digits.substr(0, int_len);
  if (precision > 0) out += "." + digits.substr(int_len);
  const bool zero = out.find_first_not_of("0.") == std::string::npos;
  if (std::signbit(value) && !zero) out.insert(out.begin(), '-');
  return out;
}

Json to_json(const Report& report) {
  Json doc;
  doc["command"] = report.command;
  doc["version"] = report.version;
  Json inputs = Json::object();
  for (const auto& [k, v] : report.inputs) inputs[k] = value_json(v);
  doc["inputs"] = inputs;

  Json tables = Json::array();
  for (const auto& t : report.tables) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json r = Json::array();
      for (const auto& cell : row) r.push_back(value_json(cell));
      rows.push_back(r);
    }
    tables.push_back(Json{{"name", t.name},
                          {"columns", t.columns},
                          {"label_columns", t.label_columns},
                          {"rows", rows}});
  }
  doc["tables"] = tables;

  Json metrics = Json::object();
  Json intervals = Json::object();
  for (const auto& m : report.metrics) {
    metrics[m.name] = m.value;
    if (m.half_width) intervals[m.name] = *m.half_width;
  }
  doc["metrics"] = metrics;
  doc["half_widths"] = intervals;

  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"relation", c.relation},
                          {"threshold", c.threshold}});
  }
  doc["checks"] = checks;
  doc["notes"] = report.notes;
  return doc;
}

Report report_from_json(const Json& doc) {
  try {
    Report r;
    r.command = require(doc, "command").get<std::string>();
    r.version = require(doc, "version").get<std::string>();
    for (const auto& [k, v] : require(doc, "inputs").items()) r.inputs.emplace_back(k, value_from_json(v));
    for (const auto& t : require(doc, "tables")) {
      Table table;
      table.name = require(t, "name").get<std::string>();
      table.columns = require(t, "columns").get<std::vector<std::string>>();
      table.label_columns = require(t, "label_columns").get<std::size_t>();
      for (const auto& row : require(t, "rows")) {
        std::vector<Value> cells;
        for (const auto& cell : row) cells.push_back(value_from_json(cell));
        table.rows.push_back(std::move(cells));
      }
      r.tables.push_back(std::move(table));
    }
    const Json& intervals = require(doc, "half_widths");
    for (const auto& [k, v] : require(doc, "metrics").items()) {
      Metric m{k, v.get<double>(), std::nullopt};
      if (intervals.contains(k)) m.half_width = intervals.at(k).get<double>();
      r.metrics.push_back(std::move(m));
    }
    for (const auto& c : require(doc, "checks")) {
      r.checks.push_back(Check{require(c, "name").get<std::string>(), require(c, "passed").get<bool>(),
                               require(c, "value").get<double>(),
                               require(c, "relation").get<std::string>(),
                               require(c, "threshold").get<double>()});
    }
    r.notes = require(doc, "notes").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("report: ") + e.what());
  }
}

std::string render_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

std::string render_markdown(const Report& report, int precision) {
  std::ostringstream out;
  out << "# stochq " << report.command << "\n\n";
  out << "version " << report.version << "\n\n";

  if (!report.inputs.empty()) {
    out << "## Inputs\n\n| name | value |\n|---|---|\n";
    for (const auto& [k, v] : report.inputs) {
      out << "| " << md_escape(k) << " | " << md_escape(value_text(v, true, precision)) << " |\n";
    }
    out << "\n";
  }

  for (const auto& t : report.tables) {
    out << "## " << t.name << "\n\n|";
    for (const auto& c : t.columns) out << ' ' << md_escape(c) << " |";
    out << "\n|";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i < t.label_columns ? "---|" : "---:|");
    out << "\n";
    for (const auto& row : t.rows) {
      out << "|";
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << ' ' << md_escape(value_text(row[i], i < t.label_columns, precision)) << " |";
      }
      out << "\n";
    }
    out << "\n";
  }

  if (!report.metrics.empty()) {
    out << "## Metrics\n\n| name | value | half-width |\n|---|---:|---:|\n";
    for (const auto& m : report.metrics) {
      out << "| " << md_escape(m.name) << " | " << format_shortest(m.value) << " | "
          << (m.half_width ? format_shortest(*m.half_width) : "") << " |\n";
    }
    out << "\n";
  }

  if (!report.checks.empty()) {
    out << "## Checks\n\n| check | value | relation | threshold | result |\n|---|---:|:---:|---:|---|\n";
    for (const auto& c : report.checks) {
      out << "| " << md_escape(c.name) << " | " << format_shortest(c.value) << " | " << c.relation
          << " | " << format_shortest(c.threshold) << " | " << (c.passed ? "PASS" : "FAIL") << " |\n";
    }
    out << "\n";
  }

  if (!report.notes.empty()) {
    out << "## Notes\n\n";
    for (const auto& n : report.notes) out << "- " << n << "\n";
    out << "\n";
  }
  return out.str();
}

std::string render_csv(const Report& report, int precision) {
  std::ostringstream out;
  csv_record(out, {"section", "name", "row", "column", "value"});
  csv_record(out, {"meta", "command", "", "", report.command});
  csv_record(out, {"meta", "version", "", "", report.version});
  for (const auto& [k, v] : report.inputs) csv_record(out, {"input", k, "", "", value_text(v, true, precision)});
  for (const auto& t : report.tables) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
        csv_record(out, {"table", t.name, std::to_string(r), t.columns.at(c),
                         value_text(t.rows[r][c], c < t.label_columns, precision)});
      }
    }
  }
  for (const auto& m : report.metrics) {
    csv_record(out, {"metric", m.name, "", "value", format_shortest(m.value)});
    if (m.half_width) csv_record(out, {"metric", m.name, "", "half_width", format_shortest(*m.half_width)});
  }
  for (const auto& c : report.checks) {
    csv_record(out, {"check", c.name, "", "value", format_shortest(c.value)});
    csv_record(out, {"check", c.name, "", "relation", c.relation});
    csv_record(out, {"check", c.name, "", "threshold", format_shortest(c.threshold)});
    csv_record(out, {"check", c.name, "", "passed", c.passed ? "true" : "false"});
  }
  for (std::size_t i = 0; i < report.notes.size(); ++i) {
    csv_record(out, {"note", "", std::to_string(i), "", report.notes[i]});
  }
  return out.str();
}

std::string render(const Report& report, Format format, int precision) {
  switch (format) {
    case Format::Markdown: return render_markdown(report, precision);
    case Format::Csv: return render_csv(report, precision);
    case Format::Json: return render_json(report);
  }
  return {};
}

}  // namespace stochq::app
