#include "mtree/signals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "mtree/error.hpp"

namespace mtree::io {

double normalize_scale(double raw, const ScaleSpec& scale) {
  if (!(scale.raw_min < scale.raw_max)) {
    throw Error(ErrorCode::ScaleViolation, "scale minimum must be below its maximum");
  }
  if (!std::isfinite(raw) || raw < scale.raw_min || raw > scale.raw_max) {
    throw Error(ErrorCode::ScaleViolation, "raw value " + std::to_string(raw) + " outside [" +
                                               std::to_string(scale.raw_min) + ", " + std::to_string(scale.raw_max) +
                                               "]");
  }
  const double mapped = 10.0 * (raw - scale.raw_min) / (scale.raw_max - scale.raw_min);
  return scale.direction == RiskDirection::LowerIsRisk ? 10.0 - mapped : mapped;
}

namespace {

[[noreturn]] void table_error(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::TableError, "line " + std::to_string(line) + ": " + why);
}

std::vector<std::string> split_record(std::string_view line, char delim, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  std::size_t i = 0;
  while (true) {
    cur.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        cur += line[i++];
      }
      if (!closed) table_error(lineno, "unterminated quoted field");
      if (i < line.size() && line[i] != delim) table_error(lineno, "text after closing quote");
    } else {
      while (i < line.size() && line[i] != delim) cur += line[i++];
    }
    fields.push_back(cur);
    if (i >= line.size()) break;
    ++i;  // delimiter
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::size_t lineno, std::string_view column) {
  s = trim(s);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(x)) {
    table_error(lineno, "column '" + std::string(column) + "' is not a number: '" + std::string(s) + "'");
  }
  return x;
}

}  // namespace

SignalTable read_signal_table(std::string_view text, char delimiter) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }

  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) table_error(1, "empty table: a header row is required");

  const auto header = split_record(lines[header_line], delimiter, header_line + 1);
  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(trim(header[i])), i);
  for (auto name : kSignalColumns) {
    if (!col.contains(name)) {
      table_error(header_line + 1, "missing column '" + std::string(name) + "' (check the delimiter)");
    }
  }

  SignalTable table;
  for (std::size_t ln = header_line + 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto f = split_record(lines[ln], delimiter, ln + 1);
    if (f.size() != header.size()) {
      table_error(ln + 1, "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
    }
    auto field = [&](std::string_view name) { return std::string(trim(f[col.find(name)->second])); };

    SignalRow row;
    row.session_id = field("session_id");
    row.item_id = field("item_id");
    if (row.session_id.empty() || row.item_id.empty()) table_error(ln + 1, "session_id and item_id are required");
    auto level = catalog::parse_testing_level(field("testing_level"));
    if (!level) table_error(ln + 1, "unknown testing level '" + field("testing_level") + "'");
    row.level = *level;
    auto source = catalog::parse_signal_source(field("source"));
    if (!source) table_error(ln + 1, "unknown source '" + field("source") + "'");
    row.source = *source;
    row.raw_value = parse_number(field("raw_value"), ln + 1, "raw_value");
    row.scale.raw_min = parse_number(field("raw_min"), ln + 1, "raw_min");
    row.scale.raw_max = parse_number(field("raw_max"), ln + 1, "raw_max");
    const auto dir = field("direction");
    if (dir == "higher_is_risk") {
      row.scale.direction = RiskDirection::HigherIsRisk;
    } else if (dir == "lower_is_risk") {
      row.scale.direction = RiskDirection::LowerIsRisk;
    } else {
      table_error(ln + 1, "direction must be higher_is_risk or lower_is_risk, got '" + dir + "'");
    }
    if (!(row.scale.raw_min < row.scale.raw_max)) table_error(ln + 1, "raw_min must be below raw_max");
    table.rows.push_back(std::move(row));
  }
  return table;
}

LeafBindings ingest_signals(const SignalTable& table, const catalog::InstrumentSpec& instrument) {
  std::map<NodePath, std::vector<std::pair<std::string, double>>> raw;
  for (const auto& row : table.rows) {
    const auto path = catalog::item_path({row.level, row.source, row.item_id});
    if (!instrument.has_item(path)) {
      throw Error(ErrorCode::UnknownItem, "'" + row.item_id + "' is not a " + std::string(catalog::to_string(row.level)) +
                                              " " + std::string(catalog::to_string(row.source)) + " item of " +
                                              instrument.name);
    }
    raw[path].emplace_back(row.session_id, normalize_scale(row.raw_value, row.scale));
  }

  LeafBindings out;
  for (auto& [path, responses] : raw) {
    std::sort(responses.begin(), responses.end());
    auto& leaves = out[path];
    for (std::size_t i = 0; i < responses.size(); ++i) {
      std::size_t repeat = 1;
      for (std::size_t k = i; k > 0 && responses[k - 1].first == responses[i].first; --k) ++repeat;
      std::string label = responses[i].first;
      if (repeat > 1) label += "#" + std::to_string(repeat);
      leaves.emplace_back(std::move(label), Value::number(responses[i].second));
    }
  }
  return out;
}

MeasurementTree build_instrument_tree(const catalog::InstrumentSpec& instrument, const LeafBindings& bindings) {
  for (const auto& [path, _] : bindings) {
    if (!instrument.has_item(path)) {
      throw Error(ErrorCode::UnknownItem, to_string(path) + " is not an item of " + instrument.name);
    }
  }
  std::function<NodeSpec(const catalog::ConstructSpec&, NodePath&)> convert = [&](const catalog::ConstructSpec& c,
                                                                                   NodePath& path) {
    NodeSpec s;
    s.label = c.label;
    s.description = c.description;
    if (path.size() == instrument.item_depth) {
      auto it = bindings.find(path);
      if (it == bindings.end() || it->second.empty()) {
        s.value = Value::missing();
        return s;
      }
      if (!c.function) {
        throw Error(ErrorCode::MissingFunctionBinding, "item " + to_string(path) + " has no response summary");
      }
      s.function = c.function;
      s.children.emplace();
      for (const auto& [label, v] : it->second) s.children->push_back(NodeSpec::leaf(label, v));
      return s;
    }
    s.function = c.function;
    s.children.emplace();
    for (const auto& k : c.children) {
      path.push_back(k.label);
      s.children->push_back(convert(k, path));
      path.pop_back();
    }
    return s;
  };
  NodePath path;
  return build_tree(convert(instrument.root, path));
}

}  // namespace mtree::io
