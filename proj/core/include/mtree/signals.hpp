#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtree/catalog.hpp"
#include "mtree/tree.hpp"

namespace mtree::io {

enum class RiskDirection { HigherIsRisk, LowerIsRisk };

/// Raw response scale of one item. Normalized scores live on [0, 10] with
/// higher meaning more risk.
struct ScaleSpec {
  double raw_min = 0.0;
  double raw_max = 10.0;
  RiskDirection direction = RiskDirection::HigherIsRisk;
};

/// 10 * (raw - raw_min) / (raw_max - raw_min), flipped to 10 - x for
/// lower-is-risk scales. Throws ScaleViolation when raw is outside the scale
/// or the scale is empty.
double normalize_scale(double raw, const ScaleSpec& scale);

struct SignalRow {
  std::string session_id;
  std::string item_id;
  catalog::TestingLevel level;
  catalog::SignalSource source;
  double raw_value;
  ScaleSpec scale;
};

struct SignalTable {
  std::vector<SignalRow> rows;
};

/// Required header columns, in any order.
inline constexpr std::string_view kSignalColumns[] = {"session_id", "item_id", "testing_level", "source",
                                                      "raw_value",  "raw_min", "raw_max",       "direction"};

/// Parses delimited text with a header row. Fields may be double-quoted.
/// Throws TableError for structural problems (missing columns, ragged rows,
/// unparseable numbers, unknown testing level / source / direction).
SignalTable read_signal_table(std::string_view text, char delimiter = ',');

/// Item path -> normalized individual responses (session label, value),
/// sorted by session label.
using LeafBindings = std::map<NodePath, std::vector<std::pair<std::string, Value>>>;

/// Normalizes every row and groups it under its item construct. Throws
/// UnknownItem for items outside the instrument and ScaleViolation for raw
/// values outside their scale. Row order does not affect the result.
LeafBindings ingest_signals(const SignalTable& table, const catalog::InstrumentSpec& instrument);

/// Full instrument tree: item constructs with responses become internal nodes
/// over one leaf per response; items without responses are Missing leaves.
MeasurementTree build_instrument_tree(const catalog::InstrumentSpec& instrument, const LeafBindings& bindings);

}  // namespace mtree::io
