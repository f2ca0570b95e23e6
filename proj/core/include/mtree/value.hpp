#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mtree {

enum class ValueKind { Number, Category, Text, Vector, Missing };

std::string_view to_string(ValueKind kind) noexcept;

/// Declared label vocabulary for categorical values. `ordered` means the
/// declaration order is also the value order (first = least).
struct LabelSet {
  std::vector<std::string> labels;
  bool ordered = false;

  [[nodiscard]] std::optional<std::size_t> rank(std::string_view label) const;
  bool operator==(const LabelSet&) const = default;
};

/// Observation or summary result. Invariants enforced by the factories:
/// numbers (and vector entries) are finite, category labels belong to their
/// label set.
class Value {
 public:
  struct Category {
    std::string label;
    std::shared_ptr<const LabelSet> labels;
  };

  Value() = default;  // Missing

  static Value missing() { return {}; }
  static Value number(double x);
  static Value category(std::string label, std::shared_ptr<const LabelSet> labels);
  static Value text(std::string s);
  static Value vector(std::vector<double> xs);

  [[nodiscard]] ValueKind kind() const noexcept;
  [[nodiscard]] bool is_missing() const noexcept { return kind() == ValueKind::Missing; }
  [[nodiscard]] bool is_number() const noexcept { return kind() == ValueKind::Number; }

  [[nodiscard]] double as_number() const;
  [[nodiscard]] const Category& as_category() const;
  [[nodiscard]] const std::string& as_text() const;
  [[nodiscard]] const std::vector<double>& as_vector() const;

  /// Structural equality. Numbers compare with ==; categories compare label
  /// and label-set contents.
  friend bool operator==(const Value& a, const Value& b);

 private:
  using Storage = std::variant<std::monostate, double, Category, std::string, std::vector<double>>;
  explicit Value(Storage s) : data_(std::move(s)) {}
  Storage data_;
};

/// Fixed-point rendering used by every human-facing output. Missing renders as
/// `missing_marker`.
std::string format_value(const Value& v, int precision, std::string_view missing_marker = "--");

}  // namespace mtree
