#include "mtree/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mtree/error.hpp"

namespace mtree {

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::Number: return "number";
    case ValueKind::Category: return "category";
    case ValueKind::Text: return "text";
    case ValueKind::Vector: return "vector";
    case ValueKind::Missing: return "missing";
  }
  return "?";
}

std::optional<std::size_t> LabelSet::rank(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

Value Value::number(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidValue, "numbers must be finite");
  return Value(Storage{x});
}

Value Value::category(std::string label, std::shared_ptr<const LabelSet> labels) {
  if (!labels) throw Error(ErrorCode::InvalidValue, "category '" + label + "' has no label set");
  if (!labels->rank(label)) {
    throw Error(ErrorCode::InvalidValue, "category label '" + label + "' is not in its declared label set");
  }
  return Value(Storage{Category{std::move(label), std::move(labels)}});
}

Value Value::text(std::string s) { return Value(Storage{std::move(s)}); }

Value Value::vector(std::vector<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidValue, "vector entries must be finite");
  }
  return Value(Storage{std::move(xs)});
}

ValueKind Value::kind() const noexcept {
  switch (data_.index()) {
    case 1: return ValueKind::Number;
    case 2: return ValueKind::Category;
    case 3: return ValueKind::Text;
    case 4: return ValueKind::Vector;
    default: return ValueKind::Missing;
  }
}

namespace {
[[noreturn]] void wrong_kind(ValueKind want, ValueKind have) {
  throw Error(ErrorCode::FunctionDomainMismatch,
              "expected " + std::string(to_string(want)) + " value, got " + std::string(to_string(have)));
}
}  // namespace

double Value::as_number() const {
  if (auto p = std::get_if<double>(&data_)) return *p;
  wrong_kind(ValueKind::Number, kind());
}

const Value::Category& Value::as_category() const {
  if (auto p = std::get_if<Category>(&data_)) return *p;
  wrong_kind(ValueKind::Category, kind());
}

const std::string& Value::as_text() const {
  if (auto p = std::get_if<std::string>(&data_)) return *p;
  wrong_kind(ValueKind::Text, kind());
}

const std::vector<double>& Value::as_vector() const {
  if (auto p = std::get_if<std::vector<double>>(&data_)) return *p;
  wrong_kind(ValueKind::Vector, kind());
}

bool operator==(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return false;
  switch (a.kind()) {
    case ValueKind::Missing: return true;
    case ValueKind::Number: return a.as_number() == b.as_number();
    case ValueKind::Text: return a.as_text() == b.as_text();
    case ValueKind::Vector: return a.as_vector() == b.as_vector();
    case ValueKind::Category: {
      const auto& x = a.as_category();
      const auto& y = b.as_category();
      return x.label == y.label && (x.labels == y.labels || *x.labels == *y.labels);
    }
  }
  return false;
}

namespace {
std::string fixed(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  std::string s(buf);
  // "-0.00" is noise from rounding a tiny negative.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}
}  // namespace

std::string format_value(const Value& v, int precision, std::string_view missing_marker) {
  switch (v.kind()) {
    case ValueKind::Missing: return std::string(missing_marker);
    case ValueKind::Number: return fixed(v.as_number(), precision);
    case ValueKind::Category: return v.as_category().label;
    case ValueKind::Text: return v.as_text();
    case ValueKind::Vector: {
      std::string out = "[";
      const auto& xs = v.as_vector();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fixed(xs[i], precision);
      }
      return out + "]";
    }
  }
  return {};
}

}  // namespace mtree
