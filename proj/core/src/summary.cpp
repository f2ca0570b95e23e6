#include "mtree/summary.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "mtree/error.hpp"

namespace mtree {

std::string_view to_string(MissingPolicy p) noexcept {
  switch (p) {
    case MissingPolicy::Skip: return "skip";
    case MissingPolicy::AsZero: return "zero";
    case MissingPolicy::Propagate: return "propagate";
  }
  return "skip";
}

std::optional<MissingPolicy> parse_missing_policy(std::string_view s) noexcept {
  if (s == "skip") return MissingPolicy::Skip;
  if (s == "zero") return MissingPolicy::AsZero;
  if (s == "propagate") return MissingPolicy::Propagate;
  return std::nullopt;
}

const ParamValue* find_param(const Params& params, std::string_view key) {
  auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

bool param_flag(const Params& params, std::string_view key, bool fallback) {
  const ParamValue* p = find_param(params, key);
  if (!p) return fallback;
  if (auto b = std::get_if<bool>(p)) return *b;
  throw Error(ErrorCode::FunctionDomainMismatch, "parameter '" + std::string(key) + "' must be a boolean");
}

// ---------------------------------------------------------------------------
// Registry

void Registry::add(SummaryFunctionSpec spec, SummaryImpl impl) {
  if (frozen_) throw Error(ErrorCode::RegistryFrozen, "cannot register '" + spec.name + "' after freeze");
  if (spec.name.empty()) throw Error(ErrorCode::InvalidMetadata, "function name must not be empty");
  if (!impl) throw Error(ErrorCode::InvalidMetadata, "function '" + spec.name + "' has no implementation");
  if (entries_.contains(spec.name)) throw Error(ErrorCode::DuplicateName, "'" + spec.name + "' is already registered");
  if (spec.input_kinds.empty() || spec.input_kinds.contains(ValueKind::Missing)) {
    throw Error(ErrorCode::InvalidMetadata, "'" + spec.name + "' needs a non-empty set of concrete input kinds");
  }
  if (spec.output_kind == ValueKind::Missing) {
    throw Error(ErrorCode::InvalidMetadata, "'" + spec.name + "' cannot declare Missing as its output kind");
  }
  if (spec.output_kind == ValueKind::Category && !spec.output_labels) {
    throw Error(ErrorCode::InvalidMetadata, "'" + spec.name + "' produces categories but declares no label set");
  }
  if (spec.induces_ordering) {
    const bool orderable =
        spec.output_kind == ValueKind::Number || (spec.output_kind == ValueKind::Category && spec.output_labels->ordered);
    if (!orderable) {
      throw Error(ErrorCode::InvalidMetadata, "'" + spec.name + "' claims to induce an ordering but its " +
                                                  std::string(to_string(spec.output_kind)) +
                                                  " output has no declared order");
    }
  }
  std::string key = spec.name;
  entries_.emplace(std::move(key), Entry{std::move(spec), std::move(impl)});
}

const Registry::Entry* Registry::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const Registry::Entry& Registry::at(std::string_view name) const {
  if (auto e = find(name)) return *e;
  throw Error(ErrorCode::UnknownFunction, "no summary function named '" + std::string(name) + "'");
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

std::vector<double> numbers(const SummaryInput& in) {
  std::vector<double> xs;
  xs.reserve(in.values.size());
  for (const auto& v : in.values) xs.push_back(v.as_number());
  return xs;
}

Value mean_of(const SummaryInput& in) {
  double sum = 0.0;
  for (const auto& v : in.values) sum += v.as_number();
  return Value::number(sum / static_cast<double>(in.values.size()));
}

Value median_of(const SummaryInput& in) {
  auto xs = numbers(in);
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return Value::number(xs[n / 2]);
  return Value::number((xs[n / 2 - 1] + xs[n / 2]) / 2.0);
}

Value max_of(const SummaryInput& in) {
  auto xs = numbers(in);
  return Value::number(*std::max_element(xs.begin(), xs.end()));
}

Value min_of(const SummaryInput& in) {
  auto xs = numbers(in);
  return Value::number(*std::min_element(xs.begin(), xs.end()));
}

Value sum_of(const SummaryInput& in) {
  double sum = 0.0;
  for (const auto& v : in.values) sum += v.as_number();
  return Value::number(sum);
}

Value count_of(const SummaryInput& in) { return Value::number(static_cast<double>(in.values.size())); }

Value weighted_mean_of(const SummaryInput& in) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < in.values.size(); ++i) {
    num += in.weights[i] * in.values[i].as_number();
    den += in.weights[i];
  }
  return Value::number(num / den);
}

bool judged_correct(const Value& v, const Params& params) {
  switch (v.kind()) {
    case ValueKind::Number: {
      const double x = v.as_number();
      if (x != 0.0 && x != 1.0) {
        throw Error(ErrorCode::FunctionDomainMismatch, "accuracy expects 0/1 numbers, got " + format_value(v, 6));
      }
      return x == 1.0;
    }
    case ValueKind::Category: {
      std::string positive = "correct";
      if (const ParamValue* p = find_param(params, "positive_label")) {
        const auto* pv = std::get_if<Value>(p);
        if (!pv || pv->kind() != ValueKind::Text) {
          throw Error(ErrorCode::FunctionDomainMismatch, "accuracy: positive_label must be text");
        }
        positive = pv->as_text();
      }
      return v.as_category().label == positive;
    }
    case ValueKind::Vector: {
      const auto& pair = v.as_vector();
      if (pair.size() != 2) {
        throw Error(ErrorCode::FunctionDomainMismatch, "accuracy expects (prediction, label) vectors of length 2");
      }
      return pair[0] == pair[1];
    }
    default:
      throw Error(ErrorCode::FunctionDomainMismatch,
                  "accuracy cannot judge a " + std::string(to_string(v.kind())) + " value");
  }
}

Value accuracy_of(const SummaryInput& in) {
  std::size_t correct = 0;
  for (const auto& v : in.values) correct += judged_correct(v, in.params) ? 1 : 0;
  return Value::number(static_cast<double>(correct) / static_cast<double>(in.values.size()));
}

// Ties count half a win.
Value mean_win_rate_of(const SummaryInput& in) {
  const ParamValue* p = find_param(in.params, "competitor_scores");
  const auto* lists = p ? std::get_if<std::vector<Value>>(p) : nullptr;
  if (!lists) throw Error(ErrorCode::MissingCompetitorData, "mean_win_rate needs a competitor_scores list");
  const bool higher_is_better = param_flag(in.params, "higher_is_better", true);

  double total = 0.0;
  for (std::size_t i = 0; i < in.values.size(); ++i) {
    const std::size_t pos = in.positions[i];
    if (pos >= lists->size() || (*lists)[pos].kind() != ValueKind::Vector || (*lists)[pos].as_vector().empty()) {
      throw Error(ErrorCode::MissingCompetitorData, "no competitor scores for child #" + std::to_string(pos));
    }
    const double mine = in.values[i].as_number();
    double wins = 0.0;
    const auto& others = (*lists)[pos].as_vector();
    for (double other : others) {
      if (mine == other) {
        wins += 0.5;
      } else if (higher_is_better ? mine > other : mine < other) {
        wins += 1.0;
      }
    }
    total += wins / static_cast<double>(others.size());
  }
  return Value::number(total / static_cast<double>(in.values.size()));
}

constexpr std::array<std::string_view, 9> kBuiltinNames = {
    "mean", "median", "max", "min", "sum", "count", "weighted_mean", "accuracy", "mean_win_rate"};

SummaryFunctionSpec numeric(std::string name, bool weight_aware = false) {
  SummaryFunctionSpec s;
  s.name = std::move(name);
  s.weight_aware = weight_aware;
  return s;
}

}  // namespace

std::span<const std::string_view> builtin_names() noexcept { return kBuiltinNames; }

Registry Registry::with_builtins() {
  Registry r;
  r.add(numeric("mean"), mean_of);
  r.add(numeric("median"), median_of);
  r.add(numeric("max"), max_of);
  r.add(numeric("min"), min_of);
  r.add(numeric("sum"), sum_of);
  r.add(numeric("count"), count_of);
  r.add(numeric("weighted_mean", true), weighted_mean_of);

  auto acc = numeric("accuracy");
  acc.input_kinds = {ValueKind::Number, ValueKind::Category, ValueKind::Vector};
  r.add(std::move(acc), accuracy_of);
  r.add(numeric("mean_win_rate"), mean_win_rate_of);
  return r;
}

const Registry& Registry::builtin() {
  static const Registry instance = [] {
    Registry r = with_builtins();
    r.freeze();
    return r;
  }();
  return instance;
}

// ---------------------------------------------------------------------------
// apply

bool ignores_weights(const Registry& registry, const FunctionBinding& binding, std::span<const double> weights) {
  const auto* entry = registry.find(binding.name);
  if (!entry || entry->spec.weight_aware) return false;
  return std::any_of(weights.begin(), weights.end(), [](double w) { return w != 1.0; });
}

Value apply(const Registry& registry, const FunctionBinding& binding, std::span<const Value> children,
            std::span<const double> weights) {
  if (!registry.frozen()) {
    throw Error(ErrorCode::RegistryNotFrozen, "registry must be frozen before evaluation");
  }
  const auto& entry = registry.at(binding.name);
  if (children.empty()) throw Error(ErrorCode::EvaluationFailed, "'" + binding.name + "' applied to no children");
  if (!weights.empty() && weights.size() != children.size()) {
    throw Error(ErrorCode::EvaluationFailed, "weight count does not match child count");
  }

  std::vector<Value> values;
  std::vector<double> kept_weights;
  std::vector<std::size_t> positions;
  values.reserve(children.size());
  kept_weights.reserve(children.size());
  positions.reserve(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (children[i].is_missing()) {
      switch (binding.missing_policy) {
        case MissingPolicy::Skip: continue;
        case MissingPolicy::Propagate: return Value::missing();
        case MissingPolicy::AsZero:
          values.push_back(Value::number(0.0));
          kept_weights.push_back(w);
          positions.push_back(i);
          continue;
      }
    }
    if (!entry.spec.input_kinds.contains(children[i].kind())) {
      throw Error(ErrorCode::FunctionDomainMismatch, "'" + binding.name + "' does not accept " +
                                                         std::string(to_string(children[i].kind())) + " children");
    }
    values.push_back(children[i]);
    kept_weights.push_back(w);
    positions.push_back(i);
  }
  if (values.empty()) return Value::missing();

  Value out = entry.impl(SummaryInput{values, kept_weights, positions, binding.params});
  if (!out.is_missing() && out.kind() != entry.spec.output_kind) {
    throw Error(ErrorCode::EvaluationFailed, "'" + binding.name + "' returned a " + std::string(to_string(out.kind())) +
                                                 " value but declares " +
                                                 std::string(to_string(entry.spec.output_kind)));
  }
  return out;
}

}  // namespace mtree
