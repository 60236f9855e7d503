#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "maintmine/classes.hpp"
#include "maintmine/error.hpp"

namespace maintmine {

// Row-major feature table with one label per row.
class TrainingMatrix {
public:
  TrainingMatrix() = default;
  explicit TrainingMatrix(std::vector<std::string> feature_names) : names_(std::move(feature_names)) {}

  void add_row(std::span<const double> features, MaintenanceClass label) {
    if (features.size() != names_.size())
      throw DataError("row width " + std::to_string(features.size()) + " does not match " +
                      std::to_string(names_.size()) + " features");
    for (double v : features)
      if (!std::isfinite(v) || v < 0)
        throw DataError("features must be finite and non-negative");
    values_.insert(values_.end(), features.begin(), features.end());
    labels_.push_back(label);
  }

  std::size_t width() const noexcept { return names_.size(); }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * width(), width()}; }
  double at(std::size_t i, std::size_t f) const { return values_[i * width() + f]; }
  MaintenanceClass label(std::size_t i) const { return labels_[i]; }
  const std::vector<MaintenanceClass> &labels() const noexcept { return labels_; }
  const std::vector<std::string> &feature_names() const noexcept { return names_; }

  ClassCounts class_counts() const {
    ClassCounts c;
    for (auto l : labels_)
      ++c[l];
    return c;
  }

  TrainingMatrix subset(std::span<const std::size_t> rows) const {
    TrainingMatrix out(names_);
    for (auto i : rows)
      out.add_row(row(i), label(i));
    return out;
  }

  void require_trainable() const {
    if (empty())
      throw DataError("training matrix has no rows");
    if (width() == 0)
      throw DataError("training matrix has no features");
  }

private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<MaintenanceClass> labels_;
};

using ClassScores = PerClass<double>;

struct Prediction {
  MaintenanceClass label = MaintenanceClass::corrective;
  ClassScores scores;
};

inline ClassScores normalized(PerClass<double> v) {
  double total = 0;
  for (double x : v.values)
    total += x;
  if (total <= 0) {
    for (double &x : v.values)
      x = 1.0 / kNumClasses;
    return v;
  }
  for (double &x : v.values)
    x /= total;
  return v;
}

inline ClassScores softmax(const PerClass<double> &f) {
  double m = *std::max_element(f.values.begin(), f.values.end());
  PerClass<double> e;
  for (std::size_t k = 0; k < kNumClasses; ++k)
    e.values[k] = std::exp(f.values[k] - m);
  return normalized(e);
}

// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_number(std::string_view s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size())
    throw DataError("not a number: '" + std::string(s) + "'");
  return v;
}

inline void check_width(std::span<const double> x, std::size_t width) {
  if (x.size() != width)
    throw DataError("feature vector has width " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(width));
}

// Features ranked by importance, descending; ties keep feature order.
using ImportanceList = std::vector<std::pair<std::string, double>>;

inline ImportanceList rank_importance(const std::vector<std::string> &names, std::vector<double> raw) {
  double total = 0;
  for (double v : raw)
    total += v;
  ImportanceList out;
  for (std::size_t f = 0; f < names.size(); ++f)
    out.emplace_back(names[f], total > 0 ? raw[f] / total : 0.0);
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.second > b.second; });
  return out;
}

} // namespace maintmine
