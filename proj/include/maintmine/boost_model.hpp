#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/matrix.hpp"
#include "maintmine/rng.hpp"

namespace maintmine {

struct RegNode {
  std::int32_t feature = -1;
  double threshold = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0;    // leaf output, already scaled by the shrinkage
  double decrease = 0; // squared-error decrease of the split
  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const RegNode &) const = default;
};

struct RegTree {
  std::vector<RegNode> nodes;

  double eval(std::span<const double> x) const {
    std::size_t n = 0;
    while (!nodes[n].is_leaf())
      n = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[n].feature)] <= nodes[n].threshold
                                       ? nodes[n].left
                                       : nodes[n].right);
    return nodes[n].value;
  }
  bool operator==(const RegTree &) const = default;
};

inline void to_json(nlohmann::json &j, const RegNode &n) {
  if (n.is_leaf())
    j = {{"value", n.value}};
  else
    j = {{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
         {"decrease", n.decrease}};
}
inline void from_json(const nlohmann::json &j, RegNode &n) {
  n = RegNode{};
  if (j.contains("feature")) {
    j.at("feature").get_to(n.feature);
    j.at("threshold").get_to(n.threshold);
    j.at("left").get_to(n.left);
    j.at("right").get_to(n.right);
    j.at("decrease").get_to(n.decrease);
  } else {
    j.at("value").get_to(n.value);
  }
}
inline void to_json(nlohmann::json &j, const RegTree &t) { j = t.nodes; }
inline void from_json(const nlohmann::json &j, RegTree &t) {
  t.nodes = j.get<std::vector<RegNode>>();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto &n = t.nodes[i];
    if (!n.is_leaf() && (n.left <= static_cast<std::int32_t>(i) || n.right <= static_cast<std::int32_t>(i) ||
                         n.right >= static_cast<std::int32_t>(t.nodes.size()) ||
                         n.left >= static_cast<std::int32_t>(t.nodes.size())))
      throw DataError("regression tree node " + std::to_string(i) + " has invalid children");
  }
  if (t.nodes.empty())
    throw DataError("regression tree without nodes");
}

struct BoostParams {
  std::size_t stages = 150;
  std::size_t depth = 3;
  double shrinkage = 0.1;
  std::size_t min_leaf = 5;
  double subsample = 1.0; // fraction of rows per stage, drawn from Rng(seed + stage)
  std::uint64_t seed = 1;
  bool operator==(const BoostParams &) const = default;
};

inline void to_json(nlohmann::json &j, const BoostParams &p) {
  j = {{"stages", p.stages},     {"depth", p.depth},         {"shrinkage", p.shrinkage},
       {"min_leaf", p.min_leaf}, {"subsample", p.subsample}, {"seed", p.seed}};
}
inline void from_json(const nlohmann::json &j, BoostParams &p) {
  j.at("stages").get_to(p.stages);
  j.at("depth").get_to(p.depth);
  j.at("shrinkage").get_to(p.shrinkage);
  j.at("min_leaf").get_to(p.min_leaf);
  j.at("subsample").get_to(p.subsample);
  j.at("seed").get_to(p.seed);
}

struct BoostModel {
  PerClass<double> initial;                         // log class priors
  std::vector<std::array<RegTree, kNumClasses>> stages;
  BoostParams params;
  std::vector<double> deviance;                     // mean training deviance after 0..M stages
  ClassCounts class_counts;
  std::vector<std::string> feature_names;

  std::size_t width() const noexcept { return feature_names.size(); }
  bool operator==(const BoostModel &) const = default;
};

// Score became NaN or infinite during fitting.
class StageError : public DataError {
public:
  explicit StageError(std::size_t stage)
      : DataError("boosting produced a non-finite score at stage " + std::to_string(stage)), stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

private:
  std::size_t stage_;
};

namespace detail {

class RegTreeBuilder {
public:
  RegTreeBuilder(const TrainingMatrix &m, const std::vector<double> &residual, const BoostParams &p)
      : m_(m), r_(residual), p_(p) {}

  RegTree run(std::span<const std::size_t> rows) {
    grow(rows, 0);
    return {std::move(nodes_)};
  }

private:
  const TrainingMatrix &m_;
  const std::vector<double> &r_;
  BoostParams p_;
  std::vector<RegNode> nodes_;

  // Newton step for multinomial deviance (Friedman 2001):
  // (K-1)/K * sum r / sum |r|(1-|r|).
  double leaf_value(std::span<const std::size_t> rows) const {
    double num = 0, den = 0;
    for (auto i : rows) {
      num += r_[i];
      den += std::abs(r_[i]) * (1 - std::abs(r_[i]));
    }
    constexpr double k = kNumClasses;
    if (den < 1e-150)
      return 0;
    return (k - 1) / k * num / den * p_.shrinkage;
  }

  std::size_t grow(std::span<const std::size_t> rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({});
    std::int32_t best_f = -1;
    double best_thr = 0, best_dec = 1e-12;
    if (depth < p_.depth && rows.size() >= 2 * p_.min_leaf) {
      double sum = 0;
      for (auto i : rows)
        sum += r_[i];
      const double n = static_cast<double>(rows.size());
      std::vector<std::pair<double, double>> col(rows.size());
      for (std::size_t f = 0; f < m_.width(); ++f) {
        for (std::size_t k = 0; k < rows.size(); ++k)
          col[k] = {m_.at(rows[k], f), r_[rows[k]]};
        std::stable_sort(col.begin(), col.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
        double left = 0;
        for (std::size_t k = 0; k + 1 < col.size(); ++k) {
          left += col[k].second;
          if (col[k].first == col[k + 1].first)
            continue;
          const double nl = static_cast<double>(k + 1), nr = n - nl;
          if (nl < static_cast<double>(p_.min_leaf) || nr < static_cast<double>(p_.min_leaf))
            continue;
          const double right = sum - left;
          const double dec = left * left / nl + right * right / nr - sum * sum / n;
          if (dec > best_dec + 1e-12) {
            best_dec = dec;
            best_f = static_cast<std::int32_t>(f);
            best_thr = (col[k].first + col[k + 1].first) / 2;
          }
        }
      }
    }
    if (best_f < 0) {
      nodes_[id].value = leaf_value(rows);
      return id;
    }
    std::vector<std::size_t> left, right;
    for (auto i : rows)
      (m_.at(i, static_cast<std::size_t>(best_f)) <= best_thr ? left : right).push_back(i);
    nodes_[id].feature = best_f;
    nodes_[id].threshold = best_thr;
    nodes_[id].decrease = best_dec;
    auto l = grow(left, depth + 1);
    auto r = grow(right, depth + 1);
    nodes_[id].left = static_cast<std::int32_t>(l);
    nodes_[id].right = static_cast<std::int32_t>(r);
    return id;
  }
};

inline double mean_deviance(const TrainingMatrix &data, const std::vector<PerClass<double>> &scores) {
  double total = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = softmax(scores[i]);
    total -= 2 * std::log(std::max(p[data.label(i)], 1e-300));
  }
  return total / static_cast<double>(data.size());
}

} // namespace detail

// Multiclass gradient boosting on multinomial deviance. Scores start at the
// log priors; every stage fits one depth-limited regression tree per class
// to (one-hot label - softmax) and adds its Newton leaf values times the
// shrinkage.
inline BoostModel train_boost(const TrainingMatrix &data, const BoostParams &params = {}) {
  data.require_trainable();
  if (params.depth < 1 || params.min_leaf < 1)
    throw UsageError("boosting needs depth >= 1 and min_leaf >= 1");
  if (!(params.shrinkage > 0) || !(params.subsample > 0 && params.subsample <= 1))
    throw UsageError("boosting needs shrinkage > 0 and subsample in (0, 1]");

  BoostModel m;
  m.params = params;
  m.class_counts = data.class_counts();
  m.feature_names = data.feature_names();
  const double n = static_cast<double>(data.size());
  for (auto c : kAllClasses)
    m.initial[c] = std::log(std::max(static_cast<double>(m.class_counts[c]) / n, 1e-12));

  std::vector<PerClass<double>> scores(data.size(), m.initial);
  m.deviance.push_back(detail::mean_deviance(data, scores));
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> residual(data.size());

  for (std::size_t stage = 1; stage <= params.stages; ++stage) {
    std::vector<std::size_t> rows = all;
    if (params.subsample < 1) {
      Rng rng(params.seed + stage);
      rng.shuffle(std::span(rows));
      rows.resize(std::max<std::size_t>(1, static_cast<std::size_t>(params.subsample * n)));
      std::sort(rows.begin(), rows.end());
    }
    std::vector<ClassScores> prob(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      prob[i] = softmax(scores[i]);
    std::array<RegTree, kNumClasses> trees;
    for (auto c : kAllClasses) {
      for (std::size_t i = 0; i < data.size(); ++i)
        residual[i] = (data.label(i) == c ? 1.0 : 0.0) - prob[i][c];
      trees[index_of(c)] = detail::RegTreeBuilder(data, residual, params).run(rows);
    }
    for (std::size_t i = 0; i < data.size(); ++i)
      for (auto c : kAllClasses) {
        scores[i][c] += trees[index_of(c)].eval(data.row(i));
        if (!std::isfinite(scores[i][c]))
          throw StageError(stage);
      }
    m.stages.push_back(std::move(trees));
    m.deviance.push_back(detail::mean_deviance(data, scores));
  }
  return m;
}

inline PerClass<double> raw_scores(const BoostModel &m, std::span<const double> x) {
  PerClass<double> f = m.initial;
  for (const auto &stage : m.stages)
    for (auto c : kAllClasses)
      f[c] += stage[index_of(c)].eval(x);
  return f;
}

inline Prediction predict(const BoostModel &m, std::span<const double> x) {
  check_width(x, m.width());
  auto p = softmax(raw_scores(m, x));
  return {argmax_class(p, m.class_counts), p};
}

// Squared-error decrease per feature over all stage trees, normalized.
inline ImportanceList feature_importance(const BoostModel &m) {
  std::vector<double> raw(m.width(), 0.0);
  for (const auto &stage : m.stages)
    for (const auto &t : stage)
      for (const auto &n : t.nodes)
        if (!n.is_leaf())
          raw[static_cast<std::size_t>(n.feature)] += n.decrease;
  return rank_importance(m.feature_names, std::move(raw));
}

} // namespace maintmine
