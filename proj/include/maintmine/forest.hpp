#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/decision_tree.hpp"
#include "maintmine/rng.hpp"

namespace maintmine {

struct ForestParams {
  std::size_t trees = 500;
  std::size_t mtry = 0; // 0 means floor(sqrt(width))
  std::uint64_t seed = 1;
  bool bootstrap = true;
  std::size_t threads = 0; // 0 means hardware concurrency; never affects results
  bool operator==(const ForestParams &) const = default;
};

inline void to_json(nlohmann::json &j, const ForestParams &p) {
  j = {{"trees", p.trees}, {"mtry", p.mtry}, {"seed", p.seed}, {"bootstrap", p.bootstrap}};
}
inline void from_json(const nlohmann::json &j, ForestParams &p) {
  j.at("trees").get_to(p.trees);
  j.at("mtry").get_to(p.mtry);
  j.at("seed").get_to(p.seed);
  j.at("bootstrap").get_to(p.bootstrap);
}

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  std::size_t mtry = 1;
  ForestParams params;
  ClassCounts class_counts;
  std::vector<std::string> feature_names;

  std::size_t width() const noexcept { return feature_names.size(); }
  bool operator==(const ForestModel &) const = default;
};

inline std::size_t default_mtry(std::size_t width) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(width)))));
}

// Rows drawn for one tree: n draws with replacement from Rng(tree seed), or
// every row once when bootstrapping is off. The generator is left positioned
// for the feature draws of that tree.
inline std::vector<std::size_t> bootstrap_rows(std::size_t n, bool bootstrap, Rng &rng) {
  std::vector<std::size_t> rows(n);
  if (!bootstrap) {
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  }
  for (auto &r : rows)
    r = static_cast<std::size_t>(rng.below(n));
  std::sort(rows.begin(), rows.end());
  return rows;
}

// Runs body(i) for i in [0, count) on a small thread pool. Results must be
// stored by index; the first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error)
            error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

// Random forest: tree t is grown from Rng(seed + t) on a bootstrap resample
// with Gini splits over mtry sampled features per node, to purity.
inline ForestModel train_forest(const TrainingMatrix &data, const ForestParams &params = {}) {
  data.require_trainable();
  if (params.trees < 1)
    throw UsageError("a forest needs at least one tree");
  const std::size_t mtry = params.mtry == 0 ? default_mtry(data.width()) : params.mtry;
  if (mtry > data.width())
    throw UsageError("mtry " + std::to_string(mtry) + " exceeds the " + std::to_string(data.width()) + " features");

  ForestModel m;
  m.mtry = mtry;
  m.params = params;
  m.class_counts = data.class_counts();
  m.feature_names = data.feature_names();
  m.trees.resize(params.trees);
  m.tree_seeds.resize(params.trees);
  for (std::size_t t = 0; t < params.trees; ++t)
    m.tree_seeds[t] = params.seed + t;
  parallel_for(params.trees, params.threads, [&](std::size_t t) {
    Rng rng(m.tree_seeds[t]);
    auto rows = bootstrap_rows(data.size(), params.bootstrap, rng);
    m.trees[t] = grow_gini_tree(data, rows, {mtry, 1}, rng);
  });
  return m;
}

inline MaintenanceClass tree_vote(const DecisionTree &t, std::span<const double> x, const ClassCounts &tie_counts) {
  return argmax_class(t.leaf_for(x).dist, tie_counts);
}

// Majority vote; scores are vote fractions.
inline Prediction predict(const ForestModel &m, std::span<const double> x) {
  check_width(x, m.width());
  PerClass<double> votes;
  for (const auto &t : m.trees)
    votes[tree_vote(t, x, m.class_counts)] += 1;
  return {argmax_class(votes, m.class_counts), normalized(votes)};
}

// Out-of-bag error on the training data the forest was grown from. Rows
// that were in every bootstrap sample are left out.
inline double oob_error(const ForestModel &m, const TrainingMatrix &data) {
  std::vector<PerClass<double>> votes(data.size());
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    Rng rng(m.tree_seeds[t]);
    auto rows = bootstrap_rows(data.size(), m.params.bootstrap, rng);
    std::vector<bool> in_bag(data.size(), false);
    for (auto r : rows)
      in_bag[r] = true;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (!in_bag[i])
        votes[i][tree_vote(m.trees[t], data.row(i), m.class_counts)] += 1;
  }
  std::size_t counted = 0, wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double total = votes[i].values[0] + votes[i].values[1] + votes[i].values[2];
    if (total == 0)
      continue;
    ++counted;
    wrong += argmax_class(votes[i], m.class_counts) != data.label(i);
  }
  if (counted == 0)
    throw DataError("no out-of-bag rows");
  return static_cast<double>(wrong) / static_cast<double>(counted);
}

// Mean decrease in Gini impurity, each tree's decreases scaled by its root
// size, normalized to sum 1 (all zeros when no tree splits).
inline ImportanceList feature_importance(const ForestModel &m) {
  std::vector<double> raw(m.width(), 0.0);
  for (const auto &t : m.trees) {
    std::vector<double> per(m.width(), 0.0);
    t.add_importance(per);
    const double n = t.nodes[0].total();
    for (std::size_t f = 0; f < raw.size(); ++f)
      raw[f] += per[f] / n;
  }
  return rank_importance(m.feature_names, std::move(raw));
}

} // namespace maintmine
