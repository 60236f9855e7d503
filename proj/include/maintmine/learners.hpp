#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "maintmine/boost_model.hpp"
#include "maintmine/decision_tree.hpp"
#include "maintmine/forest.hpp"

namespace maintmine {

enum class Algorithm { tree, forest, boost, naive };

inline std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
  case Algorithm::tree:
    return "tree";
  case Algorithm::forest:
    return "forest";
  case Algorithm::boost:
    return "boost";
  case Algorithm::naive:
    return "naive";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::tree, Algorithm::forest, Algorithm::boost, Algorithm::naive})
    if (to_string(a) == s)
      return a;
  throw UsageError("unknown algorithm '" + std::string(s) + "' (expected tree, forest, boost or naive)");
}

using Model = std::variant<TreeModel, ForestModel, BoostModel>;

inline Prediction predict(const Model &m, std::span<const double> x) {
  return std::visit([&](const auto &model) { return predict(model, x); }, m);
}

inline ImportanceList feature_importance(const Model &m) {
  return std::visit([](const auto &model) { return feature_importance(model); }, m);
}

inline std::size_t model_width(const Model &m) {
  return std::visit([](const auto &model) { return model.width(); }, m);
}

inline nlohmann::json model_to_json(const Model &model) {
  nlohmann::json j;
  std::visit(
      [&](const auto &m) {
        using T = std::decay_t<decltype(m)>;
        j["class_counts"] = m.class_counts.values;
        j["features"] = m.feature_names;
        j["params"] = m.params;
        if constexpr (std::is_same_v<T, TreeModel>) {
          j["type"] = "tree";
          j["tree"] = m.tree;
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          j["type"] = "forest";
          j["mtry"] = m.mtry;
          j["seeds"] = m.tree_seeds;
          j["trees"] = m.trees;
        } else {
          j["type"] = "boost";
          j["initial"] = m.initial.values;
          j["deviance"] = m.deviance;
          j["stages"] = m.stages;
        }
      },
      model);
  return j;
}

inline Model model_from_json(const nlohmann::json &j) {
  auto common = [&](auto &m) {
    j.at("class_counts").get_to(m.class_counts.values);
    j.at("features").get_to(m.feature_names);
    j.at("params").get_to(m.params);
  };
  const std::string type = j.at("type").get<std::string>();
  if (type == "tree") {
    TreeModel m;
    common(m);
    j.at("tree").get_to(m.tree);
    return m;
  }
  if (type == "forest") {
    ForestModel m;
    common(m);
    j.at("mtry").get_to(m.mtry);
    j.at("seeds").get_to(m.tree_seeds);
    j.at("trees").get_to(m.trees);
    if (m.trees.empty() || m.trees.size() != m.tree_seeds.size())
      throw DataError("forest tree and seed lists disagree");
    return m;
  }
  if (type == "boost") {
    BoostModel m;
    common(m);
    j.at("initial").get_to(m.initial.values);
    j.at("deviance").get_to(m.deviance);
    j.at("stages").get_to(m.stages);
    return m;
  }
  throw DataError("unknown model type '" + type + "'");
}

} // namespace maintmine
