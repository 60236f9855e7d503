#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/matrix.hpp"
#include "maintmine/porter.hpp"
#include "maintmine/textnorm.hpp"

namespace maintmine {

// Default keyword rules of the naive baseline, as plain words (stemmed on
// use). Corrective and adaptive lists follow the classic word lists used for
// maintenance-activity detection; perfective covers refactoring vocabulary.
inline const PerClass<std::vector<std::string>> &default_naive_rules() {
  static const PerClass<std::vector<std::string>> rules = [] {
    PerClass<std::vector<std::string>> r;
    r[MaintenanceClass::corrective] = {"fix",   "bug",   "error",   "fail",   "issue", "npe",    "exception",
                                       "crash", "problem", "incorrect", "correct", "broken", "wrong", "defect",
                                       "fault"};
    r[MaintenanceClass::perfective] = {"refactor", "clean",   "cleanup", "remove",    "improve", "simplify",
                                       "rename",   "restructure", "rework", "replace", "unneeded", "tidy",
                                       "format",   "optimize", "performance"};
    r[MaintenanceClass::adaptive] = {"add",     "new",   "implement", "support",  "introduce", "create",
                                     "feature", "requirement", "initial", "allow", "enable"};
    return r;
  }();
  return rules;
}

// Keyword-rule classifier: the class whose rule list matches the most stems
// of the message wins; messages without any match get the most frequent
// training class.
struct NaiveModel {
  PerClass<std::vector<std::string>> rules; // stemmed
  ClassCounts class_counts;

  bool operator==(const NaiveModel &) const = default;

  static NaiveModel train(const ClassCounts &counts,
                          const PerClass<std::vector<std::string>> &words = default_naive_rules()) {
    NaiveModel m;
    m.class_counts = counts;
    for (auto c : kAllClasses) {
      std::set<std::string> stems;
      for (const auto &w : words[c])
        stems.insert(stem(w));
      m.rules[c].assign(stems.begin(), stems.end());
    }
    return m;
  }

  MaintenanceClass fallback() const {
    PerClass<double> zero;
    return argmax_class(zero, class_counts);
  }

  PerClass<double> matches(std::string_view message, const StopwordConfig &cfg) const {
    const auto stems = normalize_message(message, cfg);
    PerClass<double> hits;
    for (auto c : kAllClasses)
      for (const auto &w : rules[c])
        hits[c] += stems.count(w) ? 1 : 0;
    return hits;
  }

  bool fires(std::string_view message, const StopwordConfig &cfg) const {
    auto h = matches(message, cfg);
    return h.values[0] + h.values[1] + h.values[2] > 0;
  }

  Prediction classify(std::string_view message, const StopwordConfig &cfg) const {
    auto hits = matches(message, cfg);
    if (hits.values[0] + hits.values[1] + hits.values[2] == 0) {
      Prediction p{fallback(), {}};
      p.scores[p.label] = 1;
      return p;
    }
    return {argmax_class(hits, class_counts), normalized(hits)};
  }
};

inline void to_json(nlohmann::json &j, const NaiveModel &m) {
  j = {{"class_counts", m.class_counts.values}, {"rules", m.rules.values}};
}
inline void from_json(const nlohmann::json &j, NaiveModel &m) {
  j.at("class_counts").get_to(m.class_counts.values);
  j.at("rules").get_to(m.rules.values);
}

} // namespace maintmine
