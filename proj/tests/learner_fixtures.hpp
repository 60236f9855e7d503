#pragma once

// Deterministic learner fixtures shared by the unit and acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include "maintmine/matrix.hpp"
#include "maintmine/rng.hpp"

namespace maintmine::fixtures {

// fix=1 exactly for corrective rows, refactor=1 exactly for perfective rows;
// the other columns are coin flips.
inline TrainingMatrix separable_keywords(std::uint64_t seed = 11, std::size_t per_class = 40) {
  TrainingMatrix m({"fix", "add", "refactor", "test", "new"});
  Rng rng(seed);
  for (std::size_t i = 0; i < per_class; ++i)
    for (auto c : kAllClasses) {
      std::vector<double> x(5);
      for (auto &v : x)
        v = static_cast<double>(rng.below(2));
      x[0] = c == MaintenanceClass::corrective;
      x[2] = c == MaintenanceClass::perfective;
      m.add_row(x, c);
    }
  return m;
}

// Change counts: the class is fixed by the range of column 0 (0-3, 5-8,
// 10-13); six more count columns carry no signal.
inline TrainingMatrix separable_counts(std::uint64_t seed = 12, std::size_t per_class = 50) {
  std::vector<std::string> names = {"statement_insert"};
  for (int i = 1; i < 7; ++i)
    names.push_back("noise" + std::to_string(i));
  TrainingMatrix m(names);
  Rng rng(seed);
  for (std::size_t i = 0; i < per_class; ++i)
    for (auto c : kAllClasses) {
      std::vector<double> x(names.size());
      x[0] = static_cast<double>(5 * index_of(c) + rng.below(4));
      for (std::size_t f = 1; f < x.size(); ++f)
        x[f] = static_cast<double>(rng.below(6));
      m.add_row(x, c);
    }
  return m;
}

// Overlapping classes: ten count columns, each class raising a different
// subset of column means, plus 10% label noise.
inline TrainingMatrix noisy(std::uint64_t seed, std::size_t per_class) {
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i)
    names.push_back("f" + std::to_string(i));
  TrainingMatrix m(names);
  Rng rng(seed);
  for (std::size_t i = 0; i < per_class; ++i)
    for (auto c : kAllClasses) {
      std::vector<double> x(names.size());
      for (std::size_t f = 0; f < x.size(); ++f) {
        const bool raised = f % 3 == index_of(c) || (f == 9 && c == MaintenanceClass::adaptive);
        const std::uint64_t span = raised ? 7 : 4;
        x[f] = static_cast<double>(rng.below(span) + rng.below(span));
      }
      auto label = c;
      if (rng.below(10) == 0)
        label = class_at(static_cast<std::size_t>(rng.below(kNumClasses)));
      m.add_row(x, label);
    }
  return m;
}

} // namespace maintmine::fixtures
