#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <span>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maintmine/corpus.hpp"
#include "maintmine/rng.hpp"
#include "maintmine/textnorm.hpp"

namespace maintmine {

// Synthetic labeled corpus: half of the commits carry class-indicative
// keywords (with realistic overlap between classes), the other half have
// keyword-free messages, so their class shows only in the change counts.
// Class shares follow 500/404/247 within each half.
struct SynthParams {
  std::size_t with_keywords = 600;
  std::size_t without_keywords = 600;
  std::uint64_t seed = 20170;
  double keyword_noise = 0.15; // share of keyword messages borrowing another class's words
};

namespace detail {

inline std::array<std::size_t, kNumClasses> apportion(std::size_t n) {
  constexpr std::array<double, kNumClasses> weights = {500, 404, 247}; // corrective, perfective, adaptive
  const double total = weights[0] + weights[1] + weights[2];
  std::array<std::size_t, kNumClasses> out{};
  std::array<std::pair<double, std::size_t>, kNumClasses> rem{};
  std::size_t used = 0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const double exact = static_cast<double>(n) * weights[k] / total;
    out[k] = static_cast<std::size_t>(std::floor(exact));
    used += out[k];
    rem[k] = {exact - std::floor(exact), k};
  }
  std::sort(rem.begin(), rem.end(), [](auto a, auto b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  for (std::size_t i = 0; used < n; ++i, ++used)
    ++out[rem[i].second];
  return out;
}

inline std::uint32_t poisson(Rng &rng, double mean) {
  const double limit = std::exp(-mean);
  std::uint32_t k = 0;
  for (double p = rng.unit(); p > limit; p *= rng.unit())
    ++k;
  return k;
}

using ChangeProfile = std::vector<std::pair<std::size_t, double>>; // (change index, mean)

// Every class draws from a shared base profile; the class tilt on top is
// what a change-aware model can pick up.
inline const ChangeProfile &base_profile() {
  static const ChangeProfile p = {{42, 1.5}, {43, 2.0}, {46, 2.0}, {4, 0.5}, {45, 0.3}, {14, 0.2}};
  return p;
}

inline const PerClass<ChangeProfile> &change_profiles() {
  static const PerClass<ChangeProfile> p = [] {
    PerClass<ChangeProfile> r;
    r[MaintenanceClass::corrective] = {{46, 0.6}, {15, 0.4}, {7, 0.2}};
    r[MaintenanceClass::perfective] = {{42, 0.8}, {34, 0.3}, {21, 0.2}, {45, 0.2}, {19, 0.2}};
    r[MaintenanceClass::adaptive] = {{43, 1.2}, {4, 0.5}, {5, 0.3}, {23, 0.2}, {18, 0.2}};
    return r;
  }();
  return p;
}

inline const PerClass<std::vector<std::string>> &keyword_forms() {
  static const PerClass<std::vector<std::string>> k = [] {
    PerClass<std::vector<std::string>> r;
    r[MaintenanceClass::corrective] = {"fix", "fixed", "fixes", "bug", "issue", "failing", "fails",
                                       "error", "NPE", "reported"};
    r[MaintenanceClass::perfective] = {"refactor", "refactored", "remove", "removed", "improve",
                                       "method", "methods", "change", "changed"};
    r[MaintenanceClass::adaptive] = {"support", "supports", "add", "adds", "implement", "implemented",
                                     "new", "allow", "allows"};
    return r;
  }();
  return k;
}

inline const std::vector<std::string> &shared_keyword_forms() {
  static const std::vector<std::string> w = {"test", "tests", "use", "using", "set"};
  return w;
}

inline const std::vector<std::string> &filler_words() {
  static const std::vector<std::string> w = {
      "blob",    "logic",    "parser",  "handler", "config",  "cluster",  "query",   "index",   "schema",
      "endpoint", "docs",    "timeout", "scanner", "listener", "builder", "wrapper", "encoding", "serializer",
      "metrics", "thread",   "pool",    "session", "router",  "buffer",   "channel", "stream",  "layout",
      "widget",  "dialog",   "update",  "tweak",   "bump",    "adjust",   "polish",  "move",    "rename",
      "gradle",  "javadoc",  "logging", "lock",    "cursor",  "mapper",   "factory", "registry", "snapshot"};
  return w;
}

template <typename T>
const T &pick(Rng &rng, const std::vector<T> &v) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

inline std::string capitalized(std::string s) {
  if (!s.empty())
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

} // namespace detail

inline LabeledDataset synthesize_corpus(const SynthParams &params = {}) {
  using namespace detail;
  Rng rng(params.seed);
  const auto vocab = Vocabulary::builtin();
  const auto cfg = StopwordConfig::defaults();

  struct Draft {
    MaintenanceClass label;
    bool keywords;
  };
  std::vector<Draft> drafts;
  for (bool kw : {true, false}) {
    const auto counts = apportion(kw ? params.with_keywords : params.without_keywords);
    for (auto c : kAllClasses)
      for (std::size_t i = 0; i < counts[index_of(c)]; ++i)
        drafts.push_back({c, kw});
  }
  rng.shuffle(std::span(drafts));

  std::vector<Commit> commits;
  commits.reserve(drafts.size());
  for (std::size_t n = 0; n < drafts.size(); ++n) {
    const auto [label, kw] = drafts[n];
    Commit c;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%04zu", n + 1);
    c.id = id;
    c.project = "project" + std::to_string(1 + n % 11);
    c.label = label;

    std::vector<std::string> words;
    const std::size_t fillers = 2 + static_cast<std::size_t>(rng.below(4));
    for (std::size_t i = 0; i < fillers; ++i)
      words.push_back(pick(rng, filler_words()));
    if (kw) {
      auto source = label;
      if (rng.unit() < params.keyword_noise)
        source = class_at(static_cast<std::size_t>(rng.below(kNumClasses)));
      const std::size_t hits = 1 + static_cast<std::size_t>(rng.below(2));
      for (std::size_t i = 0; i < hits; ++i)
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)),
                     pick(rng, keyword_forms()[source]));
      if (rng.below(4) == 0)
        words.push_back(pick(rng, shared_keyword_forms()));
    }
    std::string msg = capitalized(words[0]);
    for (std::size_t i = 1; i < words.size(); ++i)
      msg += " " + words[i];
    if (has_keywords(msg, vocab, cfg) != kw)
      throw Error("synthetic message '" + msg + "' breaks its keyword class");
    c.message = std::move(msg);

    const double scale = 0.5 + 1.5 * rng.unit();
    std::array<double, kNumChangeTypes> mean{};
    for (const auto &[type, m] : base_profile())
      mean[type] += m;
    for (const auto &[type, m] : change_profiles()[label])
      mean[type] += m;
    for (std::size_t t = 0; t < kNumChangeTypes; ++t)
      if (mean[t] > 0)
        c.changes[t] = poisson(rng, mean[t] * scale);
    commits.push_back(std::move(c));
  }
  return LabeledDataset(std::move(commits));
}

} // namespace maintmine
