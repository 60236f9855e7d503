#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/corpus.hpp"
#include "maintmine/learners.hpp"
#include "maintmine/naive.hpp"
#include "maintmine/taxonomy.hpp"
#include "maintmine/textnorm.hpp"

namespace maintmine {

enum class ModelType { keywords, changes, combined };

inline std::string_view to_string(ModelType t) noexcept {
  switch (t) {
  case ModelType::keywords:
    return "keywords";
  case ModelType::changes:
    return "changes";
  case ModelType::combined:
    return "combined";
  }
  return "?";
}

inline ModelType parse_model_type(std::string_view s) {
  for (auto t : {ModelType::keywords, ModelType::changes, ModelType::combined})
    if (to_string(t) == s)
      return t;
  throw UsageError("unknown model type '" + std::string(s) + "' (expected keywords, changes or combined)");
}

inline std::size_t feature_width(ModelType t, std::size_t vocab_size) {
  switch (t) {
  case ModelType::keywords:
    return vocab_size;
  case ModelType::changes:
    return kNumChangeTypes;
  case ModelType::combined:
    return vocab_size + kNumChangeTypes;
  }
  return 0;
}

struct CompoundSpec {
  ModelType kw = ModelType::keywords;
  ModelType nokw = ModelType::combined;
  Algorithm algorithm = Algorithm::forest;
  TreeParams tree;
  ForestParams forest;
  BoostParams boost;
  std::uint64_t seed = 1;
  bool partition_train = false;

  bool operator==(const CompoundSpec &) const = default;
};

// "<kw-type>+<nokw-type>", e.g. "keywords+combined".
inline std::pair<ModelType, ModelType> parse_spec_types(std::string_view s) {
  auto plus = s.find('+');
  if (plus == std::string_view::npos)
    throw UsageError("spec must look like <kw-type>+<nokw-type>, got '" + std::string(s) + "'");
  return {parse_model_type(s.substr(0, plus)), parse_model_type(s.substr(plus + 1))};
}

inline std::string spec_types_string(const CompoundSpec &s) {
  return std::string(to_string(s.kw)) + "+" + std::string(to_string(s.nokw));
}

inline void to_json(nlohmann::json &j, const CompoundSpec &s) {
  j = {{"kw", to_string(s.kw)},     {"nokw", to_string(s.nokw)},   {"algorithm", to_string(s.algorithm)},
       {"tree", s.tree},            {"forest", s.forest},          {"boost", s.boost},
       {"seed", s.seed},            {"partition_train", s.partition_train}};
}
inline void from_json(const nlohmann::json &j, CompoundSpec &s) {
  s.kw = parse_model_type(j.at("kw").get<std::string>());
  s.nokw = parse_model_type(j.at("nokw").get<std::string>());
  s.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  j.at("tree").get_to(s.tree);
  j.at("forest").get_to(s.forest);
  j.at("boost").get_to(s.boost);
  j.at("seed").get_to(s.seed);
  j.at("partition_train").get_to(s.partition_train);
}

// Feature vector of one commit: keyword block (binary) first, then change
// counts in taxonomy order.
inline std::vector<double> build_feature_vector(const Commit &c, ModelType t, const Vocabulary &vocab,
                                                const StopwordConfig &cfg) {
  std::vector<double> x;
  x.reserve(feature_width(t, vocab.size()));
  if (t != ModelType::changes)
    for (auto bit : keyword_vector(c.message, vocab, cfg))
      x.push_back(bit);
  if (t != ModelType::keywords)
    for (auto n : c.changes.counts)
      x.push_back(static_cast<double>(n));
  return x;
}

// Column names for a feature view. Keywords use their stem, changes their
// taxonomy label; a stem equal to a label is written "kw:<stem>".
inline std::vector<std::string> feature_names(ModelType t, const Vocabulary &vocab,
                                              const std::vector<std::string> &labels) {
  std::vector<std::string> names;
  if (t != ModelType::changes)
    for (const auto &w : vocab.words)
      names.push_back(std::find(labels.begin(), labels.end(), w) == labels.end() ? w : "kw:" + w);
  if (t != ModelType::keywords)
    names.insert(names.end(), labels.begin(), labels.end());
  return names;
}

enum class DispatchPath { kw, nokw };

inline std::string_view to_string(DispatchPath p) noexcept { return p == DispatchPath::kw ? "kw" : "nokw"; }

struct CompoundModel {
  CompoundSpec spec;
  Vocabulary vocabulary;
  StopwordConfig stopwords;
  std::vector<std::string> taxonomy;
  std::optional<Model> kw_model;
  std::optional<Model> nokw_model; // empty when both paths share kw_model
  std::optional<NaiveModel> naive;

  bool shared() const noexcept { return !naive && !nokw_model; }
};

struct Classification {
  MaintenanceClass label = MaintenanceClass::corrective;
  ClassScores scores;
  DispatchPath path = DispatchPath::kw;
};

inline TrainingMatrix training_view(const LabeledDataset &ds, std::span<const std::size_t> rows, ModelType t,
                                    const Vocabulary &vocab, const StopwordConfig &cfg,
                                    const std::vector<std::string> &labels) {
  TrainingMatrix m(feature_names(t, vocab, labels));
  for (auto i : rows)
    m.add_row(build_feature_vector(ds[i], t, vocab, cfg), *ds[i].label);
  return m;
}

inline Model train_component(const TrainingMatrix &data, const CompoundSpec &spec) {
  switch (spec.algorithm) {
  case Algorithm::tree:
    return train_tree(data, spec.tree);
  case Algorithm::forest: {
    auto p = spec.forest;
    p.seed = spec.seed;
    return train_forest(data, p);
  }
  case Algorithm::boost: {
    auto p = spec.boost;
    p.seed = spec.seed;
    return train_boost(data, p);
  }
  case Algorithm::naive:
    break;
  }
  throw UsageError("the naive baseline has no feature-based component");
}

// Trains both components. By default each sees the full training set under
// its own feature view; with partition_train the kw component sees only
// commits with keywords and the nokw component the rest. Equal component
// types without partitioning train a single shared model.
inline CompoundModel train_compound(const LabeledDataset &train, const CompoundSpec &spec, const Vocabulary &vocab,
                                    const StopwordConfig &cfg, const std::vector<std::string> &taxonomy_labels) {
  if (train.size() == 0)
    throw DataError("empty training set");
  if (taxonomy_labels.size() != kNumChangeTypes)
    throw DataError("taxonomy must have " + std::to_string(kNumChangeTypes) + " labels");
  CompoundModel m;
  m.spec = spec;
  m.vocabulary = vocab;
  m.stopwords = cfg;
  m.taxonomy = taxonomy_labels;
  if (spec.algorithm == Algorithm::naive) {
    m.naive = NaiveModel::train(train.class_counts());
    return m;
  }
  std::vector<std::size_t> all(train.size()), with_kw, without_kw;
  std::iota(all.begin(), all.end(), 0);
  for (auto i : all)
    (has_keywords(train[i].message, vocab, cfg) ? with_kw : without_kw).push_back(i);

  if (!spec.partition_train) {
    m.kw_model = train_component(training_view(train, all, spec.kw, vocab, cfg, taxonomy_labels), spec);
    if (spec.nokw != spec.kw)
      m.nokw_model = train_component(training_view(train, all, spec.nokw, vocab, cfg, taxonomy_labels), spec);
    return m;
  }
  if (with_kw.empty() || without_kw.empty())
    throw DataError("partitioned training needs commits both with and without keywords");
  m.kw_model = train_component(training_view(train, with_kw, spec.kw, vocab, cfg, taxonomy_labels), spec);
  m.nokw_model = train_component(training_view(train, without_kw, spec.nokw, vocab, cfg, taxonomy_labels), spec);
  return m;
}

inline Classification classify_commit(const CompoundModel &m, const Commit &c) {
  if (m.naive) {
    auto p = m.naive->classify(c.message, m.stopwords);
    return {p.label, p.scores, m.naive->fires(c.message, m.stopwords) ? DispatchPath::kw : DispatchPath::nokw};
  }
  const bool kw = has_keywords(c.message, m.vocabulary, m.stopwords);
  const Model &model = kw || m.shared() ? *m.kw_model : *m.nokw_model;
  const ModelType type = kw ? m.spec.kw : m.spec.nokw;
  auto p = predict(model, build_feature_vector(c, type, m.vocabulary, m.stopwords));
  return {p.label, p.scores, kw ? DispatchPath::kw : DispatchPath::nokw};
}

inline std::vector<Classification> classify_all(const CompoundModel &m, const LabeledDataset &ds) {
  std::vector<Classification> out;
  out.reserve(ds.size());
  for (const auto &c : ds.commits())
    out.push_back(classify_commit(m, c));
  return out;
}

} // namespace maintmine
