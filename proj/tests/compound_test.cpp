#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "maintmine/compound.hpp"
#include "maintmine/model_file.hpp"
#include "maintmine/synth.hpp"
#include "test_util.hpp"

using namespace maintmine;
using namespace maintmine::testing;

namespace {

const StopwordConfig kCfg = StopwordConfig::defaults();
const std::vector<std::string> kLabels(kDefaultChangeTypes.begin(), kDefaultChangeTypes.end());

Commit worked_example() {
  return make_commit("w", "Refactored blob logic into separate methods", MaintenanceClass::perfective,
                     {{change::additional_functionality, 2}, {change::statement_update, 1}});
}

// Small, fast corpus for model plumbing.
const LabeledDataset &small_corpus() {
  static const LabeledDataset ds = synthesize_corpus({90, 90, 3, 0.15});
  return ds;
}

CompoundSpec small_forest(ModelType kw, ModelType nokw) {
  CompoundSpec s;
  s.kw = kw;
  s.nokw = nokw;
  s.forest.trees = 25;
  s.seed = 4;
  return s;
}

Commit random_probe(Rng &rng) {
  static const std::vector<std::string> words = {"fix", "bug", "refactor", "add", "support", "parser", "blob",
                                                 "the", "new", "test", "cleanup", "methods", "npe", "tweak"};
  Commit c;
  c.id = "probe";
  for (std::size_t i = 0, n = rng.below(5); i < n; ++i)
    c.message += words[rng.below(words.size())] + " ";
  for (std::size_t i = 0, n = rng.below(6); i < n; ++i)
    c.changes[rng.below(kNumChangeTypes)] += static_cast<std::uint32_t>(1 + rng.below(4));
  return c;
}

} // namespace

TEST(FeatureVector, WorkedExampleInAllThreeViews) {
  const auto vocab = Vocabulary::builtin();
  const auto c = worked_example();

  auto kw = build_feature_vector(c, ModelType::keywords, vocab, kCfg);
  ASSERT_EQ(kw.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i)
    EXPECT_EQ(kw[i], (vocab.words[i] == "method" || vocab.words[i] == "refactor") ? 1.0 : 0.0) << i;

  auto ch = build_feature_vector(c, ModelType::changes, vocab, kCfg);
  ASSERT_EQ(ch.size(), 48u);
  for (std::size_t i = 0; i < 48; ++i)
    EXPECT_EQ(ch[i], i == 4 ? 2.0 : i == 46 ? 1.0 : 0.0) << kDefaultChangeTypes[i];

  auto all = build_feature_vector(c, ModelType::combined, vocab, kCfg);
  ASSERT_EQ(all.size(), 68u);
  std::vector<double> expected(68, 0.0);
  expected[10] = 1; // method
  expected[13] = 1; // refactor
  expected[24] = 2; // additional_functionality
  expected[66] = 1; // statement_update
  EXPECT_EQ(all, expected);
}

TEST(FeatureVector, EmptyCommitIsZero) {
  const auto vocab = Vocabulary::builtin();
  Commit empty;
  for (auto t : {ModelType::keywords, ModelType::changes, ModelType::combined}) {
    auto x = build_feature_vector(empty, t, vocab, kCfg);
    EXPECT_EQ(x.size(), feature_width(t, 20));
    EXPECT_TRUE(std::all_of(x.begin(), x.end(), [](double v) { return v == 0; }));
  }
}

TEST(FeatureVector, NamesAvoidLabelCollisions) {
  Vocabulary v{{"fix", "unknown"}, VocabularyProvenance::derived, {}};
  auto names = feature_names(ModelType::combined, v, kLabels);
  ASSERT_EQ(names.size(), 50u);
  EXPECT_EQ(names[0], "fix");
  EXPECT_EQ(names[1], "kw:unknown");
  EXPECT_EQ(names[49], "unknown");
}

TEST(Spec, TypesParseAndRejectGarbage) {
  for (auto a : {ModelType::keywords, ModelType::changes, ModelType::combined})
    for (auto b : {ModelType::keywords, ModelType::changes, ModelType::combined}) {
      CompoundSpec s;
      s.kw = a;
      s.nokw = b;
      EXPECT_EQ(parse_spec_types(spec_types_string(s)), std::make_pair(a, b));
    }
  EXPECT_THROW(parse_spec_types("keywords"), UsageError);
  EXPECT_THROW(parse_spec_types("keywords+words"), UsageError);
}

TEST(Dispatch, PathFollowsKeywordPresence) {
  auto m = train_compound(small_corpus(), small_forest(ModelType::keywords, ModelType::combined),
                          Vocabulary::builtin(), kCfg, kLabels);
  EXPECT_EQ(classify_commit(m, make_commit("a", "fix the parser", MaintenanceClass::corrective)).path,
            DispatchPath::kw);
  EXPECT_EQ(classify_commit(m, make_commit("b", "", MaintenanceClass::corrective)).path, DispatchPath::nokw);

  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    auto c = random_probe(rng);
    auto r = classify_commit(m, c);
    EXPECT_EQ(r.path == DispatchPath::kw, has_keywords(c.message, m.vocabulary, kCfg)) << c.message;
  }
}

TEST(Dispatch, BatchClassificationIsPerCommit) {
  auto m = train_compound(small_corpus(), small_forest(ModelType::keywords, ModelType::changes),
                          Vocabulary::builtin(), kCfg, kLabels);
  auto all = classify_all(m, small_corpus());
  for (std::size_t i = 0; i < small_corpus().size(); i += 7) {
    auto alone = classify_commit(m, small_corpus()[i]);
    EXPECT_EQ(alone.label, all[i].label);
    EXPECT_EQ(alone.scores, all[i].scores);
  }
}

TEST(Compound, SameTypesShareOneComponent) {
  const auto vocab = Vocabulary::builtin();
  for (auto t : {ModelType::keywords, ModelType::combined}) {
    auto spec = small_forest(t, t);
    auto m = train_compound(small_corpus(), spec, vocab, kCfg, kLabels);
    EXPECT_TRUE(m.shared());
    std::vector<std::size_t> rows(small_corpus().size());
    std::iota(rows.begin(), rows.end(), 0);
    auto single = train_component(training_view(small_corpus(), rows, t, vocab, kCfg, kLabels), spec);
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
      auto c = random_probe(rng);
      auto a = classify_commit(m, c);
      auto b = predict(single, build_feature_vector(c, t, vocab, kCfg));
      EXPECT_EQ(a.label, b.label);
      EXPECT_EQ(a.scores, b.scores);
    }
  }
}

TEST(Compound, PartitionedTrainingSplitsBySubset) {
  auto spec = small_forest(ModelType::keywords, ModelType::changes);
  spec.partition_train = true;
  auto m = train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels);
  ASSERT_TRUE(m.kw_model && m.nokw_model);
  auto n_kw = std::get<ForestModel>(*m.kw_model).class_counts;
  auto n_nokw = std::get<ForestModel>(*m.nokw_model).class_counts;
  for (auto c : kAllClasses)
    EXPECT_EQ(n_kw[c] + n_nokw[c], small_corpus().class_counts()[c]);
  EXPECT_EQ(n_kw[MaintenanceClass::corrective] + n_kw[MaintenanceClass::perfective] +
                n_kw[MaintenanceClass::adaptive],
            90u);

  // every training commit has keywords
  auto only_kw = small_corpus().subset([&] {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < small_corpus().size(); ++i)
      if (has_keywords(small_corpus()[i].message, Vocabulary::builtin(), kCfg))
        r.push_back(i);
    return r;
  }());
  EXPECT_THROW(train_compound(only_kw, spec, Vocabulary::builtin(), kCfg, kLabels), DataError);
}

TEST(Compound, AllAlgorithmsTrain) {
  for (auto alg : {Algorithm::tree, Algorithm::forest, Algorithm::boost}) {
    auto spec = small_forest(ModelType::keywords, ModelType::combined);
    spec.algorithm = alg;
    spec.boost.stages = 20;
    auto m = train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels);
    auto preds = classify_all(m, small_corpus());
    std::size_t right = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
      right += preds[i].label == *small_corpus()[i].label;
    EXPECT_GT(right, preds.size() / 2) << to_string(alg);
  }
}

TEST(Naive, RulesAndFallback) {
  ClassCounts counts;
  counts[MaintenanceClass::corrective] = 5;
  counts[MaintenanceClass::perfective] = 9;
  counts[MaintenanceClass::adaptive] = 2;
  auto m = NaiveModel::train(counts);
  EXPECT_EQ(m.fallback(), MaintenanceClass::perfective);
  EXPECT_EQ(m.classify("Fixed crash in parser", kCfg).label, MaintenanceClass::corrective);
  EXPECT_EQ(m.classify("Implemented support for streams", kCfg).label, MaintenanceClass::adaptive);
  EXPECT_EQ(m.classify("Refactored and simplified the lexer", kCfg).label, MaintenanceClass::perfective);
  EXPECT_EQ(m.classify("Bump version", kCfg).label, MaintenanceClass::perfective);
  EXPECT_FALSE(m.fires("Bump version", kCfg));
  // one hit each: the larger training class wins
  EXPECT_EQ(m.classify("fix and add", kCfg).label, MaintenanceClass::corrective);
  auto p = m.classify("fix bug, add", kCfg);
  EXPECT_EQ(p.label, MaintenanceClass::corrective);
  EXPECT_NEAR(p.scores[MaintenanceClass::corrective], 2.0 / 3.0, 1e-12);
}

TEST(Naive, CompoundPathReflectsRuleFiring) {
  CompoundSpec spec;
  spec.algorithm = Algorithm::naive;
  auto m = train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels);
  EXPECT_EQ(classify_commit(m, make_commit("a", "fix", MaintenanceClass::corrective)).path, DispatchPath::kw);
  EXPECT_EQ(classify_commit(m, make_commit("b", "tweak", MaintenanceClass::corrective)).path, DispatchPath::nokw);
  auto back = deserialize_model(serialize_model(m));
  EXPECT_EQ(back.naive, m.naive);
}

TEST(ModelFile, RoundTripAgreesOnProbes) {
  auto m = train_compound(small_corpus(), small_forest(ModelType::keywords, ModelType::combined),
                          Vocabulary::builtin(), kCfg, kLabels);
  const auto bytes = serialize_model(m);
  EXPECT_TRUE(bytes.starts_with("MMCM 1\n"));
  auto back = deserialize_model(bytes);
  EXPECT_EQ(serialize_model(back), bytes);
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    auto c = random_probe(rng);
    auto a = classify_commit(m, c), b = classify_commit(back, c);
    ASSERT_EQ(a.label, b.label);
    ASSERT_EQ(a.scores, b.scores);
    ASSERT_EQ(a.path, b.path);
  }
}

TEST(ModelFile, AllAlgorithmsRoundTrip) {
  for (auto alg : {Algorithm::tree, Algorithm::boost}) {
    auto spec = small_forest(ModelType::changes, ModelType::combined);
    spec.algorithm = alg;
    spec.boost.stages = 10;
    auto m = train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels);
    auto bytes = serialize_model(m);
    EXPECT_EQ(serialize_model(deserialize_model(bytes)), bytes);
  }
}

TEST(ModelFile, DamageIsDetected) {
  auto spec = small_forest(ModelType::keywords, ModelType::keywords);
  spec.algorithm = Algorithm::tree;
  const auto bytes = serialize_model(train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels));
  EXPECT_THROW(deserialize_model(bytes.substr(0, bytes.size() / 2)), ChecksumError);
  EXPECT_THROW(deserialize_model(bytes.substr(0, bytes.size() - 3)), ChecksumError);

  auto flipped = bytes;
  flipped[bytes.find("\"seed\"") + 1] = 'S';
  EXPECT_THROW(deserialize_model(flipped), ChecksumError);

  auto future = bytes;
  future[5] = '2';
  try {
    deserialize_model(future);
    FAIL() << "future version accepted";
  } catch (const VersionError &e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
  EXPECT_THROW(deserialize_model("hello"), DataError);
  EXPECT_THROW(load_model("/nonexistent/model.mmcm"), DataError);
}

TEST(ModelFile, TrainingIsDeterministic) {
  auto spec = small_forest(ModelType::keywords, ModelType::combined);
  auto a = serialize_model(train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels));
  spec.forest.threads = 3;
  auto b = serialize_model(train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels));
  EXPECT_EQ(a, b);
  spec.seed = 5;
  EXPECT_NE(serialize_model(train_compound(small_corpus(), spec, Vocabulary::builtin(), kCfg, kLabels)), a);
}

TEST(Synthetic, ShapeAndKeywordSplit) {
  const auto ds = synthesize_corpus();
  ASSERT_EQ(ds.size(), 1200u);
  EXPECT_EQ(ds.class_counts()[MaintenanceClass::corrective], 522u);
  EXPECT_EQ(ds.class_counts()[MaintenanceClass::perfective], 420u);
  EXPECT_EQ(ds.class_counts()[MaintenanceClass::adaptive], 258u);
  const auto vocab = Vocabulary::builtin();
  std::size_t with_kw = 0;
  for (const auto &c : ds.commits())
    with_kw += has_keywords(c.message, vocab, kCfg);
  EXPECT_EQ(with_kw, 600u);
}

TEST(Synthetic, ShippedFileMatchesGenerator) {
  std::ostringstream fresh;
  write_commits(fresh, synthesize_corpus().commits(), DatasetFormat::csv);
  EXPECT_EQ(read_file(data_path("synthetic_corpus.csv")), fresh.str());
  auto shipped = import_dataset(data_path("synthetic_corpus.csv"), DatasetFormat::csv);
  EXPECT_EQ(shipped.commits(), synthesize_corpus().commits());
}
