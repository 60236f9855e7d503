#include <gtest/gtest.h>

#include <numeric>

#include "maintmine/rng.hpp"
#include "maintmine/textnorm.hpp"
#include "test_util.hpp"

using namespace maintmine;
using namespace maintmine::testing;

namespace {

const StopwordConfig kCfg = StopwordConfig::defaults();
const char *kWorkedExample = "Refactored blob logic into separate methods";

std::set<std::string> S(std::initializer_list<const char *> xs) { return {xs.begin(), xs.end()}; }

std::string render(const std::set<std::string> &stems) {
  std::string out;
  for (const auto &s : stems)
    out += (out.empty() ? "" : " ") + s;
  return out;
}

LabeledDataset messages(std::vector<std::pair<std::string, MaintenanceClass>> rows) {
  std::vector<Commit> commits;
  for (std::size_t i = 0; i < rows.size(); ++i)
    commits.push_back(make_commit("m" + std::to_string(i), rows[i].first, rows[i].second));
  return LabeledDataset(std::move(commits));
}

// Words seen in commit messages of Java projects.
const std::vector<std::string> kCommitWords = {
    "fix",      "fixed",     "fixes",     "bug",      "bugs",      "npe",       "null",     "pointer",
    "exception", "test",     "tests",     "testing",  "add",       "added",     "adding",   "support",
    "supports", "allow",     "allows",    "implement", "implemented", "new",    "feature",  "refactor",
    "refactored", "refactoring", "remove", "removed", "removes",   "cleanup",   "improve",  "improved",
    "improvement", "change", "changes",   "changed",  "use",       "used",      "using",    "method",
    "methods",  "set",       "setting",   "report",   "reported",  "error",     "errors",   "fail",
    "failing",  "failure",   "issue",     "issues",   "typo",      "javadoc",   "docs",     "build",
    "broken",   "release",   "update",    "updated",  "api",       "config",    "configuration", "logging",
    "performance", "faster", "memory",    "leak",     "thread",    "safe",      "concurrent", "deadlock",
    "timeout",  "handler",   "parser",    "query",    "index",     "cluster",   "server",   "request",
    "response", "cleanup",   "simplify",  "rename",   "renamed",   "move",      "moved",    "extract",
    "interface", "abstract", "deprecated", "unused",  "imports",   "HBASE-1234", "#42",     "v2.3.1",
    "the",      "a",         "into",      "for",      "of",        "and",       "to",       "in"};

} // namespace

TEST(Normalize, WorkedExample) {
  EXPECT_EQ(normalize_message(kWorkedExample, kCfg), S({"refactor", "blob", "logic", "separ", "method"}));
}

TEST(Normalize, EmptyAndDuplicates) {
  EXPECT_TRUE(normalize_message("", kCfg).empty());
  EXPECT_EQ(normalize_message("Fixed fix fixes", kCfg), S({"fix"}));
}

TEST(Normalize, PunctuationStopwordsCustomWords) {
  EXPECT_EQ(normalize_message("HBASE-1234: Fixed NPE in the RegionServer (patch by Todd)!", kCfg),
            S({"1234", "fix", "npe"}));
  EXPECT_EQ(normalize_message("Merge branch 'trunk' into feature/x", kCfg), S({"branch", "featur"}));
}

// Re-normalizing the rendered output is the identity exactly when every
// stem is a fixed point of the stemmer.
TEST(Normalize, IdempotentWhenStemsAreFixedPoints) {
  Rng rng(11);
  int fixed_point_cases = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::string msg;
    for (std::size_t i = 0, n = 1 + rng.below(12); i < n; ++i)
      msg += kCommitWords[rng.below(kCommitWords.size())] + (rng.below(3) ? " " : ", ");
    auto once = normalize_message(msg, kCfg);
    bool all_fixed = std::all_of(once.begin(), once.end(), [](const std::string &s) { return stem(s) == s; });
    auto twice = normalize_message(render(once), kCfg);
    if (all_fixed) {
      ++fixed_point_cases;
      EXPECT_EQ(twice, once) << msg;
    } else {
      EXPECT_NE(twice, once) << msg;
    }
  }
  EXPECT_GT(fixed_point_cases, 50);
}

TEST(Normalize, StemOfStemCanDiffer) {
  EXPECT_EQ(stem("release"), "releas");
  EXPECT_EQ(stem("releas"), "relea");
  EXPECT_EQ(normalize_message(render(normalize_message("release", kCfg)), kCfg), S({"relea"}));
}

TEST(KeywordVector, WorkedExampleHitsRefactorAndMethod) {
  auto vocab = Vocabulary::builtin();
  auto v = keyword_vector(kWorkedExample, vocab, kCfg);
  ASSERT_EQ(v.size(), 20u);
  for (std::size_t i = 0; i < v.size(); ++i)
    EXPECT_EQ(v[i], (vocab.words[i] == "refactor" || vocab.words[i] == "method") ? 1 : 0) << vocab.words[i];
  EXPECT_TRUE(has_keywords(kWorkedExample, vocab, kCfg));
}

TEST(KeywordVector, EmptyAndRepeated) {
  auto vocab = Vocabulary::builtin();
  auto zero = keyword_vector("", vocab, kCfg);
  EXPECT_EQ(std::accumulate(zero.begin(), zero.end(), 0), 0);
  auto v = keyword_vector("fix fix fix", vocab, kCfg);
  EXPECT_EQ(std::accumulate(v.begin(), v.end(), 0), 1);
  EXPECT_EQ(v[6], 1); // "fix"
  EXPECT_FALSE(has_keywords("", vocab, kCfg));
  EXPECT_FALSE(has_keywords("Bump version 2.3.1", vocab, kCfg));
}

TEST(KeywordVector, BuiltinUseMatchesItsPorterForms) {
  auto vocab = Vocabulary::builtin();
  const std::size_t use = 19;
  ASSERT_EQ(vocab.words[use], "use");
  ASSERT_EQ(stem("using"), "us");
  for (const char *msg : {"use the pool", "Uses the pool", "used pool", "Using a pool"})
    EXPECT_EQ(keyword_vector(msg, vocab, kCfg)[use], 1) << msg;
  Vocabulary plain{vocab.words, VocabularyProvenance::derived, {}};
  EXPECT_FALSE(has_keywords("using a pool", plain, kCfg));
}

TEST(KeywordVector, BinaryAndConsistentWithHasKeywords) {
  auto vocab = Vocabulary::builtin();
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::string msg;
    for (std::size_t i = 0, n = rng.below(8); i < n; ++i)
      msg += kCommitWords[rng.below(kCommitWords.size())] + " ";
    auto v = keyword_vector(msg, vocab, kCfg);
    int sum = 0;
    for (auto x : v) {
      EXPECT_LE(x, 1);
      sum += x;
    }
    EXPECT_EQ(has_keywords(msg, vocab, kCfg), sum > 0);

    // permuting the vocabulary permutes the coordinates the same way
    std::vector<std::size_t> perm(vocab.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    Vocabulary permuted;
    permuted.aliases = vocab.aliases;
    for (auto p : perm)
      permuted.words.push_back(vocab.words[p]);
    auto pv = keyword_vector(msg, permuted, kCfg);
    for (std::size_t i = 0; i < perm.size(); ++i)
      EXPECT_EQ(pv[i], v[perm[i]]);
  }
}

TEST(Vocabulary, PaperTopListsMergeToBuiltinSet) {
  std::vector<std::vector<std::string>> lists = {
      {"fix", "test", "issu", "use", "fail", "bug", "report", "set", "error", "npe"},
      {"test", "remov", "use", "fix", "refactor", "method", "chang", "add", "improv", "new"},
      {"support", "add", "implement", "new", "allow", "use", "method", "test", "set", "chang"}};
  auto merged = merge_ranked_lists(lists);
  EXPECT_EQ(merged.size(), 20u);
  auto builtin = Vocabulary::builtin().words;
  EXPECT_EQ(std::set<std::string>(merged.begin(), merged.end()), std::set<std::string>(builtin.begin(), builtin.end()));
}

TEST(Vocabulary, DeriveFromSingleToken) {
  auto ds = messages({{"fix", MaintenanceClass::corrective},
                      {"Fix", MaintenanceClass::perfective},
                      {"fixes", MaintenanceClass::adaptive}});
  EXPECT_EQ(derive_vocabulary(ds, 10, kCfg).words, std::vector<std::string>{"fix"});
}

TEST(Vocabulary, TiesBrokenByTotalFrequencyThenLexicographic) {
  // corrective: alpha, beta and gamma each appear in one corrective message.
  // Totals across classes: gamma 3, beta 2, alpha 1. With k=2 the corrective
  // top list is gamma, beta.
  auto ds = messages({{"alpha beta gamma", MaintenanceClass::corrective},
                      {"gamma beta delta", MaintenanceClass::perfective},
                      {"gamma epsilon", MaintenanceClass::adaptive}});
  auto v = derive_vocabulary(ds, 2, kCfg);
  ASSERT_GE(v.words.size(), 2u);
  EXPECT_EQ(v.words[0], "gamma");
  EXPECT_EQ(v.words[1], "beta");
  // perfective list: gamma(3), beta(2) -> nothing new; adaptive: gamma, epsilon
  EXPECT_EQ(v.words, (std::vector<std::string>{"gamma", "beta", "epsilon"}));
  // equal totals fall back to lexicographic order
  auto lex = messages({{"zeta eta", MaintenanceClass::corrective},
                       {"widget", MaintenanceClass::perfective},
                       {"thing", MaintenanceClass::adaptive}});
  EXPECT_EQ(derive_vocabulary(lex, 1, kCfg).words[0], "eta");
}

TEST(Vocabulary, ClassWithoutTokensIsAnError) {
  auto ds = messages({{"fix", MaintenanceClass::corrective},
                      {"the and of", MaintenanceClass::perfective},
                      {"add", MaintenanceClass::adaptive}});
  EXPECT_THROW(derive_vocabulary(ds, 10, kCfg), DataError);
}

TEST(FrequencyTable, CountsMessagesNotOccurrences) {
  auto one = messages({{"add test for parser", MaintenanceClass::perfective}});
  for (const auto &[s, n] : frequency_table(one, MaintenanceClass::perfective, kCfg))
    EXPECT_EQ(n, 1u) << s;

  auto three = messages({{"test test parser", MaintenanceClass::perfective},
                         {"more tests", MaintenanceClass::perfective},
                         {"testing lexer", MaintenanceClass::perfective},
                         {"fix", MaintenanceClass::corrective}});
  auto t = frequency_table(three, MaintenanceClass::perfective, kCfg);
  ASSERT_FALSE(t.empty());
  EXPECT_EQ(t[0], (std::pair<std::string, std::size_t>{"test", 3}));
  EXPECT_EQ(t[1].first, "lexer"); // ties lexicographic
}

TEST(StopwordFiles, MatchBuiltinLists) {
  auto cfg = StopwordConfig::defaults();
  EXPECT_EQ(read_word_list(data_path("stopwords_en.txt")), cfg.english_stopwords);
  EXPECT_EQ(read_word_list(data_path("custom_words.txt")), cfg.custom_words);
  EXPECT_EQ(cfg.custom_words.size(), 73u);
}
