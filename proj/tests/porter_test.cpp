#include <gtest/gtest.h>

#include <fstream>

#include "maintmine/porter.hpp"
#include "test_util.hpp"

using maintmine::stem;

TEST(PorterStemmer, PaperKeywordStems) {
  EXPECT_EQ(stem("changes"), "chang");
  EXPECT_EQ(stem("change"), "chang");
  EXPECT_EQ(stem("improve"), "improv");
  EXPECT_EQ(stem("issue"), "issu");
  EXPECT_EQ(stem("removed"), "remov");
  EXPECT_EQ(stem("refactoring"), "refactor");
  EXPECT_EQ(stem("implemented"), "implement");
  EXPECT_EQ(stem("ignoreancestry"), "ignoreancestri");
  EXPECT_EQ(stem("npe"), "npe");
}

TEST(PorterStemmer, ReferenceVariantRules) {
  EXPECT_EQ(stem("sensibility"), "sensibl");
  EXPECT_EQ(stem("archaeology"), "archaeolog");
  EXPECT_EQ(stem("as"), "as");
  EXPECT_EQ(stem("caresses"), "caress");
  EXPECT_EQ(stem("ponies"), "poni");
  EXPECT_EQ(stem("hopping"), "hop");
  EXPECT_EQ(stem("filing"), "file");
  EXPECT_EQ(stem("relational"), "relat");
  EXPECT_EQ(stem("generalization"), "gener");
}

TEST(PorterStemmer, NonAlphabeticPassesThrough) {
  EXPECT_EQ(stem("utf8"), "utf8");
  EXPECT_EQ(stem("2017"), "2017");
}

TEST(PorterStemmer, MatchesVocabularyFixture) {
  std::ifstream voc(maintmine::testing::data_path("porter/voc.txt"));
  std::ifstream out(maintmine::testing::data_path("porter/output.txt"));
  ASSERT_TRUE(voc && out);
  std::string w, expected;
  std::size_t n = 0, mismatches = 0;
  while (std::getline(voc, w) && std::getline(out, expected)) {
    ++n;
    if (stem(w) != expected && ++mismatches <= 10)
      ADD_FAILURE() << w << " -> " << stem(w) << ", expected " << expected;
  }
  EXPECT_GT(n, 20000u);
  EXPECT_EQ(mismatches, 0u);
}
