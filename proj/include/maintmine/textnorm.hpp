#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maintmine/classes.hpp"
#include "maintmine/corpus.hpp"
#include "maintmine/csv.hpp"
#include "maintmine/error.hpp"
#include "maintmine/porter.hpp"

namespace maintmine {

// Built-in copies of data/stopwords_en.txt and data/custom_words.txt.
inline constexpr std::array<std::string_view, 174> kEnglishStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "these",
    "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "doing", "would", "should", "could", "ought", "i'm", "you're", "he's", "she's", "it's",
    "we're", "they're", "i've", "you've", "we've", "they've", "i'd", "you'd", "he'd", "she'd", "we'd",
    "they'd", "i'll", "you'll", "he'll", "she'll", "we'll", "they'll", "isn't", "aren't", "wasn't",
    "weren't", "hasn't", "haven't", "hadn't", "doesn't", "don't", "didn't", "won't", "wouldn't", "shan't",
    "shouldn't", "can't", "cannot", "couldn't", "mustn't", "let's", "that's", "who's", "what's", "here's",
    "there's", "when's", "where's", "why's", "how's", "a", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very"};

inline constexpr std::array<std::string_view, 73> kCustomWords = {
    "patch", "hbase", "checksum", "code", "version", "byte", "data", "hfile", "region", "schedul", "singl",
    "can", "yarn", "contribut", "commit", "merg", "make", "trunk", "hadoop", "svn", "ignoreancestri", "node",
    "also", "client", "hdfs", "mapreduc", "lipcon", "idea", "common", "file", "ideadev", "plugin", "project",
    "modul", "find", "border", "addit", "changeutilencod", "clickabl", "color", "column", "cach", "jbrule",
    "drool", "coprocessor", "regionserv", "scan", "resourcemanag", "cherri", "gong", "ryza", "sandi", "xuan",
    "token", "contain", "shen", "todd", "zhiji", "tan", "wangda", "timelin", "app", "kasha", "kashacherri",
    "messag", "spr", "camel", "http", "now", "class", "default", "pick", "via"};

// The 20 keywords of the built-in keyword model, alphabetical.
inline constexpr std::array<std::string_view, 20> kBuiltinKeywords = {
    "add",   "allow", "bug",    "chang",    "error", "fail",   "fix",    "implement", "improv", "issu",
    "method", "new",  "npe",    "refactor", "remov", "report", "set",    "support",   "test",   "use"};

inline std::set<std::string> read_word_list(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open word list '" + path + "'");
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos)
      continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string w = line.substr(b, e - b + 1);
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    out.insert(std::move(w));
  }
  return out;
}

struct StopwordConfig {
  std::set<std::string> english_stopwords;
  std::set<std::string> custom_words; // stemmed

  static StopwordConfig defaults() {
    StopwordConfig cfg;
    cfg.english_stopwords.insert(kEnglishStopwords.begin(), kEnglishStopwords.end());
    cfg.custom_words.insert(kCustomWords.begin(), kCustomWords.end());
    return cfg;
  }

  bool operator==(const StopwordConfig &) const = default;
};

enum class VocabularyProvenance { builtin, derived };

struct Vocabulary {
  std::vector<std::string> words; // coordinate order of keyword vectors
  VocabularyProvenance provenance = VocabularyProvenance::derived;
  // Stems produced here that stand for a vocabulary word. The built-in list
  // was stemmed with Porter2, which keeps "use" (and "uses", "used",
  // "using") as "use"; the Porter stemmer turns all of them into "us".
  std::map<std::string, std::string> aliases;

  static Vocabulary builtin() {
    return {std::vector<std::string>(kBuiltinKeywords.begin(), kBuiltinKeywords.end()),
            VocabularyProvenance::builtin,
            {{"us", "use"}}};
  }

  const std::string &canonical(const std::string &s) const {
    auto it = aliases.find(s);
    return it == aliases.end() ? s : it->second;
  }

  std::size_t size() const noexcept { return words.size(); }
  bool operator==(const Vocabulary &) const = default;
};

using KeywordVector = std::vector<std::uint8_t>;

// Lowercase, split on every non-alphanumeric character, drop one-letter
// tokens and English stopwords, stem, deduplicate, drop custom words.
inline std::set<std::string> normalize_message(std::string_view text, const StopwordConfig &cfg) {
  std::set<std::string> out;
  std::string token;
  auto flush = [&] {
    if (token.size() >= 2 && !cfg.english_stopwords.count(token)) {
      std::string s = stem(token);
      if (!cfg.custom_words.count(s))
        out.insert(std::move(s));
    }
    token.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c))
      token.push_back(static_cast<char>(std::tolower(c)));
    else
      flush();
  }
  flush();
  return out;
}

inline KeywordVector keyword_vector(std::string_view message, const Vocabulary &vocab, const StopwordConfig &cfg) {
  std::set<std::string> stems;
  for (const auto &s : normalize_message(message, cfg))
    stems.insert(vocab.canonical(s));
  KeywordVector v(vocab.size(), 0);
  for (std::size_t i = 0; i < vocab.size(); ++i)
    v[i] = stems.count(vocab.words[i]) ? 1 : 0;
  return v;
}

inline bool has_keywords(std::string_view message, const Vocabulary &vocab, const StopwordConfig &cfg) {
  const auto v = keyword_vector(message, vocab, cfg);
  return std::any_of(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; });
}

using FrequencyTable = std::vector<std::pair<std::string, std::size_t>>;

namespace detail {
inline std::map<std::string, std::size_t> message_counts(const LabeledDataset &ds, const StopwordConfig &cfg,
                                                         const MaintenanceClass *cls) {
  std::map<std::string, std::size_t> counts;
  for (const auto &c : ds.commits())
    if (!cls || *c.label == *cls)
      for (auto &s : normalize_message(c.message, cfg))
        ++counts[s];
  return counts;
}
} // namespace detail

// Stems of one class ranked by the number of its messages containing them.
inline FrequencyTable frequency_table(const LabeledDataset &ds, MaintenanceClass cls, const StopwordConfig &cfg) {
  if (ds.empty())
    throw DataError("frequency table of an empty dataset");
  auto counts = detail::message_counts(ds, cfg, &cls);
  FrequencyTable out(counts.begin(), counts.end()); // lexicographic
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.second > b.second; });
  return out;
}

// Union of ranked lists in the given order, keeping first occurrences.
inline std::vector<std::string> merge_ranked_lists(const std::vector<std::vector<std::string>> &lists) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto &list : lists)
    for (const auto &w : list)
      if (seen.insert(w).second)
        out.push_back(w);
  return out;
}

// Top-k stems per class (ties: total message count over all classes, then
// lexicographic), merged in corrective, perfective, adaptive order.
inline Vocabulary derive_vocabulary(const LabeledDataset &ds, std::size_t k_per_class, const StopwordConfig &cfg) {
  if (ds.empty())
    throw DataError("cannot derive a vocabulary from an empty dataset");
  const auto total = detail::message_counts(ds, cfg, nullptr);
  std::vector<std::vector<std::string>> tops;
  for (auto cls : kAllClasses) {
    auto counts = detail::message_counts(ds, cfg, &cls);
    if (counts.empty())
      throw DataError("class '" + std::string(to_string(cls)) + "' has no tokens after normalization");
    FrequencyTable ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto &a, const auto &b) {
      if (a.second != b.second)
        return a.second > b.second;
      auto ta = total.at(a.first), tb = total.at(b.first);
      if (ta != tb)
        return ta > tb;
      return a.first < b.first;
    });
    std::vector<std::string> top;
    for (std::size_t i = 0; i < ranked.size() && i < k_per_class; ++i)
      top.push_back(ranked[i].first);
    tops.push_back(std::move(top));
  }
  return {merge_ranked_lists(tops), VocabularyProvenance::derived, {}};
}

// CSV `stem,count,class`, one block per class in corrective, perfective,
// adaptive order.
inline void write_frequency_csv(std::ostream &out, const LabeledDataset &ds, const StopwordConfig &cfg) {
  csv::write_row(out, {"stem", "count", "class"});
  for (auto cls : kAllClasses) {
    if (ds.class_counts()[cls] == 0)
      continue;
    for (const auto &[s, n] : frequency_table(ds, cls, cfg))
      csv::write_row(out, {s, std::to_string(n), std::string(to_string(cls))});
  }
}

} // namespace maintmine
