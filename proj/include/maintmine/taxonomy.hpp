#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maintmine/error.hpp"

namespace maintmine {

inline constexpr std::size_t kNumChangeTypes = 48;

// Source-code change types, one coordinate per taxonomy entry.
struct ChangeVector {
  std::array<std::uint32_t, kNumChangeTypes> counts{};

  std::uint32_t &operator[](std::size_t i) noexcept { return counts[i]; }
  std::uint32_t operator[](std::size_t i) const noexcept { return counts[i]; }

  std::uint64_t total() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts)
      s += c;
    return s;
  }

  ChangeVector &operator+=(const ChangeVector &o) noexcept {
    for (std::size_t i = 0; i < kNumChangeTypes; ++i)
      counts[i] += o.counts[i];
    return *this;
  }

  friend ChangeVector operator+(ChangeVector a, const ChangeVector &b) noexcept { return a += b; }
  bool operator==(const ChangeVector &) const = default;
};

// The fine-grained change taxonomy for object-oriented code: 47 named types
// plus "unknown", in alphabetical order with "unknown" last. Coordinate i of
// a ChangeVector counts kDefaultChangeTypes[i].
inline constexpr std::array<std::string_view, kNumChangeTypes> kDefaultChangeTypes = {
    "adding_attribute_modifiability",   // 0
    "adding_class_derivability",        // 1
    "adding_method_overridability",     // 2
    "additional_class",                 // 3
    "additional_functionality",         // 4
    "additional_object_state",          // 5
    "alternative_part_delete",          // 6
    "alternative_part_insert",          // 7
    "attribute_renaming",               // 8
    "attribute_type_change",            // 9
    "class_renaming",                   // 10
    "comment_delete",                   // 11
    "comment_insert",                   // 12
    "comment_move",                     // 13
    "comment_update",                   // 14
    "condition_expression_change",      // 15
    "decreasing_accessibility_change",  // 16
    "doc_delete",                       // 17
    "doc_insert",                       // 18
    "doc_update",                       // 19
    "increasing_accessibility_change",  // 20
    "method_renaming",                  // 21
    "parameter_delete",                 // 22
    "parameter_insert",                 // 23
    "parameter_ordering_change",        // 24
    "parameter_renaming",               // 25
    "parameter_type_change",            // 26
    "parent_class_change",              // 27
    "parent_class_delete",              // 28
    "parent_class_insert",              // 29
    "parent_interface_change",          // 30
    "parent_interface_delete",          // 31
    "parent_interface_insert",          // 32
    "removed_class",                    // 33
    "removed_functionality",            // 34
    "removed_object_state",             // 35
    "removing_attribute_modifiability", // 36
    "removing_class_derivability",      // 37
    "removing_method_overridability",   // 38
    "return_type_change",               // 39
    "return_type_delete",               // 40
    "return_type_insert",               // 41
    "statement_delete",                 // 42
    "statement_insert",                 // 43
    "statement_ordering_change",        // 44
    "statement_parent_change",          // 45
    "statement_update",                 // 46
    "unknown",                          // 47
};

// Fixed indices of the types the built-in distiller emits.
namespace change {
inline constexpr std::size_t additional_class = 3;
inline constexpr std::size_t additional_functionality = 4;
inline constexpr std::size_t class_renaming = 10;
inline constexpr std::size_t method_renaming = 21;
inline constexpr std::size_t parameter_delete = 22;
inline constexpr std::size_t parameter_insert = 23;
inline constexpr std::size_t removed_class = 33;
inline constexpr std::size_t removed_functionality = 34;
inline constexpr std::size_t statement_delete = 42;
inline constexpr std::size_t statement_insert = 43;
inline constexpr std::size_t statement_update = 46;
inline constexpr std::size_t unknown = 47;
} // namespace change

// Label table with alias resolution. Input spellings "statement_updated" and
// "unclassified_change" resolve to "statement_update" and "unknown".
class Taxonomy {
public:
  Taxonomy() : Taxonomy(std::vector<std::string>(kDefaultChangeTypes.begin(), kDefaultChangeTypes.end())) {}

  explicit Taxonomy(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() != kNumChangeTypes)
      throw DataError("taxonomy must list exactly " + std::to_string(kNumChangeTypes) + " change types, got " +
                      std::to_string(labels_.size()));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty())
        throw DataError("taxonomy entry " + std::to_string(i) + " is empty");
      if (!index_.emplace(labels_[i], i).second)
        throw DataError("duplicate taxonomy label '" + labels_[i] + "'");
    }
  }

  // Taxonomy file: '#' comment lines are skipped, every other non-blank line
  // is one label; the i-th label line is coordinate i.
  static Taxonomy from_stream(std::istream &in) {
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
      line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
      auto b = line.find_first_not_of(" \t");
      if (b == std::string::npos || line[b] == '#')
        continue;
      auto e = line.find_last_not_of(" \t");
      labels.push_back(line.substr(b, e - b + 1));
    }
    return Taxonomy(std::move(labels));
  }

  static Taxonomy from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw DataError("cannot open taxonomy file '" + path + "'");
    return from_stream(in);
  }

  const std::vector<std::string> &labels() const noexcept { return labels_; }
  const std::string &label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> find(std::string_view label) const {
    if (label == "statement_updated")
      label = "statement_update";
    else if (label == "unclassified_change")
      label = "unknown";
    auto it = index_.find(std::string(label));
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  bool operator==(const Taxonomy &o) const { return labels_ == o.labels_; }

private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
};

} // namespace maintmine
