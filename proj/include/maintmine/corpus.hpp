#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "maintmine/classes.hpp"
#include "maintmine/csv.hpp"
#include "maintmine/error.hpp"
#include "maintmine/rng.hpp"
#include "maintmine/taxonomy.hpp"

namespace maintmine {

struct Commit {
  std::string id;
  std::string project;
  std::string message;
  ChangeVector changes;
  std::optional<MaintenanceClass> label;

  bool operator==(const Commit &) const = default;
};

// An ordered set of labeled commits. Construction validates labels and ids.
class LabeledDataset {
public:
  LabeledDataset() = default;

  explicit LabeledDataset(std::vector<Commit> commits) : commits_(std::move(commits)) {
    std::set<std::string> seen;
    for (const auto &c : commits_) {
      if (c.id.empty())
        throw DataError("commit with empty id");
      if (!c.label)
        throw DataError("commit '" + c.id + "' has no label");
      if (!seen.insert(c.id).second)
        throw DataError("duplicate commit id '" + c.id + "'");
      ++counts_[*c.label];
    }
  }

  const std::vector<Commit> &commits() const noexcept { return commits_; }
  std::size_t size() const noexcept { return commits_.size(); }
  bool empty() const noexcept { return commits_.empty(); }
  const Commit &operator[](std::size_t i) const { return commits_[i]; }
  const ClassCounts &class_counts() const noexcept { return counts_; }

  std::vector<MaintenanceClass> labels() const {
    std::vector<MaintenanceClass> out;
    out.reserve(commits_.size());
    for (const auto &c : commits_)
      out.push_back(*c.label);
    return out;
  }

  LabeledDataset subset(const std::vector<std::size_t> &indices) const {
    std::vector<Commit> out;
    out.reserve(indices.size());
    for (auto i : indices)
      out.push_back(commits_.at(i));
    return LabeledDataset(std::move(out));
  }

  bool operator==(const LabeledDataset &o) const { return commits_ == o.commits_; }

private:
  std::vector<Commit> commits_;
  ClassCounts counts_;
};

enum class DatasetFormat { csv, jsonl };

inline DatasetFormat parse_format(const std::string &s) {
  if (s == "csv")
    return DatasetFormat::csv;
  if (s == "jsonl")
    return DatasetFormat::jsonl;
  throw UsageError("unknown dataset format '" + s + "' (expected csv or jsonl)");
}

namespace detail {

inline std::uint32_t parse_count(const std::string &s, std::size_t line, const std::string &column) {
  if (s.empty())
    return 0;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9')
      throw ParseError(line, "column '" + column + "': '" + s + "' is not a non-negative integer");
    v = v * 10 + static_cast<unsigned>(c - '0');
    if (v > UINT32_MAX)
      throw ParseError(line, "column '" + column + "': count out of range");
  }
  return static_cast<std::uint32_t>(v);
}

inline std::optional<MaintenanceClass> parse_label_field(const std::string &s, std::size_t line) {
  if (s.empty())
    return std::nullopt;
  auto c = try_parse_class(s);
  if (!c)
    throw ParseError(line, "unknown label '" + s + "'");
  return c;
}

inline std::vector<Commit> read_csv(std::istream &in, const Taxonomy &tax, std::vector<std::string> *warnings) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header)
    throw DataError("no rows");
  const auto &cols = header->fields;
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < cols.size(); ++i)
    pos.emplace(cols[i], i);
  for (const char *req : {"id", "project", "message", "label"})
    if (!pos.count(req))
      throw ParseError(1, std::string("missing required column '") + req + "'");

  std::vector<std::optional<std::size_t>> change_col(cols.size());
  std::vector<bool> covered(kNumChangeTypes, false);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "id" || cols[i] == "project" || cols[i] == "message" || cols[i] == "label")
      continue;
    if (auto t = tax.find(cols[i])) {
      change_col[i] = *t;
      covered[*t] = true;
    } else if (warnings) {
      warnings->push_back("ignoring unknown column '" + cols[i] + "'");
    }
  }
  for (std::size_t t = 0; t < kNumChangeTypes; ++t)
    if (!covered[t])
      throw ParseError(1, "missing change-type column '" + tax.label(t) + "'");

  std::vector<Commit> out;
  std::set<std::string> seen;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty())
      continue; // blank line
    if (rec->fields.size() != cols.size())
      throw ParseError(rec->line, "expected " + std::to_string(cols.size()) + " fields, got " +
                                      std::to_string(rec->fields.size()));
    Commit c;
    c.id = rec->fields[pos["id"]];
    c.project = rec->fields[pos["project"]];
    c.message = rec->fields[pos["message"]];
    c.label = parse_label_field(rec->fields[pos["label"]], rec->line);
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (change_col[i])
        c.changes[*change_col[i]] = parse_count(rec->fields[i], rec->line, cols[i]);
    if (c.id.empty())
      throw ParseError(rec->line, "empty id");
    if (!seen.insert(c.id).second)
      throw ParseError(rec->line, "duplicate id '" + c.id + "'");
    out.push_back(std::move(c));
  }
  if (out.empty())
    throw DataError("no rows");
  return out;
}

inline std::vector<Commit> read_jsonl(std::istream &in, const Taxonomy &tax, std::vector<std::string> *warnings) {
  std::vector<Commit> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
      throw ParseError(lineno, "expected a JSON object");
    Commit c;
    try {
      c.id = j.at("id").get<std::string>();
      c.project = j.value("project", std::string{});
      c.message = j.value("message", std::string{});
      if (j.contains("label") && !j["label"].is_null())
        c.label = parse_label_field(j["label"].get<std::string>(), lineno);
      if (j.contains("changes")) {
        for (const auto &[key, val] : j["changes"].items()) {
          auto t = tax.find(key);
          if (!t) {
            if (warnings)
              warnings->push_back("line " + std::to_string(lineno) + ": ignoring unknown change type '" + key + "'");
            continue;
          }
          if (!val.is_number_unsigned())
            throw ParseError(lineno, "change count for '" + key + "' is not a non-negative integer");
          c.changes[*t] = val.get<std::uint32_t>();
        }
      }
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(lineno, e.what());
    }
    if (c.id.empty())
      throw ParseError(lineno, "empty id");
    if (!seen.insert(c.id).second)
      throw ParseError(lineno, "duplicate id '" + c.id + "'");
    out.push_back(std::move(c));
  }
  if (out.empty())
    throw DataError("no rows");
  return out;
}

} // namespace detail

// Reads commits whose label may be blank (for classification input).
inline std::vector<Commit> read_commits(std::istream &in, DatasetFormat format, const Taxonomy &tax = {},
                                        std::vector<std::string> *warnings = nullptr) {
  return format == DatasetFormat::csv ? detail::read_csv(in, tax, warnings) : detail::read_jsonl(in, tax, warnings);
}

inline std::vector<Commit> import_commits(const std::string &path, DatasetFormat format, const Taxonomy &tax = {},
                                          std::vector<std::string> *warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open dataset '" + path + "'");
  return read_commits(in, format, tax, warnings);
}

inline LabeledDataset import_dataset(const std::string &path, DatasetFormat format, const Taxonomy &tax = {},
                                     std::vector<std::string> *warnings = nullptr) {
  auto commits = import_commits(path, format, tax, warnings);
  for (const auto &c : commits)
    if (!c.label)
      throw DataError("commit '" + c.id + "' has no label");
  return LabeledDataset(std::move(commits));
}

inline void write_commits(std::ostream &out, const std::vector<Commit> &commits, DatasetFormat format,
                          const Taxonomy &tax = {}) {
  if (format == DatasetFormat::csv) {
    std::vector<std::string> header = {"id", "project", "message", "label"};
    header.insert(header.end(), tax.labels().begin(), tax.labels().end());
    csv::write_row(out, header);
    for (const auto &c : commits) {
      std::vector<std::string> row = {c.id, c.project, c.message,
                                      c.label ? std::string(to_string(*c.label)) : std::string{}};
      for (std::size_t t = 0; t < kNumChangeTypes; ++t)
        row.push_back(std::to_string(c.changes[t]));
      csv::write_row(out, row);
    }
    return;
  }
  for (const auto &c : commits) {
    nlohmann::ordered_json j;
    j["id"] = c.id;
    j["project"] = c.project;
    j["message"] = c.message;
    j["label"] = c.label ? nlohmann::ordered_json(std::string(to_string(*c.label))) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json ch = nlohmann::ordered_json::object();
    for (std::size_t t = 0; t < kNumChangeTypes; ++t)
      ch[tax.label(t)] = c.changes[t];
    j["changes"] = std::move(ch);
    out << j.dump() << '\n';
  }
}

inline void export_dataset(const std::string &path, const LabeledDataset &ds, DatasetFormat format,
                           const Taxonomy &tax = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot write '" + path + "'");
  write_commits(out, ds.commits(), format, tax);
}

struct HoldoutSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// Stratified holdout. Per class with n members, ceil((1 - f) * n) go to
// training and the rest to test, so the test share is floor(f * n) up to
// floating-point representation of f. Members are chosen by a seeded
// shuffle; relative dataset order is kept inside each side.
inline HoldoutSplit split_holdout(const LabeledDataset &ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw UsageError("test fraction must lie in (0,1)");
  for (auto c : kAllClasses)
    if (ds.class_counts()[c] < 2)
      throw DataError("class '" + std::string(to_string(c)) + "' has fewer than 2 instances");

  Rng rng(seed);
  std::vector<bool> in_test(ds.size(), false);
  for (auto cls : kAllClasses) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (*ds[i].label == cls)
        members.push_back(i);
    rng.shuffle(std::span<std::size_t>(members));
    const auto n = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::ceil((1.0 - test_fraction) * n - 1e-9));
    for (std::size_t k = n_train; k < members.size(); ++k)
      in_test[members[k]] = true;
  }
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < ds.size(); ++i)
    (in_test[i] ? test : train).push_back(i);
  return {ds.subset(train), ds.subset(test)};
}

} // namespace maintmine
