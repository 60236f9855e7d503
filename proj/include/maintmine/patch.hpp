#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maintmine/error.hpp"

namespace maintmine {

// Ordered unified-diff patches; patches[k] transforms revision k into k+1,
// revision 0 being the empty repository.
struct PatchSeries {
  std::string repository;
  std::vector<std::string> patches;

  std::size_t revisions() const noexcept { return patches.size(); }
};

struct RevisionPair {
  std::string path;
  std::string before;
  std::string after;
  std::size_t revision = 0; // 1-based index of the patch that produced `after`

  bool operator==(const RevisionPair &) const = default;
};

struct ReplayOptions {
  std::vector<std::string> extensions = {".java"};
  // Emit pairs for files created (empty "before") or deleted (empty "after").
  bool pair_creations = false;
};

class PatchError : public DataError {
public:
  PatchError(std::size_t index, const std::string &what)
      : DataError("patch " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

// Loads `dir/000001.patch`, `dir/000002.patch`, ... The numbering must be
// contiguous from 1 and no other *.patch files may be present.
inline PatchSeries load_patch_series(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw DataError("patch series directory '" + dir.string() + "' not found");
  std::size_t found = 0;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".patch")
      ++found;
  PatchSeries s;
  s.repository = dir.filename().string();
  for (std::size_t i = 1; i <= found; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.patch", i);
    std::ifstream in(dir / name, std::ios::binary);
    if (!in)
      throw DataError("patch series '" + dir.string() + "' is not contiguous: missing " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    s.patches.push_back(ss.str());
  }
  return s;
}

namespace detail {

struct FileText {
  std::vector<std::string> lines;
  bool final_newline = true;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out += lines[i];
      if (i + 1 < lines.size() || final_newline)
        out += '\n';
    }
    return out;
  }
};

struct Hunk {
  std::size_t old_start = 0, old_len = 0, new_start = 0, new_len = 0;
  std::string header;
  std::vector<std::string> body; // each line keeps its ' ', '-' or '+' prefix
  bool old_no_newline = false, new_no_newline = false;
};

struct FilePatch {
  std::optional<std::string> old_path; // nullopt: file is created
  std::optional<std::string> new_path; // nullopt: file is deleted
  std::vector<Hunk> hunks;
};

inline std::string strip_path(std::string_view raw) {
  auto tab = raw.find('\t');
  if (tab != std::string_view::npos)
    raw = raw.substr(0, tab);
  while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\r'))
    raw.remove_suffix(1);
  if (raw.starts_with("a/") || raw.starts_with("b/"))
    raw.remove_prefix(2);
  return std::string(raw);
}

inline bool parse_range(std::string_view s, std::size_t &start, std::size_t &len) {
  auto comma = s.find(',');
  try {
    start = std::stoul(std::string(s.substr(0, comma)));
    len = comma == std::string_view::npos ? 1 : std::stoul(std::string(s.substr(comma + 1)));
  } catch (...) {
    return false;
  }
  return true;
}

inline std::vector<FilePatch> parse_unified_diff(const std::string &text, std::size_t index) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
      if (!l.empty() && l.back() == '\r')
        l.pop_back();
      lines.push_back(std::move(l));
    }
  }
  std::vector<FilePatch> files;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (!lines[i].starts_with("--- ")) {
      ++i;
      continue;
    }
    if (i + 1 >= lines.size() || !lines[i + 1].starts_with("+++ "))
      throw PatchError(index, "'---' header without '+++' header");
    FilePatch fp;
    auto old_p = strip_path(std::string_view(lines[i]).substr(4));
    auto new_p = strip_path(std::string_view(lines[i + 1]).substr(4));
    if (old_p != "/dev/null")
      fp.old_path = old_p;
    if (new_p != "/dev/null")
      fp.new_path = new_p;
    if (!fp.old_path && !fp.new_path)
      throw PatchError(index, "both sides are /dev/null");
    i += 2;
    while (i < lines.size() && lines[i].starts_with("@@")) {
      Hunk h;
      h.header = lines[i];
      // @@ -a[,b] +c[,d] @@
      std::istringstream hs(lines[i]);
      std::string at1, oldr, newr;
      hs >> at1 >> oldr >> newr;
      if (oldr.size() < 2 || newr.size() < 2 || oldr[0] != '-' || newr[0] != '+' ||
          !parse_range(std::string_view(oldr).substr(1), h.old_start, h.old_len) ||
          !parse_range(std::string_view(newr).substr(1), h.new_start, h.new_len))
        throw PatchError(index, "malformed hunk header '" + lines[i] + "'");
      ++i;
      std::size_t seen_old = 0, seen_new = 0;
      while (i < lines.size() && (seen_old < h.old_len || seen_new < h.new_len || (i < lines.size() && lines[i].starts_with("\\")))) {
        const auto &l = lines[i];
        if (l.starts_with("\\")) {
          // "\ No newline at end of file" refers to the preceding line
          if (!h.body.empty()) {
            char kind = h.body.back()[0];
            if (kind == '-' || kind == ' ')
              h.old_no_newline = true;
            if (kind == '+' || kind == ' ')
              h.new_no_newline = true;
          }
          ++i;
          continue;
        }
        char kind = l.empty() ? ' ' : l[0];
        std::string body = l.empty() ? std::string(" ") : l;
        if (kind == ' ') {
          ++seen_old;
          ++seen_new;
        } else if (kind == '-') {
          ++seen_old;
        } else if (kind == '+') {
          ++seen_new;
        } else {
          break;
        }
        h.body.push_back(std::move(body));
        ++i;
      }
      if (seen_old != h.old_len || seen_new != h.new_len)
        throw PatchError(index, "hunk '" + h.header + "' line counts do not match its header");
      fp.hunks.push_back(std::move(h));
    }
    files.push_back(std::move(fp));
  }
  return files;
}

inline FileText apply_hunks(const FileText &orig, const FilePatch &fp, std::size_t index, const std::string &path) {
  FileText out;
  out.final_newline = orig.final_newline;
  std::size_t cursor = 0;
  for (const auto &h : fp.hunks) {
    std::size_t start = h.old_len == 0 ? h.old_start : h.old_start - 1;
    if (h.old_len != 0 && h.old_start == 0)
      throw PatchError(index, path + ": hunk '" + h.header + "' has invalid start line 0");
    if (start < cursor || start > orig.lines.size())
      throw PatchError(index, path + ": hunk '" + h.header + "' does not apply (out of range)");
    for (; cursor < start; ++cursor)
      out.lines.push_back(orig.lines[cursor]);
    for (const auto &l : h.body) {
      std::string_view content = std::string_view(l).substr(1);
      if (l[0] == '+') {
        out.lines.emplace_back(content);
        continue;
      }
      if (cursor >= orig.lines.size() || orig.lines[cursor] != content)
        throw PatchError(index, path + ": hunk '" + h.header + "' does not apply at line " +
                                    std::to_string(cursor + 1) + ": expected '" + std::string(content) + "'");
      if (l[0] == ' ')
        out.lines.push_back(orig.lines[cursor]);
      ++cursor;
    }
    if (h.new_no_newline)
      out.final_newline = false;
    else if (h.old_no_newline)
      out.final_newline = true;
  }
  for (; cursor < orig.lines.size(); ++cursor)
    out.lines.push_back(orig.lines[cursor]);
  return out;
}

inline bool has_extension(const std::string &path, const std::vector<std::string> &exts) {
  if (exts.empty())
    return true;
  return std::any_of(exts.begin(), exts.end(), [&](const std::string &e) { return path.ends_with(e); });
}

} // namespace detail

// Applies patches in order to an in-memory repository, emitting the
// consecutive-revision pairs of every changed source file.
class PatchReplayer {
public:
  explicit PatchReplayer(ReplayOptions opts = {}) : opts_(std::move(opts)) {}

  // Applies the next patch; returns its pairs ordered by path. On error the
  // repository is left at the previous revision.
  std::vector<RevisionPair> apply(const std::string &patch_text) {
    const std::size_t index = revision_ + 1;
    auto files = detail::parse_unified_diff(patch_text, index);
    auto next = repo_;
    std::map<std::string, std::pair<std::optional<std::string>, std::optional<std::string>>> touched;
    for (const auto &fp : files) {
      const std::string &path = fp.new_path ? *fp.new_path : *fp.old_path;
      std::optional<std::string> before;
      detail::FileText base;
      if (fp.old_path) {
        auto it = next.find(*fp.old_path);
        if (it == next.end())
          throw PatchError(index, *fp.old_path + ": file does not exist");
        base = it->second;
        before = repo_.count(*fp.old_path) ? std::optional(repo_.at(*fp.old_path).str()) : std::nullopt;
      } else if (next.count(path)) {
        throw PatchError(index, path + ": file already exists");
      }
      auto result = detail::apply_hunks(base, fp, index, path);
      if (fp.old_path && (!fp.new_path || *fp.old_path != *fp.new_path))
        next.erase(*fp.old_path);
      if (fp.new_path)
        next[*fp.new_path] = result;
      if (!touched.count(path))
        touched[path].first = before;
      touched[path].second = fp.new_path ? std::optional(result.str()) : std::nullopt;
    }
    repo_ = std::move(next);
    revision_ = index;

    std::vector<RevisionPair> pairs;
    for (const auto &[path, sides] : touched) {
      if (!detail::has_extension(path, opts_.extensions))
        continue;
      const auto &[before, after] = sides;
      if ((!before || !after) && !opts_.pair_creations)
        continue;
      RevisionPair p{path, before.value_or(""), after.value_or(""), index};
      if (p.before == p.after)
        continue;
      pairs.push_back(std::move(p));
    }
    return pairs;
  }

  std::size_t revision() const noexcept { return revision_; }

  // Current content of every file, keyed by path.
  std::map<std::string, std::string> snapshot() const {
    std::map<std::string, std::string> out;
    for (const auto &[p, f] : repo_)
      out[p] = f.str();
    return out;
  }

private:
  ReplayOptions opts_;
  std::map<std::string, detail::FileText> repo_;
  std::size_t revision_ = 0;
};

// Replays the series from the empty repository, calling `sink` for every pair
// in (revision, path) order.
inline void replay_patches(const PatchSeries &series, const ReplayOptions &opts,
                           const std::function<void(const RevisionPair &)> &sink) {
  PatchReplayer r(opts);
  for (const auto &p : series.patches)
    for (const auto &pair : r.apply(p))
      sink(pair);
}

inline std::vector<RevisionPair> replay_patches(const PatchSeries &series, const ReplayOptions &opts = {}) {
  std::vector<RevisionPair> out;
  replay_patches(series, opts, [&](const RevisionPair &p) { out.push_back(p); });
  return out;
}

} // namespace maintmine
