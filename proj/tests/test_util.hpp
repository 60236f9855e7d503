#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maintmine/corpus.hpp"

namespace maintmine::testing {

inline std::string data_path(const std::string &rel) { return std::string(MAINTMINE_DATA_DIR) + "/" + rel; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("maintmine_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

  std::string write(const std::string &name, const std::string &content) const {
    auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Commit make_commit(std::string id, std::string message, MaintenanceClass label,
                          std::vector<std::pair<std::size_t, std::uint32_t>> changes = {}) {
  Commit c;
  c.id = std::move(id);
  c.project = "proj";
  c.message = std::move(message);
  c.label = label;
  for (auto [t, n] : changes)
    c.changes[t] = n;
  return c;
}

inline std::string csv_header() {
  std::string h = "id,project,message,label";
  for (auto t : kDefaultChangeTypes)
    h += "," + std::string(t);
  return h + "\n";
}

inline std::string csv_row(const std::string &id, const std::string &msg, const std::string &label,
                           std::size_t change_index = kNumChangeTypes, int count = 0) {
  std::string r = id + ",p," + msg + "," + label;
  for (std::size_t t = 0; t < kNumChangeTypes; ++t)
    r += "," + std::to_string(t == change_index ? count : 0);
  return r + "\n";
}

} // namespace maintmine::testing
