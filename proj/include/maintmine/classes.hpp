#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "maintmine/error.hpp"

namespace maintmine {

// The three maintenance activities. Enumerator order is the fixed
// tie-breaking order used everywhere a total order over classes is needed.
enum class MaintenanceClass : std::size_t { corrective = 0, perfective = 1, adaptive = 2 };

inline constexpr std::size_t kNumClasses = 3;

inline constexpr std::array<MaintenanceClass, kNumClasses> kAllClasses = {
    MaintenanceClass::corrective, MaintenanceClass::perfective, MaintenanceClass::adaptive};

// Order used by confusion-matrix tables and reports (alphabetical).
inline constexpr std::array<MaintenanceClass, kNumClasses> kReportOrder = {
    MaintenanceClass::adaptive, MaintenanceClass::corrective, MaintenanceClass::perfective};

constexpr std::size_t index_of(MaintenanceClass c) noexcept { return static_cast<std::size_t>(c); }

constexpr MaintenanceClass class_at(std::size_t i) noexcept { return static_cast<MaintenanceClass>(i); }

constexpr std::string_view to_string(MaintenanceClass c) noexcept {
  switch (c) {
  case MaintenanceClass::corrective:
    return "corrective";
  case MaintenanceClass::perfective:
    return "perfective";
  case MaintenanceClass::adaptive:
    return "adaptive";
  }
  return "?";
}

inline std::optional<MaintenanceClass> try_parse_class(std::string_view s) noexcept {
  for (auto c : kAllClasses)
    if (to_string(c) == s)
      return c;
  return std::nullopt;
}

inline MaintenanceClass parse_class(std::string_view s) {
  if (auto c = try_parse_class(s))
    return *c;
  throw DataError("unknown label '" + std::string(s) + "'");
}

// Per-class counters indexed by MaintenanceClass.
template <typename T>
struct PerClass {
  std::array<T, kNumClasses> values{};

  T &operator[](MaintenanceClass c) noexcept { return values[index_of(c)]; }
  const T &operator[](MaintenanceClass c) const noexcept { return values[index_of(c)]; }

  bool operator==(const PerClass &) const = default;
};

using ClassCounts = PerClass<std::size_t>;

// Argmax over per-class values. Exact ties go to the class with the larger
// tie_counts entry, then to the earlier class in the fixed order.
template <typename T>
MaintenanceClass argmax_class(const PerClass<T> &values, const ClassCounts &tie_counts) {
  MaintenanceClass best = MaintenanceClass::corrective;
  for (auto c : kAllClasses) {
    if (c == best)
      continue;
    if (values[c] > values[best] ||
        (values[c] == values[best] && tie_counts[c] > tie_counts[best]))
      best = c;
  }
  return best;
}

} // namespace maintmine
