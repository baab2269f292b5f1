#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inferbench {

/// Ordered `key=value` lines. Setting an existing key replaces its value in
/// place.
class Manifest {
 public:
  void set(std::string_view key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  /// Drops every key starting with `prefix`.
  void erase_prefix(std::string_view prefix);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string text() const;
  void write(const std::filesystem::path& path) const;
  /// Missing file gives an empty manifest.
  static Manifest read(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace inferbench
