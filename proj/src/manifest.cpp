#include "inferbench/manifest.hpp"

#include <algorithm>
#include <fstream>

#include "inferbench/error.hpp"

namespace inferbench {

void Manifest::set(std::string_view key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::string(key), std::move(value));
}

std::optional<std::string> Manifest::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Manifest::erase_prefix(std::string_view prefix) {
  std::erase_if(entries_, [&](const auto& e) { return e.first.starts_with(prefix); });
}

std::string Manifest::text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Data, "cannot write " + path.string());
  out << text();
}

Manifest Manifest::read(const std::filesystem::path& path) {
  Manifest m;
  std::ifstream in(path, std::ios::binary);
  if (!in) return m;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

}  // namespace inferbench
