#pragma once

#include <map>
#include <optional>
#include <string>

namespace eacomm::cli {

// key=value settings from an INI-style file. Section headers only group keys;
// a key may appear in at most one section.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  std::optional<std::string> get(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long> get_long(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace eacomm::cli
