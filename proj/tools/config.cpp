#include "config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "usage.hpp"

namespace eacomm::cli {

namespace {

void from_stream(std::istream& in, const std::string& origin, std::map<std::string, std::string>& out) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError("config " + origin + ": " + e.message() + " at line " + std::to_string(e.line()));
  }
  auto put = [&](const std::string& key, const std::string& value) {
    if (!out.emplace(key, value).second) throw UsageError("config " + origin + ": duplicate key '" + key + "'");
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      put(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) put(key, leaf.data());
    }
  }
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  Config c;
  from_stream(in, "'" + path + "'", c.values_);
  return c;
}

Config Config::parse(const std::string& text) {
  std::istringstream in(text);
  Config c;
  from_stream(in, "text", c.values_);
  return c;
}

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> Config::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "' is not a number: '" + *v + "'");
  }
}

std::optional<long> Config::get_long(const std::string& key) const {
  auto v = get_double(key);
  if (!v) return std::nullopt;
  if (*v != static_cast<double>(static_cast<long>(*v))) {
    throw UsageError("config key '" + key + "' must be an integer");
  }
  return static_cast<long>(*v);
}

}  // namespace eacomm::cli
