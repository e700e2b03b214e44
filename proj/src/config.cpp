#include "driftlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace driftlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text, const std::string& origin) {
  KeyValues kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.find(section, key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + section +
                        "." + key);
    kv.entries_.push_back({section, key, value});
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const KeyValues::Entry* KeyValues::find(const std::string& section,
                                        const std::string& key) const {
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

bool KeyValues::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string KeyValues::get_string(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError(origin_ + ": missing required key " + section + "." + key);
  e->consumed = true;
  return e->value;
}

std::string KeyValues::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return e->value;
}

namespace {

double parse_double(const std::string& value, const std::string& where) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a real number: '" + value + "'");
  }
  if (pos != value.size())
    throw ConfigError(where + ": trailing characters in number: '" + value + "'");
  return out;
}

long parse_long(const std::string& value, const std::string& where) {
  std::size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(where + ": not an integer: '" + value + "'");
  }
  if (pos != value.size())
    throw ConfigError(where + ": trailing characters in integer: '" + value + "'");
  return out;
}

}  // namespace

double KeyValues::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get_string(section, key), section + "." + key);
}

double KeyValues::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return parse_double(e->value, section + "." + key);
}

long KeyValues::get_long(const std::string& section, const std::string& key) const {
  return parse_long(get_string(section, key), section + "." + key);
}

long KeyValues::get_long(const std::string& section, const std::string& key,
                         long fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return parse_long(e->value, section + "." + key);
}

bool KeyValues::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  if (e->value == "true" || e->value == "1") return true;
  if (e->value == "false" || e->value == "0") return false;
  throw ConfigError(section + "." + key + ": expected true/false");
}

std::uint64_t KeyValues::get_u64(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  try {
    return std::stoull(e->value);
  } catch (const std::exception&) {
    throw ConfigError(section + "." + key + ": not an unsigned integer: '" + e->value + "'");
  }
}

std::vector<double> KeyValues::get_double_list(const std::string& section,
                                               const std::string& key) const {
  const std::string raw = get_string(section, key);
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, section + "." + key));
  }
  if (out.empty()) throw ConfigError(section + "." + key + ": empty list");
  return out;
}

void KeyValues::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = value;
      e.consumed = false;
      return;
    }
  }
  entries_.push_back({section, key, value});
}

void KeyValues::set_double(const std::string& section, const std::string& key, double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  set(section, key, out.str());
}

void KeyValues::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const std::string value = trim(assignment.substr(eq + 1));
  if (section.empty() || key.empty())
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  set(section, key, value);
}

void KeyValues::ensure_consumed() const {
  std::string unknown;
  for (const auto& e : entries_) {
    if (!e.consumed) unknown += (unknown.empty() ? "" : ", ") + e.section + "." + e.key;
  }
  if (!unknown.empty())
    throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

void KeyValues::consume_section(const std::string& section) const {
  for (const auto& e : entries_)
    if (e.section == section) e.consumed = true;
}

std::string KeyValues::serialize() const {
  std::vector<std::string> sections;
  for (const auto& e : entries_)
    if (std::find(sections.begin(), sections.end(), e.section) == sections.end())
      sections.push_back(e.section);
  std::ostringstream out;
  bool first = true;
  for (const auto& s : sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << s << "]\n";
    for (const auto& e : entries_)
      if (e.section == s) out << e.key << " = " << e.value << "\n";
  }
  return out.str();
}

}  // namespace driftlab
