#include "eigencond/toml_lite.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

#include "eigencond/errors.hpp"

namespace eigencond {

using nlohmann::json;

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// removes a trailing comment, respecting double-quoted strings
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

json parse_scalar(const std::string& raw, int line) {
  std::string v = strip(raw);
  if (v.empty()) fail(line, "missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::size_t pos = 0;
  if (v.find_first_not_of("+-0123456789") == std::string::npos) {
    try {
      long long i = std::stoll(v, &pos);
      if (pos == v.size()) return i;
    } catch (...) {
    }
  }
  try {
    double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (...) {
  }
  fail(line, "cannot parse value: " + v);
}

json parse_value(const std::string& raw, int line) {
  std::string v = strip(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') fail(line, "unterminated array");
    json arr = json::array();
    std::string inner = v.substr(1, v.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (strip(item).empty()) continue;
      arr.push_back(parse_scalar(item, line));
    }
    return arr;
  }
  return parse_scalar(v, line);
}

}  // namespace

json parse_toml_lite(const std::string& text) {
  json root = json::object();
  json* table = &root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated table header");
      std::string name = strip(line.substr(1, line.size() - 2));
      if (name.empty()) fail(line_no, "empty table name");
      if (root.contains(name)) fail(line_no, "duplicate table: " + name);
      root[name] = json::object();
      table = &root[name];
      continue;
    }
    std::size_t eq = std::string::npos;
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_string = !in_string;
      if (line[i] == '=' && !in_string) {
        eq = i;
        break;
      }
    }
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = strip(line.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");
    if (table->contains(key)) fail(line_no, "duplicate key: " + key);
    (*table)[key] = parse_value(line.substr(eq + 1), line_no);
  }
  return root;
}

json parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_toml_lite(buffer.str());
}

}  // namespace eigencond
