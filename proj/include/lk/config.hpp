// Flat key = value experiment configs with array literals. No nesting: every
// module parameter appears as one line, so the format parses trivially from
// any language. '#' starts a comment, "inf" is accepted wherever an exponent
// may be infinite.
#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lk {

class Config {
 public:
  static Config parse(std::string_view text) {
    Config cfg;
    std::size_t line_no = 0;
    std::string_view rest = text;
    while (!rest.empty()) {
      auto nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": expected key = value");
      std::string key{trim(line.substr(0, eq))};
      std::string value{trim(line.substr(eq + 1))};
      if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                   ": empty key");
      if (!cfg.has(key)) cfg.order_.push_back(key);
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, std::string value) {
    if (!has(key)) order_.push_back(key);
    values_[key] = std::move(value);
  }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
    return it->second;
  }

  std::string get_or(const std::string& key, std::string fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? std::move(fallback) : it->second;
  }

  double get_double(const std::string& key) const { return to_double(get(key), key); }

  double get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  int get_int(const std::string& key) const {
    const double d = get_double(key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
      throw std::invalid_argument("config: key '" + key + "' must be an integer");
    return i;
  }

  int get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::vector<std::string> get_array(const std::string& key) const {
    std::string_view v = get(key);
    v = trim(v);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      throw std::invalid_argument("config: key '" + key + "' must be an [array]");
    v = trim(v.substr(1, v.size() - 2));
    std::vector<std::string> out;
    if (v.empty()) return out;
    while (true) {
      auto comma = v.find(',');
      out.emplace_back(trim(v.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      v = v.substr(comma + 1);
    }
    return out;
  }

  std::vector<double> get_double_array(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : get_array(key)) out.push_back(to_double(s, key));
    return out;
  }

  /// "a:b" inclusive integer window.
  std::pair<int, int> get_window(const std::string& key) const {
    const std::string& v = get(key);
    auto colon = v.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("config: key '" + key + "' must be a window a:b");
    try {
      const int a = std::stoi(v.substr(0, colon));
      const int b = std::stoi(v.substr(colon + 1));
      if (b < a) throw std::invalid_argument("empty");
      return {a, b};
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key + "' must be a window a:b");
    }
  }

  /// Keys in first-seen order, for the '#' echo in artifacts.
  std::vector<std::pair<std::string, std::string>> echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : order_)
      if (values_.count(k)) out.emplace_back(k, values_.at(k));
    return out;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  static double to_double(const std::string& s, const std::string& key) {
    if (s == "inf" || s == "Inf" || s == "INF")
      return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return d;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key + "': bad number '" + s + "'");
    }
  }

  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

} // namespace lk
