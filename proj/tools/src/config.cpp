#include "vmvcli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vmvcli/csv.hpp"

namespace vmvcli {
namespace {

std::string field_name(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') return {"<unterminated list>"};
    s = s.substr(1, s.size() - 2);
  }
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <class T>
std::optional<T> parse_exact(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SchemaError("config", "INI text", "parse error at line " + std::to_string(e.line()) + " (" + e.message() + ")");
  }
  Config c;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      // key before any section header
      c.set("", name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) c.set(name, key, leaf.data());
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  if (!values_.count(section)) section_order_.push_back(section);
  values_[section][key] = trim(value);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = values_.find(section);
  return it != values_.end() && it->second.count(key);
}

bool Config::has_section(const std::string& section) const { return values_.count(section) > 0; }

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) {
  const auto it = values_.find(section);
  if (it == values_.end()) return std::nullopt;
  const auto jt = it->second.find(key);
  if (jt == it->second.end()) return std::nullopt;
  used_.insert(field_name(section, key));
  return jt->second;
}

void Config::record(const std::string& section, const std::string& key, const std::string& value) {
  auto sec = std::find_if(echo_.begin(), echo_.end(), [&](const auto& s) { return s.first == section; });
  if (sec == echo_.end()) {
    echo_.push_back({section, {}});
    sec = echo_.end() - 1;
  }
  auto kv = std::find_if(sec->second.begin(), sec->second.end(), [&](const auto& p) { return p.first == key; });
  if (kv == sec->second.end())
    sec->second.emplace_back(key, value);
  else
    kv->second = value;
}

double Config::number(const std::string& section, const std::string& key, std::optional<double> def) {
  const auto r = raw(section, key);
  double v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "a number", "nothing (required field)");
    v = *def;
  } else {
    const auto p = parse_exact<double>(*r);
    if (!p) throw SchemaError(field_name(section, key), "a number", "'" + *r + "'");
    v = *p;
  }
  record(section, key, format_number(v));
  return v;
}

long Config::integer(const std::string& section, const std::string& key, std::optional<long> def) {
  const auto r = raw(section, key);
  long v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "an integer", "nothing (required field)");
    v = *def;
  } else {
    const auto p = parse_exact<long>(*r);
    if (!p) throw SchemaError(field_name(section, key), "an integer", "'" + *r + "'");
    v = *p;
  }
  record(section, key, std::to_string(v));
  return v;
}

std::uint64_t Config::seed(const std::string& section, const std::string& key, std::optional<std::uint64_t> def) {
  const auto r = raw(section, key);
  std::uint64_t v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "an unsigned 64-bit integer", "nothing (required field)");
    v = *def;
  } else {
    const auto p = parse_exact<std::uint64_t>(*r);
    if (!p) throw SchemaError(field_name(section, key), "an unsigned 64-bit integer", "'" + *r + "'");
    v = *p;
  }
  record(section, key, std::to_string(v));
  return v;
}

bool Config::boolean(const std::string& section, const std::string& key, std::optional<bool> def) {
  const auto r = raw(section, key);
  bool v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "true or false", "nothing (required field)");
    v = *def;
  } else if (*r == "true") {
    v = true;
  } else if (*r == "false") {
    v = false;
  } else {
    throw SchemaError(field_name(section, key), "true or false", "'" + *r + "'");
  }
  record(section, key, v ? "true" : "false");
  return v;
}

std::string Config::text(const std::string& section, const std::string& key, std::optional<std::string> def,
                         const std::vector<std::string>& choices) {
  const auto r = raw(section, key);
  std::string v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "a string", "nothing (required field)");
    v = *def;
  } else {
    v = unquote(*r);
  }
  if (!choices.empty() && std::find(choices.begin(), choices.end(), v) == choices.end()) {
    std::string expected = "one of";
    for (const auto& c : choices) expected += " \"" + c + "\"";
    throw SchemaError(field_name(section, key), expected, "\"" + v + "\"");
  }
  record(section, key, "\"" + v + "\"");
  return v;
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key,
                                    std::optional<std::vector<double>> def) {
  const auto r = raw(section, key);
  std::vector<double> v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "a list of numbers", "nothing (required field)");
    v = *def;
  } else {
    for (const auto& tok : split_list(*r)) {
      const auto p = parse_exact<double>(tok);
      if (!p) throw SchemaError(field_name(section, key), "a list of numbers", "'" + *r + "'");
      v.push_back(*p);
    }
  }
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  record(section, key, s + "]");
  return v;
}

std::vector<long> Config::integers(const std::string& section, const std::string& key,
                                   std::optional<std::vector<long>> def) {
  const auto r = raw(section, key);
  std::vector<long> v;
  if (!r) {
    if (!def) throw SchemaError(field_name(section, key), "a list of integers", "nothing (required field)");
    v = *def;
  } else {
    for (const auto& tok : split_list(*r)) {
      const auto p = parse_exact<long>(tok);
      if (!p) throw SchemaError(field_name(section, key), "a list of integers", "'" + *r + "'");
      v.push_back(*p);
    }
  }
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  record(section, key, s + "]");
  return v;
}

void Config::check_unused() const {
  for (const auto& section : section_order_)
    for (const auto& [key, value] : values_.at(section))
      if (!used_.count(field_name(section, key)))
        throw SchemaError(field_name(section, key), "a field of this command's schema", "'" + value + "'");
}

std::string Config::echo() const {
  std::string out;
  for (const auto& [section, kvs] : echo_) {
    if (!section.empty()) out += (out.empty() ? "[" : "\n[") + section + "]\n";
    for (const auto& [k, v] : kvs) out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace vmvcli
