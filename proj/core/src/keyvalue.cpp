#include "neoburst/keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "neoburst/error.hpp"

namespace neoburst {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, const std::string& key) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    // from_chars rejects "inf"/"nan" spellings produced by some printers.
    if (token == "inf") return INFINITY;
    if (token == "-inf") return -INFINITY;
    throw Error("key '" + key + "': '" + std::string(token) +
                "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

KeyValueDoc KeyValueDoc::parse(std::string_view text) {
  KeyValueDoc doc;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw Error("line " + std::to_string(line_no) + ": empty key");
    }
    if (doc.contains(key)) {
      throw Error("line " + std::to_string(line_no) + ": duplicate key '" +
                  key + "'");
    }
    doc.entries_.emplace_back(std::move(key),
                              std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

std::string KeyValueDoc::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void KeyValueDoc::set(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

void KeyValueDoc::set_number(const std::string& key, double value) {
  set(key, format_number(value));
}

void KeyValueDoc::set_numbers(const std::string& key,
                              const std::vector<double>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ' ';
    joined += format_number(values[i]);
  }
  set(key, std::move(joined));
}

bool KeyValueDoc::contains(const std::string& key) const {
  for (const auto& entry : entries_) {
    if (entry.first == key) return true;
  }
  return false;
}

const std::string& KeyValueDoc::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw Error("missing key '" + key + "'");
}

double KeyValueDoc::get_number(const std::string& key) const {
  return parse_double(get(key), key);
}

long long KeyValueDoc::get_integer(const std::string& key) const {
  const std::string& s = get(key);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("key '" + key + "': '" + s + "' is not an integer");
  }
  return v;
}

std::vector<double> KeyValueDoc::get_numbers(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& w : get_words(key)) out.push_back(parse_double(w, key));
  return out;
}

std::vector<std::string> KeyValueDoc::get_words(const std::string& key) const {
  std::istringstream in(get(key));
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(std::move(w));
  return out;
}

void KeyValueDoc::require_format(std::string_view expected) const {
  if (!contains("format")) throw Error("document has no 'format' line");
  const std::string& tag = get("format");
  if (tag != expected) {
    throw VersionMismatchError("expected format '" + std::string(expected) +
                               "', found '" + tag + "'");
  }
}

}  // namespace neoburst
