#ifndef NEOBURST_KEYVALUE_HPP_
#define NEOBURST_KEYVALUE_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace neoburst {

// Line-oriented UTF-8 "key = value" document used for model files and CLI
// configuration. Keys keep insertion order; '#' starts a comment line.
// Numbers are written with 17 significant digits, lists space-separated.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(std::string_view text);
  std::string to_string() const;

  void set(const std::string& key, std::string value);
  void set_number(const std::string& key, double value);
  void set_numbers(const std::string& key, const std::vector<double>& values);

  bool contains(const std::string& key) const;
  // The getters throw Error naming the key when absent or malformed.
  const std::string& get(const std::string& key) const;
  double get_number(const std::string& key) const;
  long long get_integer(const std::string& key) const;
  std::vector<double> get_numbers(const std::string& key) const;
  std::vector<std::string> get_words(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  // Requires `format = <expected>`. A missing tag is a malformed document;
  // a different tag or version raises VersionMismatchError.
  void require_format(std::string_view expected) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_number(double value);

}  // namespace neoburst

#endif  // NEOBURST_KEYVALUE_HPP_
