#ifndef TWISTVAN_CONFIG_H_
#define TWISTVAN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace twistvan {

// Plain-text `key = value` file. '#' starts a comment; blank lines ignored.
// Keys are unique; a repeated key is a config error.
class KeyValueFile {
 public:
  static KeyValueFile Parse(std::string_view text, const std::string& origin);
  static KeyValueFile Load(const std::string& path);

  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& Get(const std::string& key) const;
  std::string GetOr(const std::string& key, const std::string& fallback) const;
  int64_t GetInt(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  std::vector<int64_t> GetIntList(const std::string& key) const;
  std::vector<std::string> GetList(const std::string& key) const;

  const std::string& origin() const { return origin_; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

int64_t ParseInt(std::string_view text, const std::string& context);
double ParseDouble(std::string_view text, const std::string& context);
std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

}  // namespace twistvan

#endif  // TWISTVAN_CONFIG_H_
