#include "twistvan/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "twistvan/error.h"

namespace twistvan {

std::string_view Trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    auto piece = Trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                    : pos - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int64_t ParseInt(std::string_view text, const std::string& context) {
  text = Trim(text);
  int64_t v = 0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    // Accept integral scientific notation such as 1e5.
    double d = 0.0;
    try {
      d = ParseDouble(text, context);
    } catch (const Error&) {
      Fail(ErrorKind::kConfig, context + ": not an integer: '" + std::string(text) + "'");
    }
    if (d != static_cast<double>(static_cast<int64_t>(d)))
      Fail(ErrorKind::kConfig, context + ": not an integer: '" + std::string(text) + "'");
    return static_cast<int64_t>(d);
  }
  return v;
}

double ParseDouble(std::string_view text, const std::string& context) {
  std::string s(Trim(text));
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    Fail(ErrorKind::kConfig, context + ": not a number: '" + s + "'");
  return v;
}

KeyValueFile KeyValueFile::Parse(std::string_view text, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    std::string_view body = Trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      Fail(ErrorKind::kConfig, origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key(Trim(body.substr(0, eq)));
    std::string value(Trim(body.substr(eq + 1)));
    if (key.empty())
      Fail(ErrorKind::kConfig, origin + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.values_.emplace(key, value).second)
      Fail(ErrorKind::kConfig, origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                   key + "'");
  }
  return kv;
}

KeyValueFile KeyValueFile::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str(), path);
}

const std::string& KeyValueFile::Get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) Fail(ErrorKind::kConfig, origin_ + ": missing key '" + key + "'");
  return it->second;
}

std::string KeyValueFile::GetOr(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int64_t KeyValueFile::GetInt(const std::string& key) const {
  return ParseInt(Get(key), origin_ + ": " + key);
}

double KeyValueFile::GetDouble(const std::string& key) const {
  return ParseDouble(Get(key), origin_ + ": " + key);
}

std::vector<int64_t> KeyValueFile::GetIntList(const std::string& key) const {
  std::vector<int64_t> out;
  for (const auto& piece : Split(Get(key), ',')) out.push_back(ParseInt(piece, origin_ + ": " + key));
  return out;
}

std::vector<std::string> KeyValueFile::GetList(const std::string& key) const {
  return Split(Get(key), ',');
}

}  // namespace twistvan
