#pragma once

// Reader for the TOML subset used by run configurations: [table] and [a.b] headers,
// key = value pairs with strings, integers, floats, booleans and (possibly multi-line)
// arrays of those. Inline tables, arrays of tables and dates are not supported.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cdlab::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> data;

  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_float() const { return std::holds_alternative<double>(data); }
  bool is_number() const { return is_int() || is_float(); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
  std::string type_name() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parsed document as a flat map from dotted key path ("scheme.eta") to value.
struct Document {
  std::map<std::string, Value> entries;
  std::vector<std::string> tables;

  bool contains(const std::string& key) const { return entries.count(key) > 0; }
  const Value* find(const std::string& key) const;
};

Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace cdlab::toml
