#include "cdlab/toml_lite.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace cdlab::toml {

std::string Value::type_name() const {
  switch (data.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "string";
    default: return "array";
  }
}

const Value* Document::find(const std::string& key) const {
  auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

namespace {

class Cursor {
 public:
  Cursor(const std::string& text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  // Skips spaces and comments but stops at a newline.
  void skip_inline_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '#') {
      while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
    }
  }
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  int line() const { return line_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  std::string bare_key() {
    std::string k;
    while (!done()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        k += get();
      } else {
        break;
      }
    }
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::string key() {
    if (peek() == '"') return basic_string();
    return bare_key();
  }

  std::string dotted_key() {
    std::string k = key();
    skip_inline_ws();
    while (peek() == '.') {
      get();
      skip_inline_ws();
      k += "." + key();
      skip_inline_ws();
    }
    return k;
  }

  std::string basic_string() {
    get();  // opening quote
    std::string out;
    while (true) {
      if (done() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') break;
      if (c == '\\') {
        if (done()) fail("unterminated escape");
        const char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string literal_string() {
    get();
    std::string out;
    while (true) {
      if (done() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  Value value() {
    const char c = peek();
    if (c == '"') return Value{basic_string()};
    if (c == '\'') return Value{literal_string()};
    if (c == '[') return Value{array()};
    std::string tok;
    while (!done()) {
      const char d = peek();
      if (d == ',' || d == ']' || d == '#' || d == '\n' || d == ' ' || d == '\t' || d == '\r') break;
      tok += get();
    }
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};
    return number(tok);
  }

  Value number(std::string tok) {
    std::string clean;
    for (char ch : tok) {
      if (ch != '_') clean += ch;
    }
    const std::string body = (clean[0] == '+' || clean[0] == '-') ? clean.substr(1) : clean;
    const bool neg = clean[0] == '-';
    if (body == "inf") return Value{neg ? -std::numeric_limits<double>::infinity()
                                        : std::numeric_limits<double>::infinity()};
    if (body == "nan") return Value{std::numeric_limits<double>::quiet_NaN()};
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(clean, &used);
        if (used != clean.size()) fail("malformed number '" + tok + "'");
        return Value{v};
      }
      const long long v = std::stoll(clean, &used, 10);
      if (used != clean.size()) fail("malformed number '" + tok + "'");
      return Value{static_cast<std::int64_t>(v)};
    } catch (const std::logic_error&) {
      fail("malformed value '" + tok + "'");
    }
  }

  Array array() {
    get();  // [
    Array out;
    while (true) {
      skip_ws();
      if (done()) fail("unterminated array");
      if (peek() == ']') {
        get();
        return out;
      }
      out.push_back(value());
      skip_ws();
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() == ']') {
        get();
        return out;
      }
      fail("expected ',' or ']' in array");
    }
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

Document parse(const std::string& text) {
  Document doc;
  Cursor cur(text, 1);
  std::string prefix;
  while (true) {
    cur.skip_ws();
    if (cur.done()) break;
    if (cur.peek() == '[') {
      cur.get();
      if (cur.peek() == '[') cur.fail("arrays of tables are not supported");
      cur.skip_inline_ws();
      prefix = cur.dotted_key();
      cur.skip_inline_ws();
      if (cur.peek() != ']') cur.fail("expected ']' after table name");
      cur.get();
      for (const auto& t : doc.tables) {
        if (t == prefix) cur.fail("duplicate table [" + prefix + "]");
      }
      doc.tables.push_back(prefix);
    } else {
      const std::string k = cur.dotted_key();
      const std::string full = prefix.empty() ? k : prefix + "." + k;
      cur.skip_inline_ws();
      if (cur.peek() != '=') cur.fail("expected '=' after key '" + k + "'");
      cur.get();
      cur.skip_inline_ws();
      const int line = cur.line();
      Value v = cur.value();
      if (doc.entries.count(full) > 0) throw ParseError(line, "duplicate key '" + full + "'");
      doc.entries.emplace(full, std::move(v));
    }
    cur.skip_inline_ws();
    if (!cur.done() && cur.peek() != '\n') cur.fail("unexpected trailing characters");
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace cdlab::toml
