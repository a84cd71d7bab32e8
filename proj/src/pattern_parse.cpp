#include <cctype>
#include <string>

#include "rulegraph/error.hpp"
#include "rulegraph/pattern.hpp"

namespace rulegraph {
namespace {

constexpr std::string_view kMeta = "\\.^$|?*+()[]{}";

class Parser {
 public:
  explicit Parser(std::string_view t) : t_(t) {}

  Pattern run() {
    std::vector<RegexUnit> units;
    while (!eof()) units.push_back(unit());
    return Pattern::from_units(std::move(units));
  }

 private:
  std::string_view t_;
  std::size_t i_ = 0;

  bool eof() const { return i_ >= t_.size(); }
  char peek() const { return t_[i_]; }
  bool accept(std::string_view s) {
    if (t_.substr(i_, s.size()) == s) {
      i_ += s.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("regex '" + std::string(t_) + "' at offset " + std::to_string(i_) + ": " + why);
  }

  RegexUnit unit() {
    if (accept("(?:")) return group();
    if (peek() == '[') {
      RepeatClass rc = class_repeat();
      return rc;
    }
    std::string c = literal_char();
    bool opt = accept("?");
    return LiteralUnion{{c}, opt};
  }

  RegexUnit group() {
    if (!eof() && peek() == '[') {
      RepeatClass rc = class_repeat();
      if (!accept(")")) fail("expected ')' after class in group");
      if (accept("?")) rc.optional = true;
      return rc;
    }
    LiteralUnion lu;
    std::string cur;
    while (true) {
      if (eof()) fail("unterminated group");
      if (accept(")")) break;
      if (accept("|")) {
        lu.strings.push_back(std::move(cur));
        cur.clear();
        continue;
      }
      cur += literal_char();
    }
    lu.strings.push_back(std::move(cur));
    if (accept("?")) lu.optional = true;
    return lu;
  }

  RepeatClass class_repeat() {
    const std::size_t close = t_.find(']', i_ + 1);
    if (close == std::string_view::npos) fail("unterminated class");
    const std::string_view body = t_.substr(i_, close - i_ + 1);
    std::optional<CharClassId> cls;
    for (CharClassId id : all_char_classes())
      if (class_bracket(id) == body) cls = id;
    if (!cls) fail("class " + std::string(body) + " is not in the inventory");
    i_ = close + 1;
    RepeatClass rc;
    rc.cls = *cls;
    if (accept("{")) {
      rc.min = number();
      rc.max = rc.min;
      if (accept(",")) {
        if (!eof() && peek() == '}') fail("unbounded repeat");
        rc.max = number();
      }
      if (!accept("}")) fail("expected '}'");
      if (rc.min > rc.max) fail("repeat minimum exceeds maximum");
    } else if (accept("?")) {
      rc.optional = true;
    }
    if (!eof() && (peek() == '*' || peek() == '+' || peek() == '?' || peek() == '{')) fail("unsupported quantifier");
    return rc;
  }

  std::uint32_t number() {
    const std::size_t start = i_;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    if (start == i_ || i_ - start > 6) fail("expected a repeat bound");
    return static_cast<std::uint32_t>(std::stoul(std::string(t_.substr(start, i_ - start))));
  }

  std::string literal_char() {
    if (eof()) fail("unexpected end");
    const char c = peek();
    if (c == '\\') {
      ++i_;
      if (eof()) fail("dangling escape");
      const char e = peek();
      if (kMeta.find(e) != std::string_view::npos) {
        ++i_;
        return std::string(1, e);
      }
      if (e == 'x' && i_ + 2 < t_.size() + 0 && std::isxdigit(static_cast<unsigned char>(t_[i_ + 1])) &&
          std::isxdigit(static_cast<unsigned char>(t_[i_ + 2]))) {
        const auto v = std::stoul(std::string(t_.substr(i_ + 1, 2)), nullptr, 16);
        i_ += 3;
        return std::string(1, static_cast<char>(v));
      }
      fail(std::string("unsupported escape \\") + e);
    }
    if (kMeta.find(c) != std::string_view::npos) fail(std::string("unsupported operator '") + c + "'");
    ++i_;
    return std::string(1, c);
  }
};

}  // namespace

Pattern parse(std::string_view text) { return Parser(text).run(); }

}  // namespace rulegraph
