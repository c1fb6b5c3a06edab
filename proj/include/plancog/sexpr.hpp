#ifndef PLANCOG_SEXPR_HPP
#define PLANCOG_SEXPR_HPP

// Minimal s-expression reader shared by the PDDL, observation and plan
// formats. Atoms are case-folded to lower case; ';' starts a line comment.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "plancog/error.hpp"

namespace plancog {

struct Sexpr {
  bool is_list = false;
  std::string atom;
  std::vector<Sexpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view text) const { return !is_list && atom == text; }

  /// Head symbol of a list, or "" when empty / not a list / head is a list.
  const std::string &head() const {
    static const std::string empty;
    if (!is_list || items.empty() || items.front().is_list) return empty;
    return items.front().atom;
  }

  std::string to_string() const {
    if (!is_list) return atom;
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ' ';
      out += items[i].to_string();
    }
    return out + ')';
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what, line, column);
  }
};

namespace detail {

class SexprReader {
 public:
  explicit SexprReader(std::string_view text) : text_(text) {}

  std::vector<Sexpr> read_all() {
    std::vector<Sexpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  Sexpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    Sexpr node;
    node.line = line_;
    node.column = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unbalanced ')'", line_, col_);
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size())
          throw ParseError("unbalanced '(' opened", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')
        break;
      node.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      advance();
    }
    return node;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail

inline std::vector<Sexpr> parse_sexprs(std::string_view text) {
  return detail::SexprReader(text).read_all();
}

}  // namespace plancog

#endif  // PLANCOG_SEXPR_HPP
