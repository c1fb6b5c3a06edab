#ifndef PLANCOG_ERROR_HPP
#define PLANCOG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace plancog {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed text input. line/column are 1-based; 0 means unknown.
struct ParseError : Error {
  ParseError(const std::string &what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column)
                   : what),
        line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

/// Well-formed input that refers to something undeclared or mistyped.
struct SemanticError : Error {
  using Error::Error;
};

/// An action was applied in a state missing some of its preconditions.
struct PreconditionError : Error {
  PreconditionError(const std::string &what, std::size_t step,
                    std::vector<std::string> missing)
      : Error(what), step(step), missing(std::move(missing)) {}
  std::size_t step;  // 1-based plan index, 0 for a bare apply()
  std::vector<std::string> missing;
};

}  // namespace plancog

#endif  // PLANCOG_ERROR_HPP
