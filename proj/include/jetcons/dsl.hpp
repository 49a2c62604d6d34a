#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "jetcons/coord.hpp"
#include "jetcons/expr.hpp"

namespace jetcons {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Named sub-expressions available to the parser.
using Macros = std::map<std::string, Expr>;

/// Parses a frame header such as
///   indep t x; dep u h; param c d; unknown F(h,u_x,h_x);
Frame parse_frame(std::string_view text);

/// Adds the declarations of `text` to an existing frame.
void extend_frame(Frame& frame, std::string_view text);

/// Parses an expression. The result keeps the written structure; pass it
/// through normalize() (or any builder) for the canonical form.
Expr parse(std::string_view text, const Frame& frame, const Macros* macros = nullptr);

/// Parses and normalizes.
Expr parse_canonical(std::string_view text, const Frame& frame, const Macros* macros = nullptr);

/// Prints an expression in the DSL; parse(to_string(e)) normalizes to e.
std::string to_string(const Expr& e, const Frame& frame);

}  // namespace jetcons
