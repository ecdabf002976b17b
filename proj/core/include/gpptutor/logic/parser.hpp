#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gpptutor/logic/formula.hpp"

namespace gpptutor::logic {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}

  /// Byte offset into the input where the problem was detected.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar, loosest to tightest binding:
//   iff     := implies ('↔' iff)?
//   implies := or ('→' implies)?
//   or      := and ('∨' and)*
//   and     := unary ('∧' unary)*
//   unary   := '¬' unary | VAR | '(' iff ')'
// ASCII aliases: '^' and, 'v' or, '->' implies, '<->' iff, '~' or '-' not.
Formula ParseFormula(std::string_view text);

enum class Notation { kUnicode, kAscii };

/// Canonical text with the fewest parentheses that parse back to `f`.
std::string FormatFormula(const Formula& f, Notation notation = Notation::kUnicode);

/// Like FormatFormula but wraps binary formulas in parentheses, for inline
/// use inside a sentence ("(G ∧ ¬H), J").
std::string FormatInline(const Formula& f);

std::ostream& operator<<(std::ostream& os, const Formula& f);

}  // namespace gpptutor::logic
