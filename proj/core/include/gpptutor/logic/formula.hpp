#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace gpptutor::logic {

enum class Connective : std::uint8_t { kAnd, kOr, kImplies, kIff };

/// Total assignment of truth values to the variables A-Z.
class Assignment {
 public:
  Assignment() = default;

  void Set(char variable, bool value);
  std::optional<bool> Get(char variable) const;
  /// True when every variable in `mask` (bit i = letter 'A' + i) has a value.
  bool Covers(std::uint32_t mask) const { return (defined_ & mask) == mask; }

  /// Builds the assignment where the k-th variable of `mask` (in A-Z order)
  /// takes bit k of `row`.
  static Assignment FromRow(std::uint32_t mask, std::uint64_t row);

  std::uint32_t defined_mask() const { return defined_; }
  std::uint32_t value_mask() const { return values_; }

 private:
  std::uint32_t defined_ = 0;
  std::uint32_t values_ = 0;
};

/// Immutable propositional formula over single-letter variables.
///
/// Copies share structure. Equality is structural; the ordering is a total
/// canonical order (variables < negations < binaries, then by letter,
/// connective and children) used wherever results must not depend on
/// insertion order.
class Formula {
 public:
  enum class Kind : std::uint8_t { kVariable, kNegation, kBinary };

  static Formula Variable(char name);
  static Formula Not(Formula operand);
  static Formula Binary(Connective op, Formula lhs, Formula rhs);
  static Formula And(Formula lhs, Formula rhs) { return Binary(Connective::kAnd, std::move(lhs), std::move(rhs)); }
  static Formula Or(Formula lhs, Formula rhs) { return Binary(Connective::kOr, std::move(lhs), std::move(rhs)); }
  static Formula Implies(Formula lhs, Formula rhs) { return Binary(Connective::kImplies, std::move(lhs), std::move(rhs)); }
  static Formula Iff(Formula lhs, Formula rhs) { return Binary(Connective::kIff, std::move(lhs), std::move(rhs)); }

  Kind kind() const;
  bool is_variable() const { return kind() == Kind::kVariable; }
  bool is_negation() const { return kind() == Kind::kNegation; }
  bool is_binary() const { return kind() == Kind::kBinary; }
  bool is(Connective op) const { return is_binary() && connective() == op; }

  // Accessors below require the matching kind.
  char name() const;
  Connective connective() const;
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  std::size_t depth() const;
  std::size_t size() const;
  /// Bit i set when variable 'A' + i occurs.
  std::uint32_t variables() const;
  std::size_t hash() const;

  /// Throws std::invalid_argument when the assignment misses a variable.
  bool Evaluate(const Assignment& assignment) const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

int Precedence(Connective op);
bool IsRightAssociative(Connective op);

}  // namespace gpptutor::logic

template <>
struct std::hash<gpptutor::logic::Formula> {
  std::size_t operator()(const gpptutor::logic::Formula& f) const noexcept { return f.hash(); }
};
