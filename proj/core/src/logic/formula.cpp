#include "gpptutor/logic/formula.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gpptutor::logic {

namespace {

std::uint32_t Bit(char variable) {
  if (variable < 'A' || variable > 'Z') {
    throw std::invalid_argument(std::string("variable must be an uppercase letter, got '") + variable + "'");
  }
  return 1u << static_cast<unsigned>(variable - 'A');
}

std::size_t Mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

void Assignment::Set(char variable, bool value) {
  const std::uint32_t bit = Bit(variable);
  defined_ |= bit;
  values_ = value ? (values_ | bit) : (values_ & ~bit);
}

std::optional<bool> Assignment::Get(char variable) const {
  const std::uint32_t bit = Bit(variable);
  if ((defined_ & bit) == 0) return std::nullopt;
  return (values_ & bit) != 0;
}

Assignment Assignment::FromRow(std::uint32_t mask, std::uint64_t row) {
  Assignment a;
  a.defined_ = mask;
  int k = 0;
  for (int i = 0; i < 26; ++i) {
    const std::uint32_t bit = 1u << i;
    if ((mask & bit) == 0) continue;
    if ((row >> k) & 1u) a.values_ |= bit;
    ++k;
  }
  return a;
}

struct Formula::Node {
  Kind kind;
  char name = 0;
  Connective op = Connective::kAnd;
  std::optional<Formula> first;
  std::optional<Formula> second;
  std::size_t depth = 0;
  std::size_t size = 1;
  std::uint32_t vars = 0;
  std::size_t hash = 0;
};

Formula Formula::Variable(char name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kVariable;
  node->name = name;
  node->vars = Bit(name);
  node->hash = Mix(0x51ed27, static_cast<std::size_t>(name));
  return Formula(std::move(node));
}

Formula Formula::Not(Formula operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kNegation;
  node->depth = operand.depth() + 1;
  node->size = operand.size() + 1;
  node->vars = operand.variables();
  node->hash = Mix(0x7a3c11, operand.hash());
  node->first = std::move(operand);
  return Formula(std::move(node));
}

Formula Formula::Binary(Connective op, Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kBinary;
  node->op = op;
  node->depth = std::max(lhs.depth(), rhs.depth()) + 1;
  node->size = lhs.size() + rhs.size() + 1;
  node->vars = lhs.variables() | rhs.variables();
  node->hash = Mix(Mix(Mix(0x2b9f44, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  node->first = std::move(lhs);
  node->second = std::move(rhs);
  return Formula(std::move(node));
}

Formula::Kind Formula::kind() const { return node_->kind; }

char Formula::name() const {
  if (node_->kind != Kind::kVariable) throw std::logic_error("Formula::name on non-variable");
  return node_->name;
}

Connective Formula::connective() const {
  if (node_->kind != Kind::kBinary) throw std::logic_error("Formula::connective on non-binary");
  return node_->op;
}

const Formula& Formula::operand() const {
  if (node_->kind != Kind::kNegation) throw std::logic_error("Formula::operand on non-negation");
  return *node_->first;
}

const Formula& Formula::lhs() const {
  if (node_->kind != Kind::kBinary) throw std::logic_error("Formula::lhs on non-binary");
  return *node_->first;
}

const Formula& Formula::rhs() const {
  if (node_->kind != Kind::kBinary) throw std::logic_error("Formula::rhs on non-binary");
  return *node_->second;
}

std::size_t Formula::depth() const { return node_->depth; }
std::size_t Formula::size() const { return node_->size; }
std::uint32_t Formula::variables() const { return node_->vars; }
std::size_t Formula::hash() const { return node_->hash; }

bool Formula::Evaluate(const Assignment& assignment) const {
  if (!assignment.Covers(node_->vars)) {
    throw std::invalid_argument("assignment does not cover every variable of the formula");
  }
  // Recursion depth is bounded by formula depth; formulas here are small.
  struct Eval {
    std::uint32_t values;
    bool operator()(const Formula& f) const {
      switch (f.kind()) {
        case Kind::kVariable:
          return (values >> (f.name() - 'A')) & 1u;
        case Kind::kNegation:
          return !(*this)(f.operand());
        case Kind::kBinary: {
          const bool l = (*this)(f.lhs());
          switch (f.connective()) {
            case Connective::kAnd: return l && (*this)(f.rhs());
            case Connective::kOr: return l || (*this)(f.rhs());
            case Connective::kImplies: return !l || (*this)(f.rhs());
            case Connective::kIff: return l == (*this)(f.rhs());
          }
        }
      }
      return false;
    }
  };
  return Eval{assignment.value_mask()}(*this);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Formula::Kind::kVariable:
      return a.name() == b.name();
    case Formula::Kind::kNegation:
      return a.operand() == b.operand();
    case Formula::Kind::kBinary:
      return a.connective() == b.connective() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Formula::Kind::kVariable:
      return a.name() <=> b.name();
    case Formula::Kind::kNegation:
      return a.operand() <=> b.operand();
    case Formula::Kind::kBinary:
      if (auto c = a.connective() <=> b.connective(); c != 0) return c;
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
  }
  return std::strong_ordering::equal;
}

int Precedence(Connective op) {
  switch (op) {
    case Connective::kAnd: return 4;
    case Connective::kOr: return 3;
    case Connective::kImplies: return 2;
    case Connective::kIff: return 1;
  }
  return 0;
}

bool IsRightAssociative(Connective op) { return op == Connective::kImplies || op == Connective::kIff; }

}  // namespace gpptutor::logic
