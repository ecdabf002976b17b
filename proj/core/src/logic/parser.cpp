#include "gpptutor/logic/parser.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace gpptutor::logic {

namespace {

enum class TokenType { kVariable, kNot, kAnd, kOr, kImplies, kIff, kLParen, kRParen, kEnd };

struct Token {
  TokenType type;
  std::size_t position;
  char name = 0;
};

struct Spelling {
  std::string_view text;
  TokenType type;
};

// Longest spellings first so "<->" wins over "-" and "->".
constexpr Spelling kSpellings[] = {
    {"<->", TokenType::kIff},      {"->", TokenType::kImplies},   {"\xE2\x86\x94", TokenType::kIff},
    {"\xE2\x86\x92", TokenType::kImplies}, {"\xE2\x88\xA7", TokenType::kAnd}, {"\xE2\x88\xA8", TokenType::kOr},
    {"\xC2\xAC", TokenType::kNot}, {"\xE2\x88\x92", TokenType::kNot}, {"^", TokenType::kAnd},
    {"v", TokenType::kOr},         {"~", TokenType::kNot},        {"-", TokenType::kNot},
    {"(", TokenType::kLParen},     {")", TokenType::kRParen},
};

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c >= 'A' && c <= 'Z') {
      tokens.push_back({TokenType::kVariable, i, c});
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& s : kSpellings) {
      if (text.substr(i, s.text.size()) == s.text) {
        tokens.push_back({s.type, i});
        i += s.text.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      // Report the whole UTF-8 sequence when the byte starts one.
      std::size_t len = 1;
      const auto b = static_cast<unsigned char>(c);
      if (b >= 0xF0) len = 4;
      else if (b >= 0xE0) len = 3;
      else if (b >= 0xC0) len = 2;
      throw ParseError("unknown token '" + std::string(text.substr(i, len)) + "'", i);
    }
  }
  tokens.push_back({TokenType::kEnd, text.size()});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula ParseAll() {
    if (Peek().type == TokenType::kEnd) throw ParseError("empty input", Peek().position);
    Formula f = ParseIff();
    if (Peek().type != TokenType::kEnd) {
      if (Peek().type == TokenType::kRParen) throw ParseError("unbalanced ')'", Peek().position);
      throw ParseError("unexpected token", Peek().position);
    }
    return f;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() { return tokens_[pos_++]; }

  Formula ParseIff() {
    Formula lhs = ParseImplies();
    if (Peek().type == TokenType::kIff) {
      Next();
      return Formula::Iff(std::move(lhs), ParseIff());
    }
    return lhs;
  }

  Formula ParseImplies() {
    Formula lhs = ParseOr();
    if (Peek().type == TokenType::kImplies) {
      Next();
      return Formula::Implies(std::move(lhs), ParseImplies());
    }
    return lhs;
  }

  Formula ParseOr() {
    Formula lhs = ParseAnd();
    while (Peek().type == TokenType::kOr) {
      Next();
      lhs = Formula::Or(std::move(lhs), ParseAnd());
    }
    return lhs;
  }

  Formula ParseAnd() {
    Formula lhs = ParseUnary();
    while (Peek().type == TokenType::kAnd) {
      Next();
      lhs = Formula::And(std::move(lhs), ParseUnary());
    }
    return lhs;
  }

  Formula ParseUnary() {
    const Token& t = Next();
    switch (t.type) {
      case TokenType::kNot:
        return Formula::Not(ParseUnary());
      case TokenType::kVariable:
        return Formula::Variable(t.name);
      case TokenType::kLParen: {
        Formula inner = ParseIff();
        if (Peek().type != TokenType::kRParen) throw ParseError("unbalanced '(': expected ')'", Peek().position);
        Next();
        return inner;
      }
      case TokenType::kEnd:
        throw ParseError("unexpected end of input", t.position);
      case TokenType::kRParen:
        throw ParseError("unbalanced ')'", t.position);
      default:
        throw ParseError("expected a variable, '¬' or '('", t.position);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string_view Symbol(Connective op, Notation notation) {
  const bool ascii = notation == Notation::kAscii;
  switch (op) {
    case Connective::kAnd: return ascii ? "^" : "\xE2\x88\xA7";
    case Connective::kOr: return ascii ? "v" : "\xE2\x88\xA8";
    case Connective::kImplies: return ascii ? "->" : "\xE2\x86\x92";
    case Connective::kIff: return ascii ? "<->" : "\xE2\x86\x94";
  }
  return "?";
}

void Format(const Formula& f, Notation notation, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::kVariable:
      out.push_back(f.name());
      return;
    case Formula::Kind::kNegation: {
      out += notation == Notation::kAscii ? "~" : "\xC2\xAC";
      const bool wrap = f.operand().is_binary();
      if (wrap) out.push_back('(');
      Format(f.operand(), notation, out);
      if (wrap) out.push_back(')');
      return;
    }
    case Formula::Kind::kBinary: {
      const Connective op = f.connective();
      const int prec = Precedence(op);
      const bool right = IsRightAssociative(op);
      auto child = [&](const Formula& c, bool is_left) {
        bool wrap = false;
        if (c.is_binary()) {
          const int cp = Precedence(c.connective());
          wrap = cp < prec || (cp == prec && (is_left ? right : !right));
        }
        if (wrap) out.push_back('(');
        Format(c, notation, out);
        if (wrap) out.push_back(')');
      };
      child(f.lhs(), true);
      out.push_back(' ');
      out += Symbol(op, notation);
      out.push_back(' ');
      child(f.rhs(), false);
      return;
    }
  }
}

}  // namespace

Formula ParseFormula(std::string_view text) { return Parser(Tokenize(text)).ParseAll(); }

std::string FormatFormula(const Formula& f, Notation notation) {
  std::string out;
  Format(f, notation, out);
  return out;
}

std::string FormatInline(const Formula& f) {
  std::string s = FormatFormula(f);
  return f.is_binary() ? "(" + s + ")" : s;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << FormatFormula(f); }

}  // namespace gpptutor::logic
