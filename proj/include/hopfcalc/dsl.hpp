#pragma once

// Surface syntax for Sweedler-notation expressions.
//
//   t(1) * S(t(2))                    Sweedler legs, antipode, algebra product
//   phi(r*t)                          functional application (dual pairing)
//   delta .> (sigma*r*sigma^-1) <. delta   convolution hits
//   act(f(2) * Sinv(g0(1)), a0)       module action
//   a(0), a(1)                        coaction legs of a module variable
//   Fhat(...)                         named linear maps bound in the environment
//   lhs @ rhs                         tensor-position separator
//
// Hits bind tighter than products, matching the convention that a displayed
// hit applies to the adjacent factor only.  Products are written with `*` or
// by juxtaposition.  `^k` / `^-k` takes powers of invertible constants.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hopfcalc/quantum_group.hpp"

namespace hopfcalc::dsl {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)), line(line), col(col) {}
  int line, col;
};

struct Tag {
  enum Kind { kH, kHhat, kModule } kind = kH;
  std::string module;  // set when kind == kModule

  static Tag H() { return {kH, ""}; }
  static Tag Hhat() { return {kHhat, ""}; }
  static Tag Module(std::string name) { return {kModule, std::move(name)}; }
  bool operator==(const Tag& o) const { return kind == o.kind && module == o.module; }
  bool operator!=(const Tag& o) const { return !(*this == o); }
  std::string str() const { return kind == kH ? "H" : kind == kHhat ? "H^" : module; }
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  enum Kind {
    kNum,      // rational literal
    kAtom,     // variable or constant, with optional Sweedler/coaction leg
    kPow,      // constant power
    kNeg,
    kAdd,
    kSub,
    kMul,      // algebra product or scalar multiple
    kHitL,     // a .> w
    kHitR,     // w <. a
    kApply,    // name(arg): antipode / bound map / functional application
    kPair,     // pair(f, t)
    kAct,      // act(x, a)
  };
  Kind kind;
  Rat num;                  // kNum
  std::string name;         // kAtom, kApply
  std::optional<int> leg;   // kAtom
  int power = 1;            // kPow
  ExprPtr a, b;
  int line = 0, col = 0;
};

inline ExprPtr make_expr(Expr::Kind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

// Top-level parse result: one expression per tensor position.
struct PositionedExpr {
  std::vector<ExprPtr> positions;
};

namespace detail {

struct Token {
  enum Kind { kIdent, kNumber, kStar, kPlus, kMinus, kLParen, kRParen, kComma, kAt, kCaret, kHitL, kHitR, kEq, kEnd };
  Kind kind;
  std::string text;
  Rat value;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }
  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_, ++col_;
        continue;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++col_;
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::kEnd;
      return;
    }
    char c = src_[pos_];
    auto two = [&](char a, char b) { return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b; };
    if (two('.', '>')) {
      tok_ = {Token::kHitL, ".>", Rat(0), line_, col_};
      pos_ += 2;
      col_ += 2;
      return;
    }
    if (two('<', '.')) {
      tok_ = {Token::kHitR, "<.", Rat(0), line_, col_};
      pos_ += 2;
      col_ += 2;
      return;
    }
    if (two('=', '=')) {
      tok_ = {Token::kEq, "==", Rat(0), line_, col_};
      pos_ += 2;
      col_ += 2;
      return;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++col_;
      std::string text = src_.substr(start, pos_ - start);
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        ++pos_;
        ++col_;
        size_t dstart = pos_;
        while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++col_;
        text += "/" + src_.substr(dstart, pos_ - dstart);
      }
      tok_ = {Token::kNumber, text, rat_parse(text), line_, col_};
      return;
    }
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_, ++col_;
      tok_ = {Token::kIdent, src_.substr(start, pos_ - start), Rat(0), line_, col_};
      return;
    }
    Token::Kind k;
    switch (c) {
      case '*': k = Token::kStar; break;
      case '+': k = Token::kPlus; break;
      case '-': k = Token::kMinus; break;
      case '(': k = Token::kLParen; break;
      case ')': k = Token::kRParen; break;
      case ',': k = Token::kComma; break;
      case '@': k = Token::kAt; break;
      case '^': k = Token::kCaret; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    tok_ = {k, std::string(1, c), Rat(0), line_, col_};
    ++pos_;
    ++col_;
  }

  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  PositionedExpr parse_positions() {
    PositionedExpr pe;
    pe.positions.push_back(parse_sum());
    while (lex_.peek().kind == Token::kAt) {
      lex_.next();
      pe.positions.push_back(parse_sum());
    }
    expect(Token::kEnd, "end of expression");
    return pe;
  }

  std::pair<PositionedExpr, PositionedExpr> parse_identity() {
    PositionedExpr lhs;
    lhs.positions.push_back(parse_sum());
    while (lex_.peek().kind == Token::kAt) {
      lex_.next();
      lhs.positions.push_back(parse_sum());
    }
    expect(Token::kEq, "'=='");
    PositionedExpr rhs;
    rhs.positions.push_back(parse_sum());
    while (lex_.peek().kind == Token::kAt) {
      lex_.next();
      rhs.positions.push_back(parse_sum());
    }
    expect(Token::kEnd, "end of identity");
    return {lhs, rhs};
  }

 private:
  Token expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k)
      throw ParseError("expected " + what + ", got '" + lex_.peek().text + "'", lex_.peek().line, lex_.peek().col);
    return lex_.next();
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_term();
    while (lex_.peek().kind == Token::kPlus || lex_.peek().kind == Token::kMinus) {
      bool plus = lex_.next().kind == Token::kPlus;
      ExprPtr r = parse_term();
      ExprPtr n = make_expr(plus ? Expr::kAdd : Expr::kSub);
      n->a = e;
      n->b = r;
      e = n;
    }
    return e;
  }

  ExprPtr parse_term() {
    if (lex_.peek().kind == Token::kMinus) {
      Token t = lex_.next();
      ExprPtr n = make_expr(Expr::kNeg);
      n->a = parse_term();
      n->line = t.line;
      n->col = t.col;
      return n;
    }
    return parse_product();
  }

  bool starts_factor(const Token& t) const {
    return t.kind == Token::kIdent || t.kind == Token::kNumber || t.kind == Token::kLParen;
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_hit();
    while (true) {
      if (lex_.peek().kind == Token::kStar) {
        lex_.next();
      } else if (!starts_factor(lex_.peek())) {
        break;
      }
      ExprPtr r = parse_hit();
      ExprPtr n = make_expr(Expr::kMul);
      n->a = e;
      n->b = r;
      e = n;
    }
    return e;
  }

  ExprPtr parse_hit() {
    ExprPtr e = parse_power();
    while (lex_.peek().kind == Token::kHitL || lex_.peek().kind == Token::kHitR) {
      bool left = lex_.next().kind == Token::kHitL;
      ExprPtr r = parse_power();
      ExprPtr n = make_expr(left ? Expr::kHitL : Expr::kHitR);
      n->a = e;
      n->b = r;
      e = n;
    }
    return e;
  }

  ExprPtr parse_power() {
    ExprPtr e = parse_factor();
    if (lex_.peek().kind == Token::kCaret) {
      Token c = lex_.next();
      int sign = 1;
      if (lex_.peek().kind == Token::kMinus) {
        lex_.next();
        sign = -1;
      }
      Token num = expect(Token::kNumber, "integer exponent");
      if (num.value.get_den() != 1) throw ParseError("exponent must be an integer", num.line, num.col);
      ExprPtr n = make_expr(Expr::kPow);
      n->a = e;
      n->power = sign * static_cast<int>(num.value.get_num().get_si());
      n->line = c.line;
      n->col = c.col;
      e = n;
    }
    return e;
  }

  ExprPtr parse_factor() {
    Token t = lex_.peek();
    if (t.kind == Token::kNumber) {
      lex_.next();
      ExprPtr n = make_expr(Expr::kNum);
      n->num = t.value;
      n->line = t.line;
      n->col = t.col;
      return n;
    }
    if (t.kind == Token::kLParen) {
      lex_.next();
      ExprPtr e = parse_sum();
      expect(Token::kRParen, "')'");
      return e;
    }
    if (t.kind != Token::kIdent)
      throw ParseError("expected a factor, got '" + t.text + "'", t.line, t.col);
    lex_.next();

    if (t.text == "act" || t.text == "pair") {
      expect(Token::kLParen, "'('");
      ExprPtr x = parse_sum();
      expect(Token::kComma, "','");
      ExprPtr y = parse_sum();
      expect(Token::kRParen, "')'");
      ExprPtr n = make_expr(t.text == "act" ? Expr::kAct : Expr::kPair);
      n->a = x;
      n->b = y;
      n->line = t.line;
      n->col = t.col;
      return n;
    }

    if (lex_.peek().kind == Token::kLParen) {
      lex_.next();
      // IDENT "(" INT ")" is a Sweedler/coaction leg; otherwise an application.
      if (lex_.peek().kind == Token::kNumber) {
        Token num = lex_.next();
        if (lex_.peek().kind == Token::kRParen && num.value.get_den() == 1) {
          lex_.next();
          ExprPtr n = make_expr(Expr::kAtom);
          n->name = t.text;
          n->leg = static_cast<int>(num.value.get_num().get_si());
          n->line = t.line;
          n->col = t.col;
          return n;
        }
        throw ParseError("expected ')' after Sweedler leg", lex_.peek().line, lex_.peek().col);
      }
      ExprPtr arg = parse_sum();
      expect(Token::kRParen, "')'");
      ExprPtr n = make_expr(Expr::kApply);
      n->name = t.text;
      n->a = arg;
      n->line = t.line;
      n->col = t.col;
      return n;
    }

    ExprPtr n = make_expr(Expr::kAtom);
    n->name = t.text;
    n->line = t.line;
    n->col = t.col;
    return n;
  }

  Lexer lex_;
};

}  // namespace detail

inline PositionedExpr parse(const std::string& src) { return detail::Parser(src).parse_positions(); }

inline std::pair<PositionedExpr, PositionedExpr> parse_identity(const std::string& src) {
  return detail::Parser(src).parse_identity();
}

// Prints the AST back to surface syntax (round-trip form, fully parenthesized
// only where needed).
inline std::string print_expr(const ExprPtr& e) {
  auto paren = [](const std::string& s, bool need) { return need ? "(" + s + ")" : s; };
  switch (e->kind) {
    case Expr::kNum: return rat_str(e->num);
    case Expr::kAtom: return e->leg ? e->name + "(" + std::to_string(*e->leg) + ")" : e->name;
    case Expr::kPow: {
      std::string b = print_expr(e->a);
      return b + "^" + std::to_string(e->power);
    }
    case Expr::kNeg: return "-" + paren(print_expr(e->a), e->a->kind == Expr::kAdd || e->a->kind == Expr::kSub);
    case Expr::kAdd: return print_expr(e->a) + " + " + print_expr(e->b);
    case Expr::kSub: {
      bool need = e->b->kind == Expr::kAdd || e->b->kind == Expr::kSub;
      return print_expr(e->a) + " - " + paren(print_expr(e->b), need);
    }
    case Expr::kMul: {
      auto wrap = [&](const ExprPtr& x) {
        bool need = x->kind == Expr::kAdd || x->kind == Expr::kSub || x->kind == Expr::kNeg ||
                    x->kind == Expr::kHitL || x->kind == Expr::kHitR;
        return paren(print_expr(x), need);
      };
      return wrap(e->a) + " * " + wrap(e->b);
    }
    case Expr::kHitL:
    case Expr::kHitR: {
      auto wrap = [&](const ExprPtr& x) {
        bool need = x->kind != Expr::kAtom && x->kind != Expr::kApply && x->kind != Expr::kNum && x->kind != Expr::kPow;
        return paren(print_expr(x), need);
      };
      return wrap(e->a) + (e->kind == Expr::kHitL ? " .> " : " <. ") + wrap(e->b);
    }
    case Expr::kApply: return e->name + "(" + print_expr(e->a) + ")";
    case Expr::kPair: return "pair(" + print_expr(e->a) + ", " + print_expr(e->b) + ")";
    case Expr::kAct: return "act(" + print_expr(e->a) + ", " + print_expr(e->b) + ")";
  }
  return "?";
}

inline std::string print_positions(const PositionedExpr& pe) {
  std::string s;
  for (size_t i = 0; i < pe.positions.size(); ++i) {
    if (i) s += " @ ";
    s += print_expr(pe.positions[i]);
  }
  return s;
}

}  // namespace hopfcalc::dsl
