#include <cctype>

#include "nahmlab/products.hpp"

namespace nahmlab {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Registry& reg) : s_(text), reg_(reg) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) fail(std::string("unexpected end of input, expected '") + c + "'");
    if (s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  static ExprPtr node(Expr::Kind k, std::vector<ExprPtr> args, std::size_t col) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->args = std::move(args);
    e->column = col;
    return e;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      std::size_t at = pos_;
      if (accept('+'))
        lhs = node(Expr::Kind::Add, {lhs, term()}, at);
      else if (accept('-'))
        lhs = node(Expr::Kind::Sub, {lhs, term()}, at);
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      std::size_t at = pos_;
      if (accept('*'))
        lhs = node(Expr::Kind::Mul, {lhs, unary()}, at);
      else if (accept('/'))
        lhs = node(Expr::Kind::Div, {lhs, unary()}, at);
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    std::size_t at = pos_;
    if (accept('-')) return node(Expr::Kind::Neg, {unary()}, at);
    if (accept('+')) return unary();
    return factor();
  }

  ExprPtr factor() {
    ExprPtr base = primary();
    std::size_t at = pos_;
    if (accept('^')) {
      skip();
      bool neg = false;
      if (accept('-'))
        neg = true;
      else
        accept('+');
      std::int64_t n = integer();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Pow;
      e->power = neg ? -n : n;
      e->args = {base};
      e->column = at;
      return e;
    }
    return base;
  }

  std::int64_t integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) {
      if (pos_ >= s_.size()) fail("unexpected end of input, expected an integer");
      fail("expected an integer");
    }
    if (pos_ - start > 15) fail_at("integer too large", start);
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }

  std::int64_t signed_integer() {
    skip();
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    std::int64_t n = integer();
    return neg ? -n : n;
  }

  // [sign] digits [/ digits]
  Rational rational() {
    skip();
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    std::int64_t num = integer();
    std::int64_t den = 1;
    std::size_t save = pos_;
    if (accept('/')) {
      skip();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        den = integer();
        if (den == 0) fail("zero denominator");
      } else {
        pos_ = save;
      }
    }
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  ExprPtr atom_node(ProductAtom a, std::size_t at) {
    try {
      validate_atom(a);
    } catch (const DomainError& e) {
      fail_at(std::string("parameter error: ") + e.what(), at);
    }
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Atom;
    e->atom = std::move(a);
    e->column = at;
    return e;
  }

  ExprPtr primary() {
    skip();
    std::size_t at = pos_;
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Number;
      e->number = rational();
      e->column = at;
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') fail(std::string("unexpected '") + c + "'");
    std::string id = identifier();
    if (id == "J") {
      expect('(');
      std::int64_t m = signed_integer();
      expect(')');
      return atom_node(JAtom{m}, at);
    }
    if (id == "Jam") {
      expect('(');
      std::int64_t a = signed_integer();
      expect(',');
      std::int64_t m = signed_integer();
      expect(')');
      return atom_node(JamAtom{a, m}, at);
    }
    if (id == "P") {
      expect('(');
      skip();
      int sign;
      if (accept('+'))
        sign = 1;
      else if (accept('-'))
        sign = -1;
      else
        fail("expected '+' or '-' in P(...)");
      Rational r = rational();
      expect(';');
      Rational b = rational();
      expect(';');
      skip();
      std::optional<std::int64_t> len;
      if (s_.substr(pos_, 3) == "inf")
        pos_ += 3;
      else
        len = integer();
      expect(')');
      return atom_node(PochhammerAtom{sign, r, b, len}, at);
    }
    if (id == "eta") return atom_node(EtaAtom{}, at);
    if (id == "theta2") return atom_node(Theta2Atom{}, at);
    if (id == "theta3") return atom_node(Theta3Atom{}, at);
    if (id == "geta") {
      expect('(');
      std::int64_t d = signed_integer();
      expect(';');
      std::int64_t g = signed_integer();
      expect(')');
      return atom_node(GenEtaAtom{d, g}, at);
    }
    if (id == "weber") {
      expect('(');
      std::size_t kat = pos_;
      std::string k = identifier();
      expect(')');
      if (k == "f") return atom_node(WeberAtom{WeberKind::f}, at);
      if (k == "f1") return atom_node(WeberAtom{WeberKind::f1}, at);
      if (k == "f2") return atom_node(WeberAtom{WeberKind::f2}, at);
      fail_at("weber(...) takes f, f1 or f2", kat);
    }
    if (id == "dtheta" || id == "dg") {
      expect('(');
      Rational j = rational();
      expect(',');
      Rational k = rational();
      expect(')');
      return atom_node(PartialThetaAtom{j, k, id == "dg"}, at);
    }
    if (id == "qpow") {
      expect('(');
      Rational r = rational();
      expect(')');
      return atom_node(QPowAtom{r}, at);
    }
    if (id == "subst") {
      expect('(');
      ExprPtr inner = expr();
      expect(';');
      std::size_t mat = pos_;
      Rational m = rational();
      expect(')');
      if (m <= 0) fail_at("parameter error: subst needs a positive power", mat);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Subst;
      e->number = m;
      e->args = {inner};
      e->column = at;
      return e;
    }
    if (id == "tshift") {
      expect('(');
      ExprPtr inner = expr();
      expect(')');
      return node(Expr::Kind::TauShift, {inner}, at);
    }
    if (id == "dissect") {
      expect('(');
      ExprPtr inner = expr();
      expect(';');
      std::size_t mat = pos_;
      std::int64_t m = integer();
      expect(';');
      std::int64_t r = signed_integer();
      expect(')');
      if (m <= 0) fail_at("parameter error: dissect needs a positive modulus", mat);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Dissect;
      e->power = m;
      e->residue = r;
      e->args = {inner};
      e->column = at;
      return e;
    }
    auto ext = reg_.find(id);
    if (!ext) fail_at("unknown name '" + id + "'", at);
    std::string args;
    if (ext->takes_arguments) {
      expect('(');
      int depth = 1;
      std::size_t start = pos_;
      while (pos_ < s_.size() && depth > 0) {
        if (s_[pos_] == '(') ++depth;
        if (s_[pos_] == ')') --depth;
        ++pos_;
      }
      if (depth > 0) fail("unexpected end of input, expected ')'");
      args = std::string(s_.substr(start, pos_ - 1 - start));
    }
    return atom_node(ExtensionAtom{ext, args}, at);
  }

  std::string_view s_;
  const Registry& reg_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(std::string_view text, const Registry& registry) { return Parser(text, registry).run(); }

}  // namespace nahmlab
