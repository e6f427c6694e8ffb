/// @file expr.hpp
/// @brief Surface syntax for elements of a free DP algebra.
///
///   expr   := term (('+' | '-') term)*      (a leading '-' is allowed)
///   term   := factor ('*' factor)*
///   factor := INT | 'x' INT | 'g' INT '(' expr ')' | '(' expr ')'
///
/// Whitespace is ignored. Generators are 1-based: x1, x2, ...
#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"

namespace dpalg::expr {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string message, std::set<std::string> expected = {})
      : Error(format(offset, message, expected)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::string& message, const std::set<std::string>& expected) {
    std::string out = "at offset " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected one of:";
      for (const auto& e : expected) out += " " + e;
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::set<std::string> expected_;
};

struct TermAST {
  enum class Kind { kSum, kProduct, kInt, kGen, kGamma };

  Kind kind = Kind::kInt;
  std::vector<TermAST> children;
  std::vector<int> signs;  // kSum: +1 / -1 per child
  Integer value = 0;       // kInt
  unsigned index = 0;      // kGen: 1-based generator; kGamma: n
  std::size_t offset = 0;

  static TermAST integer(Integer v, std::size_t at) {
    TermAST t;
    t.kind = Kind::kInt;
    t.value = std::move(v);
    t.offset = at;
    return t;
  }
  static TermAST gen(unsigned i, std::size_t at) {
    TermAST t;
    t.kind = Kind::kGen;
    t.index = i;
    t.offset = at;
    return t;
  }
  static TermAST gamma(unsigned n, TermAST arg, std::size_t at) {
    TermAST t;
    t.kind = Kind::kGamma;
    t.index = n;
    t.offset = at;
    t.children.push_back(std::move(arg));
    return t;
  }
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, std::optional<unsigned> gen_count) : src_(src), gen_count_(gen_count) {}

  TermAST parse() {
    TermAST e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'", {"+", "-", "*", "end of input"});
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw ParseError(pos_, describe_here(), {std::string("'") + c + "'"});
    ++pos_;
  }
  std::string describe_here() const {
    return pos_ < src_.size() ? "unexpected '" + std::string(1, src_[pos_]) + "'" : "unexpected end of input";
  }

  Integer number(const std::set<std::string>& expected) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(pos_, describe_here(), expected);
    return Integer(std::string(src_.substr(start, pos_ - start)));
  }

  unsigned small_number(const char* what) {
    const std::size_t at = pos_;
    const Integer v = number({std::string(what)});
    if (!v.fits_uint_p()) throw ParseError(at, std::string(what) + " too large");
    return static_cast<unsigned>(v.get_ui());
  }

  TermAST expr() {
    skip_ws();
    TermAST sum;
    sum.kind = TermAST::Kind::kSum;
    sum.offset = pos_;
    int sign = 1;
    if (peek('-')) {
      ++pos_;
      sign = -1;
    }
    sum.children.push_back(term());
    sum.signs.push_back(sign);
    for (;;) {
      if (peek('+')) {
        sign = 1;
      } else if (peek('-')) {
        sign = -1;
      } else {
        break;
      }
      ++pos_;
      sum.children.push_back(term());
      sum.signs.push_back(sign);
    }
    if (sum.children.size() == 1 && sum.signs.front() == 1) return std::move(sum.children.front());
    return sum;
  }

  TermAST term() {
    TermAST prod;
    prod.kind = TermAST::Kind::kProduct;
    prod.offset = pos_;
    prod.children.push_back(factor());
    while (peek('*')) {
      ++pos_;
      prod.children.push_back(factor());
    }
    if (prod.children.size() == 1) return std::move(prod.children.front());
    return prod;
  }

  TermAST factor() {
    static const std::set<std::string> kFactorStart{"INT", "'x'", "'g'", "'('"};
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input", kFactorStart);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return TermAST::integer(number(kFactorStart), at);
    if (c == 'x') {
      ++pos_;
      const std::size_t idx_at = pos_;
      const unsigned i = small_number("generator index");
      if (i == 0) throw ParseError(idx_at, "generators are numbered from 1");
      if (gen_count_ && i > *gen_count_) {
        throw ParseError(at, "unknown generator x" + std::to_string(i) + " (algebra has " + std::to_string(*gen_count_) + ")");
      }
      return TermAST::gen(i, at);
    }
    if (c == 'g') {
      ++pos_;
      const std::size_t n_at = pos_;
      const unsigned n = small_number("divided power exponent");
      if (n < 1) throw ParseError(n_at, "divided power exponent must be >= 1");
      expect('(');
      TermAST arg = expr();
      expect(')');
      return TermAST::gamma(n, std::move(arg), at);
    }
    if (c == '(') {
      ++pos_;
      TermAST inner = expr();
      expect(')');
      return inner;
    }
    throw ParseError(pos_, describe_here(), kFactorStart);
  }

  std::string_view src_;
  std::optional<unsigned> gen_count_;
  std::size_t pos_ = 0;
};

/// Either a bare constant or an algebra element.
struct Value {
  std::optional<Integer> constant;
  DPElement element;
};

inline Value eval(const TermAST& t, const AlgebraSpec& spec) {
  switch (t.kind) {
    case TermAST::Kind::kInt:
      return {t.value, DPElement(spec)};
    case TermAST::Kind::kGen:
      if (t.index < 1 || t.index > spec.generator_count()) {
        throw ParseError(t.offset, "unknown generator x" + std::to_string(t.index));
      }
      return {std::nullopt, DPElement::gamma_gen(spec, t.index - 1, 1)};
    case TermAST::Kind::kGamma: {
      Value arg = eval(t.children.front(), spec);
      if (arg.constant) {
        if (*arg.constant != 0) throw ParseError(t.offset, "divided power of a nonzero constant (the algebra has no unit)");
        return {std::nullopt, DPElement(spec)};
      }
      return {std::nullopt, divided_power(t.index, arg.element)};
    }
    case TermAST::Kind::kProduct: {
      Integer scalar = 1;
      std::optional<DPElement> prod;
      for (const auto& c : t.children) {
        Value v = eval(c, spec);
        if (v.constant) {
          scalar *= *v.constant;
        } else {
          prod = prod ? *prod * v.element : std::move(v.element);
        }
      }
      if (!prod) return {spec.ring().reduce(scalar), DPElement(spec)};
      return {std::nullopt, prod->scaled(scalar)};
    }
    case TermAST::Kind::kSum: {
      Integer constant = 0;
      DPElement sum(spec);
      bool has_element = false;
      std::size_t constant_at = t.offset;
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        Value v = eval(t.children[i], spec);
        if (v.constant) {
          constant += t.signs[i] * *v.constant;
          if (*v.constant != 0) constant_at = t.children[i].offset;
        } else {
          sum += v.element.scaled(t.signs[i]);
          has_element = true;
        }
      }
      constant = spec.ring().reduce(constant);
      if (!has_element) return {constant, DPElement(spec)};
      if (constant != 0) throw ParseError(constant_at, "nonzero constant term (the algebra has no unit)");
      return {std::nullopt, std::move(sum)};
    }
  }
  throw Error("unreachable");
}

}  // namespace detail

/// Parses without knowledge of the algebra; generator indices are checked
/// against `gen_count` when given.
inline TermAST parse(std::string_view input, std::optional<unsigned> gen_count = std::nullopt) {
  return detail::Parser(input, gen_count).parse();
}

inline DPElement eval(const TermAST& ast, const AlgebraSpec& spec) {
  detail::Value v = detail::eval(ast, spec);
  if (v.constant) {
    if (*v.constant != 0) throw ParseError(ast.offset, "nonzero constant (the algebra has no unit)");
    return DPElement(spec);
  }
  return std::move(v.element);
}

inline DPElement parse_element(std::string_view input, const AlgebraSpec& spec) {
  return eval(parse(input, spec.generator_count()), spec);
}

}  // namespace dpalg::expr
