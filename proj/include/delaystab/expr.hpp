#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace delaystab {

/// Malformed coefficient text. `offset()` is the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised by evaluation instead of returning a non-finite value.
class EvalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Arithmetic expression in the single free variable `t`.
///
/// Grammar (lowest to highest precedence):
///
///     expr  := term  (('+' | '-') term)*
///     term  := unary (('*' | '/') unary)*
///     unary := '-' unary | power
///     power := atom ('^' unary)?          right-associative
///     atom  := number | 't' | func '(' expr ')' | '(' expr ')'
///     func  := exp | sin | cos | cosh | sinh | abs | sqrt
///
/// so "-t^2" is -(t^2) and "2^3^2" is 2^9. Immutable after construction;
/// evaluation is reentrant.
class CoeffExpr {
 public:
  enum class Op : std::uint8_t {
    Literal, Var, Neg, Add, Sub, Mul, Div, Pow,
    Exp, Sin, Cos, Cosh, Sinh, Abs, Sqrt
  };

  struct Node {
    Op op;
    double value;  // Literal only
  };

  /// The constant 0.
  CoeffExpr();

  static CoeffExpr parse(std::string_view text);
  static CoeffExpr constant(double value);

  /// Value at `t`. Throws EvalError on division by zero, negative sqrt or
  /// fractional power of a negative base, and on any non-finite result.
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// Fully parenthesized canonical text, e.g. "(4*exp((-0.1*t)))".
  std::string format() const;

  /// Constructor-style dump of the tree, e.g. "Mul(4,Exp(Mul(-0.1,t)))".
  std::string tree() const;

  bool depends_on_t() const noexcept { return depends_on_t_; }
  bool contains_abs() const noexcept { return contains_abs_; }

  /// Postfix node sequence; operands of a node precede it.
  const std::vector<Node>& nodes() const noexcept { return *nodes_; }

 private:
  explicit CoeffExpr(std::vector<Node> postfix);

  std::shared_ptr<const std::vector<Node>> nodes_;
  std::size_t max_depth_ = 1;
  bool depends_on_t_ = false;
  bool contains_abs_ = false;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

inline CoeffExpr parse(std::string_view text) { return CoeffExpr::parse(text); }
inline double eval(const CoeffExpr& e, double t) { return e.eval(t); }
inline std::string format(const CoeffExpr& e) { return e.format(); }

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace delaystab
