#include "delaystab/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

namespace delaystab {
namespace {

using Op = CoeffExpr::Op;
using Node = CoeffExpr::Node;
using Postfix = std::vector<Node>;

constexpr double kExactIntLimit = 9007199254740992.0;  // 2^53

bool is_exact_int(double v) {
  return std::isfinite(v) && v == std::trunc(v) && std::fabs(v) <= kExactIntLimit;
}

std::optional<double> fold_exact(Op op, double l, double r) {
  if (!is_exact_int(l) || !is_exact_int(r)) return std::nullopt;
  const auto li = static_cast<std::int64_t>(l);
  const auto ri = static_cast<std::int64_t>(r);
  const auto limit = static_cast<std::int64_t>(kExactIntLimit);
  std::int64_t out = 0;
  switch (op) {
    case Op::Add: out = li + ri; break;
    case Op::Sub: out = li - ri; break;
    case Op::Mul:
      if (__builtin_mul_overflow(li, ri, &out)) return std::nullopt;
      break;
    case Op::Div:
      if (ri == 0 || li % ri != 0) return std::nullopt;
      out = li / ri;
      break;
    case Op::Pow: {
      if (ri < 0 || ri > 64) return std::nullopt;
      out = 1;
      for (std::int64_t i = 0; i < ri; ++i) {
        if (__builtin_mul_overflow(out, li, &out) || out > limit || out < -limit) return std::nullopt;
      }
      break;
    }
    default:
      return std::nullopt;
  }
  if (out > limit || out < -limit) return std::nullopt;
  // 0*(-3) folds to +0 while IEEE gives -0; keep the sign of the runtime result.
  if (out == 0) {
    const double runtime = op == Op::Add ? l + r : op == Op::Sub ? l - r : op == Op::Mul ? l * r
                         : op == Op::Div ? l / r : std::pow(l, r);
    return runtime;
  }
  return static_cast<double>(out);
}

bool is_function(Op op) {
  return op >= Op::Exp;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Cosh: return "cosh";
    case Op::Sinh: return "sinh";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

std::optional<Op> function_from_name(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, Op>, 7> table{{
      {"exp", Op::Exp}, {"sin", Op::Sin}, {"cos", Op::Cos}, {"cosh", Op::Cosh},
      {"sinh", Op::Sinh}, {"abs", Op::Abs}, {"sqrt", Op::Sqrt}}};
  for (const auto& [n, op] : table) {
    if (n == name) return op;
  }
  return std::nullopt;
}

const char* binary_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    default: return "?";
  }
}

const char* binary_name(Op op) {
  switch (op) {
    case Op::Add: return "Add";
    case Op::Sub: return "Sub";
    case Op::Mul: return "Mul";
    case Op::Div: return "Div";
    case Op::Pow: return "Pow";
    default: return "?";
  }
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Postfix run() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    Postfix out = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Postfix combine(Postfix lhs, Postfix rhs, Op op) {
    if (lhs.size() == 1 && rhs.size() == 1 && lhs[0].op == Op::Literal && rhs[0].op == Op::Literal) {
      if (auto v = fold_exact(op, lhs[0].value, rhs[0].value)) return {Node{Op::Literal, *v}};
    }
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    lhs.push_back(Node{op, 0.0});
    return lhs;
  }

  Postfix expr() {
    Postfix lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = combine(std::move(lhs), term(), Op::Add);
      } else if (accept('-')) {
        lhs = combine(std::move(lhs), term(), Op::Sub);
      } else {
        return lhs;
      }
    }
  }

  Postfix term() {
    Postfix lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = combine(std::move(lhs), unary(), Op::Mul);
      } else if (accept('/')) {
        lhs = combine(std::move(lhs), unary(), Op::Div);
      } else {
        return lhs;
      }
    }
  }

  Postfix unary() {
    if (accept('-')) {
      Postfix operand = unary();
      if (operand.size() == 1 && operand[0].op == Op::Literal) {
        operand[0].value = -operand[0].value;
        return operand;
      }
      operand.push_back(Node{Op::Neg, 0.0});
      return operand;
    }
    return power();
  }

  Postfix power() {
    Postfix base = atom();
    if (accept('^')) return combine(std::move(base), unary(), Op::Pow);
    return base;
  }

  Postfix atom() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Postfix inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Postfix number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent", pos_);
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
      throw ParseError("number out of range", start);
    }
    return {Node{Op::Literal, value}};
  }

  Postfix identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return {Node{Op::Var, 0.0}};
    const auto fn = function_from_name(name);
    if (!fn) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
    Postfix arg = expr();
    std::size_t arity = 1;
    while (accept(',')) {
      (void)expr();
      ++arity;
    }
    if (arity != 1) {
      throw ParseError("arity mismatch: " + std::string(name) + " takes 1 argument, got " +
                           std::to_string(arity),
                       start);
    }
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    arg.push_back(Node{*fn, 0.0});
    return arg;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

double apply_binary(Op op, double l, double r) {
  switch (op) {
    case Op::Add: return checked(l + r, "+");
    case Op::Sub: return checked(l - r, "-");
    case Op::Mul: return checked(l * r, "*");
    case Op::Div:
      if (r == 0.0) throw EvalError("division by zero");
      return checked(l / r, "/");
    case Op::Pow:
      if (l < 0.0 && r != std::trunc(r)) throw EvalError("fractional power of negative base");
      if (l == 0.0 && r < 0.0) throw EvalError("division by zero in power");
      return checked(std::pow(l, r), "^");
    default:
      throw std::logic_error("not a binary operator");
  }
}

double apply_function(Op op, double x) {
  switch (op) {
    case Op::Neg: return -x;
    case Op::Exp: return checked(std::exp(x), "exp");
    case Op::Sin: return checked(std::sin(x), "sin");
    case Op::Cos: return checked(std::cos(x), "cos");
    case Op::Cosh: return checked(std::cosh(x), "cosh");
    case Op::Sinh: return checked(std::sinh(x), "sinh");
    case Op::Abs: return std::fabs(x);
    case Op::Sqrt:
      if (x < 0.0) throw EvalError("sqrt of negative value");
      return std::sqrt(x);
    default:
      throw std::logic_error("not a unary operator");
  }
}

template <typename Stack>
double run_program(const Postfix& nodes, double t, Stack& stack) {
  std::size_t top = 0;
  for (const Node& n : nodes) {
    switch (n.op) {
      case Op::Literal: stack[top++] = n.value; break;
      case Op::Var: stack[top++] = t; break;
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
        --top;
        stack[top - 1] = apply_binary(n.op, stack[top - 1], stack[top]);
        break;
      default:
        stack[top - 1] = apply_function(n.op, stack[top - 1]);
        break;
    }
  }
  return stack[0];
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_number failed");
  return std::string(buf.data(), ptr);
}

CoeffExpr::CoeffExpr() : CoeffExpr(Postfix{Node{Op::Literal, 0.0}}) {}

CoeffExpr::CoeffExpr(std::vector<Node> postfix) {
  std::size_t depth = 0;
  for (const Node& n : postfix) {
    if (n.op == Op::Literal || n.op == Op::Var) {
      ++depth;
    } else if (is_binary(n.op)) {
      --depth;
    }
    max_depth_ = std::max(max_depth_, depth);
    depends_on_t_ = depends_on_t_ || n.op == Op::Var;
    contains_abs_ = contains_abs_ || n.op == Op::Abs;
  }
  nodes_ = std::make_shared<const Postfix>(std::move(postfix));
  if (!depends_on_t_) {
    try {
      cached_ = eval(0.0);
      has_cached_ = true;
    } catch (const EvalError&) {
      // Leave uncached; every eval reports the error.
    }
  }
}

CoeffExpr CoeffExpr::parse(std::string_view text) {
  return CoeffExpr(Parser(text).run());
}

CoeffExpr CoeffExpr::constant(double value) {
  if (!std::isfinite(value)) throw EvalError("non-finite constant");
  return CoeffExpr(Postfix{Node{Op::Literal, value}});
}

double CoeffExpr::eval(double t) const {
  if (has_cached_) return cached_;
  if (!std::isfinite(t)) throw EvalError("non-finite time argument");
  if (max_depth_ <= 32) {
    std::array<double, 32> stack;
    return run_program(*nodes_, t, stack);
  }
  std::vector<double> stack(max_depth_);
  return run_program(*nodes_, t, stack);
}

std::string CoeffExpr::format() const {
  std::vector<std::pair<std::string, bool>> stack;  // text, is negative literal
  for (const Node& n : *nodes_) {
    if (n.op == Op::Literal) {
      stack.emplace_back(format_number(n.value), std::signbit(n.value));
    } else if (n.op == Op::Var) {
      stack.emplace_back("t", false);
    } else if (n.op == Op::Neg) {
      stack.back() = {"(-" + stack.back().first + ")", false};
    } else if (is_binary(n.op)) {
      auto rhs = std::move(stack.back());
      stack.pop_back();
      auto& lhs = stack.back();
      std::string base = (n.op == Op::Pow && lhs.second) ? "(" + lhs.first + ")" : lhs.first;
      lhs = {"(" + base + binary_symbol(n.op) + rhs.first + ")", false};
    } else {
      stack.back() = {std::string(function_name(n.op)) + "(" + stack.back().first + ")", false};
    }
  }
  return stack.back().first;
}

std::string CoeffExpr::tree() const {
  std::vector<std::string> stack;
  for (const Node& n : *nodes_) {
    if (n.op == Op::Literal) {
      stack.push_back(format_number(n.value));
    } else if (n.op == Op::Var) {
      stack.emplace_back("t");
    } else if (n.op == Op::Neg) {
      stack.back() = "Neg(" + stack.back() + ")";
    } else if (is_binary(n.op)) {
      std::string rhs = std::move(stack.back());
      stack.pop_back();
      stack.back() = std::string(binary_name(n.op)) + "(" + stack.back() + "," + rhs + ")";
    } else if (is_function(n.op)) {
      std::string name = function_name(n.op);
      name[0] = static_cast<char>(name[0] - 'a' + 'A');
      stack.back() = name + "(" + stack.back() + ")";
    }
  }
  return stack.back();
}

}  // namespace delaystab
