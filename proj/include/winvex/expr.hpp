#pragma once

// Small arithmetic expression language used to define h, eta, w, g_i, phi.
//
// Grammar (whitespace insignificant, no implicit multiplication):
//
//   outputs   := expr (';' expr)*
//   expr      := term (('+' | '-') term)*
//   term      := unary (('*' | '/') unary)*
//   unary     := '-' unary | power
//   power     := primary ('^' unary)?          right-associative
//   primary   := number | variable | '(' expr ')'
//              | fn '(' expr (',' expr)* ')'
//              | 'piecewise' '(' expr cmp expr ',' expr ',' expr ')'
//   fn        := min | max | abs | exp | ln
//   cmp       := '<' | '<=' | '>' | '>=' | '=='
//   variable  := ('z' | 'y') [1-9][0-9]*

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace winvex::expr {

enum class BinaryOp { add, sub, mul, div, pow };
enum class CallFn { min, max, abs, exp, ln };
enum class CmpOp { lt, le, gt, ge, eq };
enum class VarBlock { z, y };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {
  VarBlock block;
  int index;  // 1-based, as written
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  CallFn fn;
  std::vector<NodePtr> args;
};
struct Piecewise {
  CmpOp cmp;
  NodePtr cond_lhs;
  NodePtr cond_rhs;
  NodePtr if_true;
  NodePtr if_false;
};

struct Node {
  std::variant<Number, Variable, Negate, Binary, Call, Piecewise> kind;
};

// Node builders. Literals are kept non-negative so printed trees reparse to
// the same structure: num(-3) builds Negate(Number 3).
inline NodePtr num(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("expression literal must be finite");
  if (std::signbit(v) && v != 0.0)
    return std::make_shared<const Node>(Node{Negate{std::make_shared<const Node>(Node{Number{-v}})}});
  return std::make_shared<const Node>(Node{Number{v == 0.0 ? 0.0 : v}});
}
inline NodePtr var(VarBlock b, int index) {
  return std::make_shared<const Node>(Node{Variable{b, index}});
}
inline NodePtr neg(NodePtr a) { return std::make_shared<const Node>(Node{Negate{std::move(a)}}); }
inline NodePtr bin(BinaryOp op, NodePtr a, NodePtr b) {
  return std::make_shared<const Node>(Node{Binary{op, std::move(a), std::move(b)}});
}
inline NodePtr call(CallFn fn, std::vector<NodePtr> args) {
  return std::make_shared<const Node>(Node{Call{fn, std::move(args)}});
}
inline NodePtr piecewise(CmpOp cmp, NodePtr l, NodePtr r, NodePtr t, NodePtr f) {
  return std::make_shared<const Node>(
      Node{Piecewise{cmp, std::move(l), std::move(r), std::move(t), std::move(f)}});
}

inline bool structurally_equal(const Node& a, const Node& b);

inline bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return structurally_equal(*a, *b);
}

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind.index() != b.kind.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.kind);
        if constexpr (std::is_same_v<T, Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x.block == y.block && x.index == y.index;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(x.operand, y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!structurally_equal(x.args[i], y.args[i])) return false;
          return true;
        } else {
          return x.cmp == y.cmp && structurally_equal(x.cond_lhs, y.cond_lhs) &&
                 structurally_equal(x.cond_rhs, y.cond_rhs) &&
                 structurally_equal(x.if_true, y.if_true) &&
                 structurally_equal(x.if_false, y.if_false);
        }
      },
      a.kind);
}

enum class ParseErrorKind { syntax, unknown_identifier, arity };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}
  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

// single:    zI and yI both name input slot I-1 (arity n).
// two_point: z1..zn are slots 0..n-1 and y1..yn are slots n..2n-1 (arity 2n).
enum class Layout { single, two_point };

namespace detail {

enum class OpCode : std::uint8_t {
  push, load, neg, add, sub, mul, div, pow, min, max, abs, exp, ln, select
};

struct Instr {
  OpCode op;
  std::uint8_t cmp = 0;  // CmpOp for select
  int slot = 0;
  double value = 0.0;
};

struct Program {
  std::vector<Instr> code;
  std::size_t max_depth = 0;
};

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

inline double apply_pow(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return nan();
  if (a < 0.0 && std::trunc(b) != b) return nan();
  if (a == 0.0 && b < 0.0) return nan();
  return std::pow(a, b);
}

inline bool compare(CmpOp c, double a, double b) {
  switch (c) {
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
    case CmpOp::eq: return a == b;
  }
  return false;
}

inline double run(const Program& p, std::span<const double> in) {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> big;
  double* st = small.data();
  if (p.max_depth > kInline) {
    big.resize(p.max_depth);
    st = big.data();
  }
  std::size_t sp = 0;
  for (const Instr& ins : p.code) {
    switch (ins.op) {
      case OpCode::push: st[sp++] = ins.value; break;
      case OpCode::load: st[sp++] = in[static_cast<std::size_t>(ins.slot)]; break;
      case OpCode::neg: st[sp - 1] = -st[sp - 1]; break;
      case OpCode::abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
      case OpCode::exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case OpCode::ln: {
        double a = st[sp - 1];
        st[sp - 1] = (std::isnan(a) || a <= 0.0) ? nan() : std::log(a);
        break;
      }
      case OpCode::select: {
        double f = st[--sp], t = st[--sp], r = st[--sp], l = st[--sp];
        st[sp++] = (std::isnan(l) || std::isnan(r)) ? nan()
                   : compare(static_cast<CmpOp>(ins.cmp), l, r) ? t
                                                                 : f;
        break;
      }
      default: {
        double b = st[--sp];
        double a = st[sp - 1];
        double r = 0.0;
        switch (ins.op) {
          case OpCode::add: r = a + b; break;
          case OpCode::sub: r = a - b; break;
          case OpCode::mul: r = a * b; break;
          case OpCode::div: r = (b == 0.0) ? nan() : a / b; break;
          case OpCode::pow: r = apply_pow(a, b); break;
          case OpCode::min: r = (std::isnan(a) || std::isnan(b)) ? nan() : std::min(a, b); break;
          case OpCode::max: r = (std::isnan(a) || std::isnan(b)) ? nan() : std::max(a, b); break;
          default: break;
        }
        st[sp - 1] = r;
      }
    }
  }
  return st[0];
}

struct Compiler {
  Layout layout;
  int arity;
  Program prog;
  std::size_t depth = 0;

  void bump(std::size_t d) {
    depth += d;
    if (depth > prog.max_depth) prog.max_depth = depth;
  }

  int slot_of(const Variable& v) const {
    if (layout == Layout::two_point && v.block == VarBlock::y) return arity / 2 + v.index - 1;
    return v.index - 1;
  }

  void emit(const Node& n) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Number>) {
            prog.code.push_back({OpCode::push, 0, 0, x.value});
            bump(1);
          } else if constexpr (std::is_same_v<T, Variable>) {
            prog.code.push_back({OpCode::load, 0, slot_of(x), 0.0});
            bump(1);
          } else if constexpr (std::is_same_v<T, Negate>) {
            emit(*x.operand);
            prog.code.push_back({OpCode::neg});
          } else if constexpr (std::is_same_v<T, Binary>) {
            emit(*x.lhs);
            emit(*x.rhs);
            static constexpr OpCode ops[] = {OpCode::add, OpCode::sub, OpCode::mul, OpCode::div,
                                             OpCode::pow};
            prog.code.push_back({ops[static_cast<int>(x.op)]});
            depth -= 1;
          } else if constexpr (std::is_same_v<T, Call>) {
            emit(*x.args[0]);
            for (std::size_t i = 1; i < x.args.size(); ++i) {
              emit(*x.args[i]);
              prog.code.push_back({x.fn == CallFn::min ? OpCode::min : OpCode::max});
              depth -= 1;
            }
            if (x.fn == CallFn::abs) prog.code.push_back({OpCode::abs});
            if (x.fn == CallFn::exp) prog.code.push_back({OpCode::exp});
            if (x.fn == CallFn::ln) prog.code.push_back({OpCode::ln});
          } else {
            emit(*x.cond_lhs);
            emit(*x.cond_rhs);
            emit(*x.if_true);
            emit(*x.if_false);
            prog.code.push_back({OpCode::select, static_cast<std::uint8_t>(x.cmp)});
            depth -= 3;
          }
        },
        n.kind);
  }
};

inline Program compile(const Node& n, Layout layout, int arity) {
  Compiler c{layout, arity, {}};
  c.emit(n);
  return std::move(c.prog);
}

}  // namespace detail

/// A parsed function R^arity -> R^outputs. Immutable and safe to evaluate
/// concurrently.
class FunctionDef {
 public:
  FunctionDef() = default;

  FunctionDef(std::string name, int arity, Layout layout, std::vector<NodePtr> outputs)
      : name_(std::move(name)), arity_(arity), layout_(layout), outputs_(std::move(outputs)) {
    if (arity_ < 0) throw std::invalid_argument("negative arity");
    if (layout_ == Layout::two_point && arity_ % 2 != 0)
      throw std::invalid_argument("two-point map needs an even arity");
    if (outputs_.empty()) throw std::invalid_argument("function has no outputs");
    programs_.reserve(outputs_.size());
    for (const auto& o : outputs_) programs_.push_back(detail::compile(*o, layout_, arity_));
  }

  const std::string& name() const noexcept { return name_; }
  int arity() const noexcept { return arity_; }
  Layout layout() const noexcept { return layout_; }
  /// Number of points-space coordinates: arity for single maps, arity/2 for
  /// two-point maps.
  int block_size() const noexcept { return layout_ == Layout::two_point ? arity_ / 2 : arity_; }
  std::size_t output_count() const noexcept { return outputs_.size(); }
  std::span<const NodePtr> outputs() const noexcept { return outputs_; }
  bool is_scalar() const noexcept { return outputs_.size() == 1; }

  std::vector<double> operator()(std::span<const double> point) const {
    check_arity(point.size());
    std::vector<double> out(programs_.size());
    for (std::size_t i = 0; i < programs_.size(); ++i) out[i] = detail::run(programs_[i], point);
    return out;
  }

  /// Writes outputs into `out` (size output_count()); no allocation for
  /// shallow expressions.
  void eval_into(std::span<const double> point, std::span<double> out) const {
    check_arity(point.size());
    for (std::size_t i = 0; i < programs_.size(); ++i) out[i] = detail::run(programs_[i], point);
  }

  double scalar(std::span<const double> point) const {
    check_arity(point.size());
    return detail::run(programs_[0], point);
  }

 private:
  void check_arity(std::size_t n) const {
    if (n != static_cast<std::size_t>(arity_))
      throw std::invalid_argument("function '" + name_ + "' expects " + std::to_string(arity_) +
                                  " inputs, got " + std::to_string(n));
  }

  std::string name_;
  int arity_ = 0;
  Layout layout_ = Layout::single;
  std::vector<NodePtr> outputs_;
  std::vector<detail::Program> programs_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, int arity, Layout layout)
      : s_(text), arity_(arity), layout_(layout) {}

  std::vector<NodePtr> parse_outputs() {
    std::vector<NodePtr> outs;
    outs.push_back(parse_expr());
    skip_ws();
    while (pos_ < s_.size() && s_[pos_] == ';') {
      ++pos_;
      outs.push_back(parse_expr());
      skip_ws();
    }
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return outs;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseErrorKind::syntax, pos_, "syntax error: " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+')) lhs = bin(BinaryOp::add, lhs, parse_term());
      else if (eat('-')) lhs = bin(BinaryOp::sub, lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = bin(BinaryOp::mul, lhs, parse_unary());
      else if (eat('/')) lhs = bin(BinaryOp::div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return neg(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) return bin(BinaryOp::pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_, ++n;
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // 'e' belongs to something else
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("number out of range");
    }
    return num(v);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string_view id = s_.substr(start, pos_ - start);

    if ((id[0] == 'z' || id[0] == 'y') && id.size() > 1 && id[1] >= '1' && id[1] <= '9') {
      bool all_digits = true;
      for (std::size_t i = 1; i < id.size(); ++i) all_digits &= (id[i] >= '0' && id[i] <= '9');
      if (all_digits) {
        int index = 0;
        std::from_chars(id.data() + 1, id.data() + id.size(), index);
        int limit = layout_ == Layout::two_point ? arity_ / 2 : arity_;
        if (index > limit)
          throw ParseError(ParseErrorKind::arity, start,
                           "variable " + std::string(id) + " exceeds arity " +
                               std::to_string(limit));
        return var(id[0] == 'z' ? VarBlock::z : VarBlock::y, index);
      }
    }

    if (id == "piecewise") {
      expect('(');
      NodePtr l = parse_expr();
      CmpOp cmp = parse_cmp();
      NodePtr r = parse_expr();
      expect(',');
      NodePtr t = parse_expr();
      expect(',');
      NodePtr f = parse_expr();
      expect(')');
      return piecewise(cmp, l, r, t, f);
    }

    CallFn fn;
    if (id == "min") fn = CallFn::min;
    else if (id == "max") fn = CallFn::max;
    else if (id == "abs") fn = CallFn::abs;
    else if (id == "exp") fn = CallFn::exp;
    else if (id == "ln") fn = CallFn::ln;
    else
      throw ParseError(ParseErrorKind::unknown_identifier, start,
                       "unknown identifier '" + std::string(id) + "'");

    expect('(');
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (eat(',')) args.push_back(parse_expr());
    expect(')');
    bool binary = fn == CallFn::min || fn == CallFn::max;
    if (binary ? args.size() < 2 : args.size() != 1)
      throw ParseError(ParseErrorKind::syntax, start,
                       "syntax error: wrong argument count for '" + std::string(id) + "'");
    return call(fn, std::move(args));
  }

  CmpOp parse_cmp() {
    skip_ws();
    auto at = [&](std::size_t k) { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; };
    char a = at(0), b = at(1);
    if (a == '<' && b == '=') return pos_ += 2, CmpOp::le;
    if (a == '>' && b == '=') return pos_ += 2, CmpOp::ge;
    if (a == '=' && b == '=') return pos_ += 2, CmpOp::eq;
    if (a == '<') return pos_ += 1, CmpOp::lt;
    if (a == '>') return pos_ += 1, CmpOp::gt;
    fail("expected comparison operator");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int arity_;
  Layout layout_;
};

}  // namespace detail

inline FunctionDef parse(std::string_view text, int arity, Layout layout = Layout::single,
                         std::string name = {}) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError(ParseErrorKind::syntax, 0, "syntax error: empty expression");
  if (arity < 0) throw std::invalid_argument("negative arity");
  if (layout == Layout::two_point && arity % 2 != 0)
    throw std::invalid_argument("two-point map needs an even arity");
  detail::Parser p(text, arity, layout);
  return FunctionDef(std::move(name), arity, layout, p.parse_outputs());
}

/// y1; y2; ...; yn
inline FunctionDef identity_map(int n) {
  std::vector<NodePtr> outs;
  for (int i = 1; i <= n; ++i) outs.push_back(var(VarBlock::y, i));
  return FunctionDef("identity", n, Layout::single, std::move(outs));
}

namespace detail {

inline int precedence(const Node& n) {
  if (const auto* b = std::get_if<Binary>(&n.kind)) {
    switch (b->op) {
      case BinaryOp::add:
      case BinaryOp::sub: return 1;
      case BinaryOp::mul:
      case BinaryOp::div: return 2;
      case BinaryOp::pow: return 4;
    }
  }
  if (std::holds_alternative<Negate>(n.kind)) return 3;
  return 5;
}

inline void format_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

inline void print(std::string& out, const Node& n);

inline void print_wrapped(std::string& out, const Node& n, bool wrap) {
  if (wrap) out += '(';
  print(out, n);
  if (wrap) out += ')';
}

inline void print(std::string& out, const Node& n) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          format_number(out, x.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += x.block == VarBlock::z ? 'z' : 'y';
          out += std::to_string(x.index);
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          print_wrapped(out, *x.operand, precedence(*x.operand) < 3);
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = precedence(n);
          static constexpr const char* sym[] = {"+", "-", "*", "/", "^"};
          if (x.op == BinaryOp::pow) {
            print_wrapped(out, *x.lhs, precedence(*x.lhs) <= 4);
            out += '^';
            print_wrapped(out, *x.rhs, precedence(*x.rhs) < 3);
          } else {
            print_wrapped(out, *x.lhs, precedence(*x.lhs) < p);
            out += ' ';
            out += sym[static_cast<int>(x.op)];
            out += ' ';
            print_wrapped(out, *x.rhs, precedence(*x.rhs) <= p);
          }
        } else if constexpr (std::is_same_v<T, Call>) {
          static constexpr const char* names[] = {"min", "max", "abs", "exp", "ln"};
          out += names[static_cast<int>(x.fn)];
          out += '(';
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i) out += ", ";
            print(out, *x.args[i]);
          }
          out += ')';
        } else {
          static constexpr const char* cmps[] = {" < ", " <= ", " > ", " >= ", " == "};
          out += "piecewise(";
          print(out, *x.cond_lhs);
          out += cmps[static_cast<int>(x.cmp)];
          print(out, *x.cond_rhs);
          out += ", ";
          print(out, *x.if_true);
          out += ", ";
          print(out, *x.if_false);
          out += ')';
        }
      },
      n.kind);
}

}  // namespace detail

inline std::string pretty_print(const Node& n) {
  std::string out;
  detail::print(out, n);
  return out;
}

inline std::string pretty_print(const FunctionDef& f) {
  std::string out;
  for (std::size_t i = 0; i < f.outputs().size(); ++i) {
    if (i) out += "; ";
    detail::print(out, *f.outputs()[i]);
  }
  return out;
}

inline bool structurally_equal(const FunctionDef& a, const FunctionDef& b) {
  if (a.arity() != b.arity() || a.layout() != b.layout() || a.output_count() != b.output_count())
    return false;
  for (std::size_t i = 0; i < a.output_count(); ++i)
    if (!structurally_equal(a.outputs()[i], b.outputs()[i])) return false;
  return true;
}

/// Replaces every variable of `outer` (a function of one input) by `inner`.
inline NodePtr substitute(const NodePtr& outer, const NodePtr& inner) {
  return std::visit(
      [&](const auto& x) -> NodePtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return outer;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return inner;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return neg(substitute(x.operand, inner));
        } else if constexpr (std::is_same_v<T, Binary>) {
          return bin(x.op, substitute(x.lhs, inner), substitute(x.rhs, inner));
        } else if constexpr (std::is_same_v<T, Call>) {
          std::vector<NodePtr> args;
          for (const auto& a : x.args) args.push_back(substitute(a, inner));
          return call(x.fn, std::move(args));
        } else {
          return piecewise(x.cmp, substitute(x.cond_lhs, inner), substitute(x.cond_rhs, inner),
                           substitute(x.if_true, inner), substitute(x.if_false, inner));
        }
      },
      outer->kind);
}

}  // namespace winvex::expr
