#include "teglab/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "potential_eval.hpp"
#include "teglab/errors.hpp"

namespace teglab {

namespace {

std::string describe(std::size_t offset, const std::vector<std::string>& expected, const std::string& detail) {
  std::string msg = "syntax error at offset " + std::to_string(offset) + ": " + detail;
  if (!expected.empty()) {
    msg += "; expected one of:";
    for (const auto& e : expected) msg += " '" + e + "'";
  }
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail)
    : Error(describe(offset, expected, detail)), offset_(offset), expected_(std::move(expected)) {}

namespace dsl {
namespace {

constexpr int kMaxDepth = 256;  // nested parentheses, calls, negations, exponents
constexpr std::size_t kMaxNodes = 10000;

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end, bad };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string_view text;
};

const std::vector<std::string>& operand_set() {
  static const std::vector<std::string> s{"number", "x", "x1", "x2", "x3", "t", "pi", "e",
                                          "sin",    "cos", "exp", "sqrt", "abs", "(", "-"};
  return s;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  Expr run() {
    const int root = expression(0);
    if (cur_.kind != Tok::end) fail_after_operand("unexpected input after a complete expression");
    return Expr(std::move(nodes_), root);
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail) {
    throw SyntaxError(cur_.offset, std::move(expected), detail);
  }

  [[noreturn]] void fail_after_operand(const std::string& detail) {
    std::vector<std::string> ops{"+", "-", "*", "/", "^"};
    if (parens_ > 0) ops.emplace_back(")");
    ops.emplace_back("end of input");
    fail(std::move(ops), detail);
  }

  void advance() {
    std::size_t i = pos_;
    while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\n' || src_[i] == '\r')) ++i;
    cur_.offset = i;
    if (i >= src_.size()) {
      cur_ = {Tok::end, i, {}};
      pos_ = i;
      return;
    }
    const char c = src_[i];
    std::size_t j = i + 1;
    Tok kind = Tok::bad;
    switch (c) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '/': kind = Tok::slash; break;
      case '^': kind = Tok::caret; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      default:
        if (is_digit(c) || (c == '.' && i + 1 < src_.size() && is_digit(src_[i + 1]))) {
          kind = Tok::number;
          j = scan_number(i);
        } else if (is_ident_start(c)) {
          kind = Tok::ident;
          while (j < src_.size() && is_ident_char(src_[j])) ++j;
        }
    }
    cur_ = {kind, i, src_.substr(i, j - i)};
    pos_ = j;
  }

  std::size_t scan_number(std::size_t i) const {
    std::size_t j = i;
    while (j < src_.size() && is_digit(src_[j])) ++j;
    if (j < src_.size() && src_[j] == '.') {
      ++j;
      while (j < src_.size() && is_digit(src_[j])) ++j;
    }
    if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && is_digit(src_[k])) {
        while (k < src_.size() && is_digit(src_[k])) ++k;
        j = k;
      }
    }
    return j;
  }

  int push(Node n) {
    if (nodes_.size() >= kMaxNodes) fail({}, "expression too large");
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(BinaryOp op, int lhs, int rhs) {
    Node n;
    n.kind = NodeKind::binary;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(std::move(n));
  }

  void enter(int depth) {
    if (depth > kMaxDepth) fail({}, "expression nested too deeply");
  }

  int expression(int depth) {
    enter(depth);
    int lhs = term(depth);
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const BinaryOp op = cur_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = binary(op, lhs, term(depth));
    }
    return lhs;
  }

  int term(int depth) {
    int lhs = unary(depth);
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const BinaryOp op = cur_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = binary(op, lhs, unary(depth));
    }
    return lhs;
  }

  int unary(int depth) {
    enter(depth);
    if (cur_.kind == Tok::minus) {
      advance();
      const int operand = unary(depth + 1);
      Node n;
      n.kind = NodeKind::negate;
      n.lhs = operand;
      return push(std::move(n));
    }
    return power(depth);
  }

  int power(int depth) {
    const int base = primary(depth);
    if (cur_.kind != Tok::caret) return base;
    advance();
    return binary(BinaryOp::pow, base, unary(depth + 1));
  }

  int primary(int depth) {
    switch (cur_.kind) {
      case Tok::number: return number();
      case Tok::ident: return identifier(depth);
      case Tok::lparen: {
        advance();
        ++parens_;
        const int inner = expression(depth + 1);
        if (cur_.kind != Tok::rparen) fail_after_operand("missing ')'");
        --parens_;
        advance();
        return inner;
      }
      case Tok::end: fail(operand_set(), "unexpected end of input");
      default: fail(operand_set(), "unexpected character");
    }
  }

  int number() {
    const std::string text(cur_.text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc::result_out_of_range) {
      // from_chars reports underflow the same way; only overflow is fatal
      value = std::strtod(text.c_str(), nullptr);
    }
    if (ptr != text.data() + text.size() && ec != std::errc::result_out_of_range) {
      fail({"number"}, "malformed number");
    }
    if (!std::isfinite(value)) fail({"number"}, "number out of range");
    Node n;
    n.kind = NodeKind::constant;
    n.value = value;
    n.text = text;
    advance();
    return push(std::move(n));
  }

  int identifier(int depth) {
    const std::string_view id = cur_.text;
    Node n;
    if (id == "x" || id == "x1" || id == "x2" || id == "x3") {
      n.kind = NodeKind::variable;
      n.variable = id.size() == 1 ? 0 : id[1] - '1';
    } else if (id == "t") {
      n.kind = NodeKind::time;
    } else if (id == "pi") {
      n.kind = NodeKind::constant;
      n.value = 3.141592653589793238462643383279502884;
      n.name = "pi";
    } else if (id == "e") {
      n.kind = NodeKind::constant;
      n.value = 2.718281828459045235360287471352662498;
      n.name = "e";
    } else {
      static const std::pair<std::string_view, Function> functions[] = {
          {"sin", Function::sin}, {"cos", Function::cos}, {"exp", Function::exp},
          {"sqrt", Function::sqrt}, {"abs", Function::abs}};
      const auto it = std::find_if(std::begin(functions), std::end(functions),
                                   [&](const auto& f) { return f.first == id; });
      if (it == std::end(functions)) fail(operand_set(), "unknown identifier '" + std::string(id) + "'");
      advance();
      if (cur_.kind != Tok::lparen) fail({"("}, "function name must be followed by '('");
      advance();
      ++parens_;
      const int arg = expression(depth + 1);
      if (cur_.kind != Tok::rparen) fail_after_operand("missing ')' after function argument");
      --parens_;
      advance();
      n.kind = NodeKind::function;
      n.function = it->second;
      n.lhs = arg;
      return push(std::move(n));
    }
    advance();
    return push(std::move(n));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_;
  int parens_ = 0;
  std::vector<Node> nodes_;
};

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::negate: return 3;
    case NodeKind::binary:
      switch (n.op) {
        case BinaryOp::add:
        case BinaryOp::sub: return 1;
        case BinaryOp::mul:
        case BinaryOp::div: return 2;
        case BinaryOp::pow: return 4;
      }
      break;
    default: break;
  }
  return 5;
}

const char* function_name(Function f) {
  switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
  }
  return "?";
}

std::string format_number(const Node& n) {
  if (!n.name.empty()) return n.name;
  if (!n.text.empty()) return n.text;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
  return std::string(buf, res.ptr);
}

void render(const Expr& e, int index, std::string& out) {
  const Node& n = e.node(index);
  auto child = [&](int c, bool parens) {
    if (parens) out += '(';
    render(e, c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::constant: out += format_number(n); return;
    case NodeKind::variable:
      out += e.coordinates_used() <= 1 ? std::string("x") : "x" + std::to_string(n.variable + 1);
      return;
    case NodeKind::time: out += 't'; return;
    case NodeKind::negate:
      out += '-';
      child(n.lhs, precedence(e.node(n.lhs)) < 3);
      return;
    case NodeKind::function:
      out += function_name(n.function);
      child(n.lhs, true);
      return;
    case NodeKind::binary: {
      const int p = precedence(n);
      const int pl = precedence(e.node(n.lhs));
      const int pr = precedence(e.node(n.rhs));
      if (n.op == BinaryOp::pow) {
        child(n.lhs, pl < 5);
        out += '^';
        child(n.rhs, pr < 3);
        return;
      }
      child(n.lhs, pl < p);
      static constexpr const char* symbols[] = {"+", "-", "*", "/"};
      out += symbols[static_cast<int>(n.op)];
      child(n.rhs, pr <= p);
      return;
    }
  }
}

}  // namespace

Expr::Expr(std::vector<Node> nodes, int root) : nodes_(std::move(nodes)), root_(root) {
  if (nodes_.empty() || root_ != static_cast<int>(nodes_.size()) - 1) {
    throw InvalidArgument("Expr: root must be the last node of a non-empty arena");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const bool unary = n.kind == NodeKind::negate || n.kind == NodeKind::function;
    const bool binary = n.kind == NodeKind::binary;
    const auto child_ok = [&](int c) { return c >= 0 && static_cast<std::size_t>(c) < i; };
    if ((unary || binary) && !child_ok(n.lhs)) throw InvalidArgument("Expr: malformed operand index");
    if (binary && !child_ok(n.rhs)) throw InvalidArgument("Expr: malformed operand index");
    if (n.kind == NodeKind::variable) {
      if (n.variable < 0 || n.variable > 2) throw InvalidArgument("Expr: variable index out of range");
      coordinates_used_ = std::max(coordinates_used_, n.variable + 1);
    }
    if (n.kind == NodeKind::time) uses_time_ = true;
  }
}

bool Expr::is_zero() const noexcept {
  return nodes_.size() == 1 && nodes_[0].kind == NodeKind::constant && nodes_[0].value == 0.0;
}

Expr parse(std::string_view source) { return Parser(source).run(); }

std::string to_string(const Expr& expr) {
  std::string out;
  render(expr, expr.root(), out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  std::vector<std::pair<int, int>> stack{{a.root(), b.root()}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& na = a.node(ia);
    const Node& nb = b.node(ib);
    if (na.kind != nb.kind) return false;
    switch (na.kind) {
      case NodeKind::constant:
        if (na.value != nb.value || na.name != nb.name) return false;
        break;
      case NodeKind::variable:
        if (na.variable != nb.variable) return false;
        break;
      case NodeKind::time: break;
      case NodeKind::negate: stack.emplace_back(na.lhs, nb.lhs); break;
      case NodeKind::function:
        if (na.function != nb.function) return false;
        stack.emplace_back(na.lhs, nb.lhs);
        break;
      case NodeKind::binary:
        if (na.op != nb.op) return false;
        stack.emplace_back(na.lhs, nb.lhs);
        stack.emplace_back(na.rhs, nb.rhs);
        break;
    }
  }
  return true;
}

Field::Field()
    : expr_(std::make_shared<const Expr>(std::vector<Node>{Node{}}, 0)), dimension_(1), source_("0") {}

Field Field::parse(std::string_view source, int dimension) {
  Field f = from_expr(dsl::parse(source), dimension);
  f.source_ = std::string(source);
  return f;
}

Field Field::from_expr(Expr expr, int dimension) {
  if (dimension < 1 || dimension > 3) throw InvalidArgument("field dimension must be 1, 2 or 3");
  if (expr.coordinates_used() > dimension) {
    throw InvalidArgument("expression uses x" + std::to_string(expr.coordinates_used()) + " but the dimension is " +
                          std::to_string(dimension));
  }
  Field f;
  f.source_ = to_string(expr);
  f.expr_ = std::make_shared<const Expr>(std::move(expr));
  f.dimension_ = dimension;
  f.native_ = nullptr;
  return f;
}

Field Field::constant(double value, int dimension) {
  if (!std::isfinite(value)) throw InvalidArgument("constant field must be finite");
  Node c;
  c.kind = NodeKind::constant;
  c.value = std::abs(value);
  std::vector<Node> nodes{c};
  if (std::signbit(value) && value != 0.0) {
    Node neg;
    neg.kind = NodeKind::negate;
    neg.lhs = 0;
    nodes.push_back(neg);
  }
  const int root = static_cast<int>(nodes.size()) - 1;
  Field f;
  if (dimension < 1 || dimension > 3) throw InvalidArgument("field dimension must be 1, 2 or 3");
  f.expr_ = std::make_shared<const Expr>(std::move(nodes), root);
  f.dimension_ = dimension;
  f.source_ = to_string(*f.expr_);
  return f;
}

Field Field::native(Native fn, int dimension, std::string label) {
  if (!fn) throw InvalidArgument("native field requires a callable");
  if (dimension < 1 || dimension > 3) throw InvalidArgument("field dimension must be 1, 2 or 3");
  Field f;
  f.expr_.reset();
  f.native_ = std::move(fn);
  f.dimension_ = dimension;
  f.source_ = std::move(label);
  return f;
}

bool Field::depends_on_time() const noexcept { return expr_ ? expr_->uses_time() : true; }

double Field::operator()(std::span<const double> x, double t) const { return eval<double>(x, t); }

ComplexField::ComplexField(Field real_part) : re(std::move(real_part)), im(Field::constant(0.0, re.dimension())) {}

ComplexField::ComplexField(Field real_part, Field imag_part) : re(std::move(real_part)), im(std::move(imag_part)) {
  if (re.dimension() != im.dimension()) throw InvalidArgument("real and imaginary parts differ in dimension");
}

ComplexField ComplexField::parse(std::string_view re_src, std::string_view im_src, int dimension) {
  Field r = Field::parse(re_src, dimension);
  if (im_src.empty()) return ComplexField(std::move(r));
  return {std::move(r), Field::parse(im_src, dimension)};
}

std::complex<double> ComplexField::operator()(std::span<const double> x) const { return {re(x, 0.0), im(x, 0.0)}; }

double eval(const Field& field, std::span<const double> x, double t) { return field(x, t); }

}  // namespace dsl
}  // namespace teglab
