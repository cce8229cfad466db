#pragma once

// Expression language for potentials V(x, t) / U(x, t) and initial data.
//
//   expr    := term   { ('+' | '-') term }
//   term    := unary  { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]            (right associative)
//   primary := number | constant | variable | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | sqrt | abs
//   variable:= x | x1 | x2 | x3 | t              (x is x1)
//   constant:= pi | e
//
// There is no implicit multiplication: "2x" is a syntax error.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teglab::dsl {

enum class NodeKind { constant, variable, time, negate, function, binary };
enum class Function { sin, cos, exp, sqrt, abs };
enum class BinaryOp { add, sub, mul, div, pow };

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;      // constant
  std::string text;        // numeric lexeme as written; empty for named constants
  std::string name;        // "pi" / "e" for named constants, empty otherwise
  int variable = 0;        // 0-based coordinate index
  Function function = Function::sin;
  BinaryOp op = BinaryOp::add;
  int lhs = -1;            // operand of negate/function, left of binary
  int rhs = -1;
};

/// Immutable expression tree stored as a node arena.
class Expr {
 public:
  Expr(std::vector<Node> nodes, int root);

  const Node& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  int root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Number of coordinates referenced (highest x-index + 1; 0 if none).
  int coordinates_used() const noexcept { return coordinates_used_; }
  bool uses_time() const noexcept { return uses_time_; }
  /// True for the literal constant 0.
  bool is_zero() const noexcept;

 private:
  std::vector<Node> nodes_;
  int root_;
  int coordinates_used_ = 0;
  bool uses_time_ = false;
};

/// Parses UTF-8 source text. Throws SyntaxError with the byte offset and the
/// set of tokens that would have been accepted there.
Expr parse(std::string_view source);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string to_string(const Expr& expr);

bool structurally_equal(const Expr& a, const Expr& b);

/// Evaluable scalar field (x, t) -> real over K coordinates, backed either by
/// an expression (usable at any working precision) or by a native callable.
class Field {
 public:
  using Native = std::function<double(std::span<const double>, double)>;

  /// The zero field in one coordinate.
  Field();

  /// Throws SyntaxError, or InvalidArgument if the expression names a
  /// coordinate beyond `dimension`.
  static Field parse(std::string_view source, int dimension = 1);
  static Field from_expr(Expr expr, int dimension = 1);
  static Field constant(double value, int dimension = 1);
  /// Native fields evaluate in double precision only.
  static Field native(Native fn, int dimension = 1, std::string label = "<native>");

  int dimension() const noexcept { return dimension_; }
  const std::string& source() const noexcept { return source_; }
  bool has_expression() const noexcept { return expr_ != nullptr; }
  const Expr* expression() const noexcept { return expr_.get(); }
  bool is_zero() const noexcept { return expr_ && expr_->is_zero(); }
  bool depends_on_time() const noexcept;

  /// Evaluates at (x, t); x.size() must equal dimension(). Throws
  /// EvaluationError on division by zero, sqrt of a negative number, a
  /// negative base under a fractional power, or a non-finite result.
  double operator()(std::span<const double> x, double t) const;

  /// Same evaluation in another real type. Only expression-backed fields
  /// support types other than double.
  template <class Real>
  Real eval(std::span<const Real> x, const Real& t) const;

 private:
  std::shared_ptr<const Expr> expr_;
  Native native_;
  int dimension_ = 1;
  std::string source_;
};

/// Complex-valued data re + i im, evaluated at t = 0 (initial conditions).
struct ComplexField {
  ComplexField() = default;
  ComplexField(Field real_part);  // NOLINT(google-explicit-constructor)
  ComplexField(Field real_part, Field imag_part);

  /// Parses "re" or ("re", "im"); an empty imaginary source means zero.
  static ComplexField parse(std::string_view re, std::string_view im = {}, int dimension = 1);

  int dimension() const noexcept { return re.dimension(); }
  bool has_expression() const noexcept { return re.has_expression() && im.has_expression(); }
  std::complex<double> operator()(std::span<const double> x) const;

  Field re;
  Field im;
};

/// Free-function spelling of Field::operator().
double eval(const Field& field, std::span<const double> x, double t);

}  // namespace teglab::dsl
