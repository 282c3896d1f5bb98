#pragma once
// Scalar expressions over a small set of named variables, evaluated either
// as plain doubles or as second-order jets.
//
// Grammar (see docs/expression-grammar.md):
//   expr     := term { ("+" | "-") term }
//   term     := unary { ("*" | "/") unary }
//   unary    := "-" unary | power
//   power    := primary { "^" exponent }
//   exponent := "-" exponent | primary          (must be constant)
//   primary  := number | name | func "(" expr ")" | "(" expr ")"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heis/jet.hpp"

namespace heis {

enum class Op : std::uint8_t {
    Const, Var, Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Atan, Abs,
};

/// Node in postfix order. Pow stores its (constant) exponent in `value`.
struct Node {
    Op op = Op::Const;
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
    std::uint8_t slot = 0;
    double value = 0.0;
    std::uint32_t begin = 0;  // source span, for diagnostics
    std::uint32_t end = 0;
};

/// Maps variable names to jet slots.
class VariableSet {
public:
    VariableSet(std::initializer_list<std::string_view> names);

    static const VariableSet& fields();  // x1, x2, x3
    static const VariableSet& curve();   // t
    static const VariableSet& chart();   // s1, s2
    static const VariableSet& none();    // constant expressions

    /// Slot for `name`, or -1.
    int slot(std::string_view name) const noexcept;
    std::string_view name(std::size_t slot) const noexcept { return names_[slot]; }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
};

class Expr {
public:
    Expr() = default;

    const std::vector<Node>& nodes() const noexcept { return *nodes_; }
    const std::string& source() const noexcept { return *source_; }
    const VariableSet& variables() const noexcept { return *vars_; }

    /// Fully parenthesized text that parses back to an identical tree.
    std::string print() const;
    /// Operator nesting depth; leaves have depth 0.
    std::size_t depth() const;
    bool uses_slot(std::size_t slot) const noexcept;
    bool is_constant() const noexcept;

    double evaluate(std::span<const double> values) const;
    double evaluate(const std::array<double, 3>& p) const { return evaluate(std::span<const double>(p)); }
    Jet2 eval_jet(const std::array<double, 3>& p) const;

private:
    friend Expr parse(std::string_view, const VariableSet&);
    std::shared_ptr<const std::vector<Node>> nodes_;
    std::shared_ptr<const std::string> source_;
    const VariableSet* vars_ = &VariableSet::fields();
};

/// Throws ParseError (with byte offset and expected-token set) or UnknownIdentifierError.
Expr parse(std::string_view source, const VariableSet& vars = VariableSet::fields());

/// Value of a variable-free expression.
double parse_constant(std::string_view source);

/// Position, velocity and acceleration of a curve at one parameter value.
struct CurveJet {
    std::array<double, 3> pos{};
    std::array<double, 3> vel{};
    std::array<double, 3> acc{};
};

/// Components must be parsed with VariableSet::curve().
CurveJet eval_curve_jet(const std::array<Expr, 3>& components, double t);

}  // namespace heis
