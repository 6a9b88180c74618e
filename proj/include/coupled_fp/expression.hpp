#pragma once

// A small arithmetic language for user-defined coupled maps.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | variable | function '(' expr ')' | '(' expr ')'
//
// Variables are x1..xd and y1..yd; functions are exp, ln, atan, sqrt, abs.
// There are no conditionals or comparisons, so every expression is
// continuous wherever it is defined.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfp {

class Expression {
public:
    enum class Op : unsigned char {
        literal, var_x, var_y, neg, add, sub, mul, div, exp, ln, atan, sqrt, abs
    };

    struct Node {
        Op op = Op::literal;
        double value = 0.0;      ///< literal value
        std::size_t index = 0;   ///< zero-based variable index
        std::size_t lhs = 0;     ///< operand (unary) or left operand
        std::size_t rhs = 0;     ///< right operand
    };

    Expression(std::vector<Node> nodes, std::size_t root, std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }

    /// Throws DomainError on division by zero, ln of a nonpositive value,
    /// sqrt of a negative value, or a non-finite intermediate.
    double evaluate(std::span<const double> x, std::span<const double> y) const;

    /// Fully parenthesized text that parses back to an identical tree.
    std::string to_string() const;

private:
    double eval_node(std::size_t i, std::span<const double> x, std::span<const double> y) const;
    void print_node(std::size_t i, std::string& out) const;

    std::shared_ptr<const std::vector<Node>> nodes_;
    std::size_t root_ = 0;
    std::size_t dim_ = 0;
};

/// Throws ParseError with a byte offset into `text`.
Expression parse_expression(std::string_view text, std::size_t dim);

}  // namespace cfp
