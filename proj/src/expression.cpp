#include "coupled_fp/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "coupled_fp/errors.hpp"

namespace cfp {

Expression::Expression(std::vector<Node> nodes, std::size_t root, std::size_t dim)
    : root_(root), dim_(dim) {
    if (root >= nodes.size()) throw InputError("expression root out of range");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.op) {
            case Op::literal:
                if (!std::isfinite(n.value)) throw InputError("expression literal is not finite");
                break;
            case Op::var_x:
            case Op::var_y:
                if (n.index >= dim) throw InputError("expression variable index out of range");
                break;
            case Op::add: case Op::sub: case Op::mul: case Op::div:
                if (n.rhs >= i) throw InputError("expression operands must precede their node");
                [[fallthrough]];
            default:
                if (n.lhs >= i) throw InputError("expression operands must precede their node");
        }
    }
    nodes_ = std::make_shared<const std::vector<Node>>(std::move(nodes));
}

double Expression::evaluate(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != dim_ || y.size() != dim_) {
        throw InputError("expression expects arguments of dimension " + std::to_string(dim_));
    }
    return eval_node(root_, x, y);
}

double Expression::eval_node(std::size_t i, std::span<const double> x,
                             std::span<const double> y) const {
    const Node& n = (*nodes_)[i];
    auto arg = [&] { return eval_node(n.lhs, x, y); };
    double v = 0.0;
    switch (n.op) {
        case Op::literal: return n.value;
        case Op::var_x: return x[n.index];
        case Op::var_y: return y[n.index];
        case Op::neg: return -arg();
        case Op::add: v = arg() + eval_node(n.rhs, x, y); break;
        case Op::sub: v = arg() - eval_node(n.rhs, x, y); break;
        case Op::mul: v = arg() * eval_node(n.rhs, x, y); break;
        case Op::div: {
            const double num = arg();
            const double den = eval_node(n.rhs, x, y);
            if (den == 0.0) throw DomainError("division by zero");
            v = num / den;
            break;
        }
        case Op::exp: v = std::exp(arg()); break;
        case Op::ln: {
            const double a = arg();
            if (!(a > 0.0)) throw DomainError("ln of a nonpositive value");
            v = std::log(a);
            break;
        }
        case Op::atan: v = std::atan(arg()); break;
        case Op::sqrt: {
            const double a = arg();
            if (a < 0.0) throw DomainError("sqrt of a negative value");
            v = std::sqrt(a);
            break;
        }
        case Op::abs: v = std::abs(arg()); break;
    }
    if (!std::isfinite(v)) throw DomainError("expression overflowed to a non-finite value");
    return v;
}

namespace {

const char* binary_symbol(Expression::Op op) {
    switch (op) {
        case Expression::Op::add: return " + ";
        case Expression::Op::sub: return " - ";
        case Expression::Op::mul: return " * ";
        case Expression::Op::div: return " / ";
        default: return nullptr;
    }
}

const char* function_name(Expression::Op op) {
    switch (op) {
        case Expression::Op::exp: return "exp";
        case Expression::Op::ln: return "ln";
        case Expression::Op::atan: return "atan";
        case Expression::Op::sqrt: return "sqrt";
        case Expression::Op::abs: return "abs";
        default: return nullptr;
    }
}

std::optional<Expression::Op> function_op(std::string_view name) {
    using Op = Expression::Op;
    if (name == "exp") return Op::exp;
    if (name == "ln") return Op::ln;
    if (name == "atan") return Op::atan;
    if (name == "sqrt") return Op::sqrt;
    if (name == "abs") return Op::abs;
    return std::nullopt;
}

}  // namespace

std::string Expression::to_string() const {
    std::string out;
    print_node(root_, out);
    return out;
}

void Expression::print_node(std::size_t i, std::string& out) const {
    const Node& n = (*nodes_)[i];
    switch (n.op) {
        case Op::literal: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", std::abs(n.value));
            if (std::signbit(n.value)) {
                out += "(-";
                out += buf;
                out += ')';
            } else {
                out += buf;
            }
            return;
        }
        case Op::var_x:
        case Op::var_y:
            out += n.op == Op::var_x ? 'x' : 'y';
            out += std::to_string(n.index + 1);
            return;
        case Op::neg:
            out += "(-";
            print_node(n.lhs, out);
            out += ')';
            return;
        default:
            break;
    }
    if (const char* sym = binary_symbol(n.op)) {
        out += '(';
        print_node(n.lhs, out);
        out += sym;
        print_node(n.rhs, out);
        out += ')';
        return;
    }
    out += function_name(n.op);
    out += '(';
    print_node(n.lhs, out);
    out += ')';
}

namespace {

class Parser {
public:
    Parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

    Expression run() {
        const std::size_t root = expr();
        skip_space();
        if (pos_ < text_.size()) fail_syntax(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
        return Expression(std::move(nodes_), root, dim_);
    }

private:
    using Op = Expression::Op;

    [[noreturn]] void fail_syntax(std::size_t at, const std::string& msg) {
        throw ParseError(ParseError::Kind::syntax, at, "syntax error: " + msg);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::size_t push(Expression::Node n) {
        nodes_.push_back(n);
        return nodes_.size() - 1;
    }

    std::size_t binary(Op op, std::size_t l, std::size_t r) {
        Expression::Node n;
        n.op = op;
        n.lhs = l;
        n.rhs = r;
        return push(n);
    }

    std::size_t unary_node(Op op, std::size_t operand) {
        Expression::Node n;
        n.op = op;
        n.lhs = operand;
        return push(n);
    }

    std::size_t expr() {
        std::size_t lhs = term();
        for (;;) {
            if (accept('+')) lhs = binary(Op::add, lhs, term());
            else if (accept('-')) lhs = binary(Op::sub, lhs, term());
            else return lhs;
        }
    }

    std::size_t term() {
        std::size_t lhs = unary();
        for (;;) {
            if (accept('*')) lhs = binary(Op::mul, lhs, unary());
            else if (accept('/')) lhs = binary(Op::div, lhs, unary());
            else return lhs;
        }
    }

    std::size_t unary() {
        if (accept('-')) return unary_node(Op::neg, unary());
        return primary();
    }

    std::size_t primary() {
        skip_space();
        if (pos_ >= text_.size()) fail_syntax(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            const std::size_t inner = expr();
            if (!accept(')')) fail_syntax(pos_, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail_syntax(pos_, "unexpected character '" + std::string(1, c) + "'");
    }

    std::size_t number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
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
        if (mantissa == 0) fail_syntax(start, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail_syntax(start, "malformed exponent");
        }
        double value = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || !std::isfinite(value)) {
            fail_syntax(start, "numeric literal out of range");
        }
        Expression::Node n;
        n.op = Op::literal;
        n.value = value;
        return push(n);
    }

    std::size_t identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);

        if (auto fn = function_op(name)) {
            if (!accept('(')) {
                throw ParseError(ParseError::Kind::arity, start,
                                 "function '" + std::string(name) + "' needs an argument list");
            }
            std::size_t args = 0;
            std::size_t operand = 0;
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == ')') {
                ++pos_;
            } else {
                do {
                    operand = expr();
                    ++args;
                } while (accept(','));
                if (!accept(')')) fail_syntax(pos_, "expected ')'");
            }
            if (args != 1) {
                throw ParseError(ParseError::Kind::arity, start,
                                 "function '" + std::string(name) + "' takes 1 argument, got " +
                                     std::to_string(args));
            }
            return unary_node(*fn, operand);
        }

        if (auto var = variable(name)) return *var;
        throw ParseError(ParseError::Kind::unknown_identifier, start,
                         "unknown identifier '" + std::string(name) + "'");
    }

    // x<k> / y<k> with 1 <= k <= dim and no leading zeros.
    std::optional<std::size_t> variable(std::string_view name) {
        if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y') || name[1] == '0') {
            return std::nullopt;
        }
        std::size_t k = 0;
        const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), k);
        if (res.ec != std::errc() || res.ptr != name.data() + name.size()) return std::nullopt;
        if (k < 1 || k > dim_) return std::nullopt;
        Expression::Node n;
        n.op = name[0] == 'x' ? Op::var_x : Op::var_y;
        n.index = k - 1;
        return push(n);
    }

    std::string_view text_;
    std::size_t dim_;
    std::size_t pos_ = 0;
    std::vector<Expression::Node> nodes_;
};

}  // namespace

Expression parse_expression(std::string_view text, std::size_t dim) {
    if (dim == 0) throw InputError("expression dimension must be at least 1");
    return Parser(text, dim).run();
}

}  // namespace cfp
