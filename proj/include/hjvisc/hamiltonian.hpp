#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hjvisc {

/// Syntax error in a Hamiltonian expression, carrying the byte offset.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : std::runtime_error("offset " + std::to_string(offset) + ": " + message), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Var { x, u, p };
enum class Op { add, sub, mul, div, neg, pow, abs, min, max };

/// Expression tree node. Constants and variables are leaves; `pow` stores its
/// integer exponent in `exponent` and its base as the single child.
struct Expr {
    enum class Kind { constant, variable, op } kind = Kind::constant;
    double value = 0.0;
    Var var = Var::x;
    Op op = Op::add;
    unsigned exponent = 0;
    std::vector<std::shared_ptr<const Expr>> args;

    static std::shared_ptr<const Expr> constant(double v);
    static std::shared_ptr<const Expr> variable(Var v);
    static std::shared_ptr<const Expr> unary(Op op, std::shared_ptr<const Expr> a);
    static std::shared_ptr<const Expr> binary(Op op, std::shared_ptr<const Expr> a, std::shared_ptr<const Expr> b);
    static std::shared_ptr<const Expr> power(std::shared_ptr<const Expr> base, unsigned exponent);
};

using ExprPtr = std::shared_ptr<const Expr>;

bool same_tree(const Expr& a, const Expr& b);

/// Φ(x, u, p) for a first-order equation Φ(x, u(x), u'(x)) = 0.
///
/// Grammar, loosest to tightest: `+ -` (left), `* /` (left), unary `-`,
/// `^` (right, nonnegative integer exponents only). Calls: abs(e), min(a, b),
/// max(a, b). No implicit multiplication. Φ is assumed jointly continuous;
/// that is the caller's obligation and is not checked.
class Hamiltonian {
public:
    static constexpr unsigned kMaxExponent = 1000;

    static Hamiltonian parse(std::string_view src);
    explicit Hamiltonian(ExprPtr root);

    double operator()(double x, double u, double p) const;

    /// Canonical text with minimal parentheses; parse(to_string()) gives the same tree.
    std::string to_string() const;
    const Expr& root() const { return *root_; }
    bool uses_division() const;

private:
    ExprPtr root_;
};

}  // namespace hjvisc
