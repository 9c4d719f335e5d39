#include "hjvisc/hamiltonian.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace hjvisc {

ExprPtr Expr::constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::constant;
    e->value = v;
    return e;
}

ExprPtr Expr::variable(Var v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::variable;
    e->var = v;
    return e;
}

ExprPtr Expr::unary(Op op, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::op;
    e->op = op;
    e->args = {std::move(a)};
    return e;
}

ExprPtr Expr::binary(Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::op;
    e->op = op;
    e->args = {std::move(a), std::move(b)};
    return e;
}

ExprPtr Expr::power(ExprPtr base, unsigned exponent) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::op;
    e->op = Op::pow;
    e->exponent = exponent;
    e->args = {std::move(base)};
    return e;
}

bool same_tree(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::constant: return a.value == b.value;
        case Expr::Kind::variable: return a.var == b.var;
        case Expr::Kind::op: break;
    }
    if (a.op != b.op || a.exponent != b.exponent || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_tree(*a.args[i], *b.args[i])) return false;
    return true;
}

namespace {

struct Token {
    enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end } kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

std::string describe(const Token& t) {
    if (t.kind == Token::Kind::end) return "end of input";
    return "'" + std::string(t.text) + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Token::Kind::end, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::ident, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        const auto text = src_.substr(start, 1);
        switch (c) {
            case '+': return {Token::Kind::plus, start, text};
            case '-': return {Token::Kind::minus, start, text};
            case '*': return {Token::Kind::star, start, text};
            case '/': return {Token::Kind::slash, start, text};
            case '^': return {Token::Kind::caret, start, text};
            case '(': return {Token::Kind::lparen, start, text};
            case ')': return {Token::Kind::rparen, start, text};
            case ',': return {Token::Kind::comma, start, text};
            default: throw ParseError(start, "unexpected character '" + std::string(text) + "'");
        }
    }

private:
    Token number(std::size_t start) {
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                digits();
            else
                pos_ = save;
        }
        const auto text = src_.substr(start, pos_ - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ParseError(start, "malformed number '" + std::string(text) + "'");
        return {Token::Kind::number, start, text, v};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    ExprPtr parse() {
        auto e = expression();
        if (tok_.kind != Token::Kind::end)
            throw ParseError(tok_.offset, "expected operator or end of input, found " + describe(tok_));
        return e;
    }

private:
    void advance() { tok_ = lex_.next(); }

    void expect(Token::Kind k, const char* what) {
        if (tok_.kind != k) throw ParseError(tok_.offset, std::string("expected ") + what + ", found " + describe(tok_));
        advance();
    }

    ExprPtr expression() {
        auto lhs = term();
        while (tok_.kind == Token::Kind::plus || tok_.kind == Token::Kind::minus) {
            const Op op = tok_.kind == Token::Kind::plus ? Op::add : Op::sub;
            advance();
            lhs = Expr::binary(op, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        auto lhs = unary();
        while (tok_.kind == Token::Kind::star || tok_.kind == Token::Kind::slash) {
            const Op op = tok_.kind == Token::Kind::star ? Op::mul : Op::div;
            advance();
            lhs = Expr::binary(op, lhs, unary());
        }
        return lhs;
    }

    ExprPtr unary() {
        if (tok_.kind == Token::Kind::minus) {
            advance();
            return Expr::unary(Op::neg, unary());
        }
        return power();
    }

    // base ('^' exponent)?, right-associative: a^2^3 = a^(2^3).
    ExprPtr power() {
        auto base = primary();
        if (tok_.kind != Token::Kind::caret) return base;
        advance();
        return Expr::power(base, exponent());
    }

    // exponent := integer ('^' exponent)?, folded at parse time.
    unsigned exponent() {
        const Token t = tok_;
        if (t.kind != Token::Kind::number || t.number > Hamiltonian::kMaxExponent ||
            t.number != static_cast<double>(static_cast<unsigned>(t.number)))
            throw ParseError(t.offset, "expected nonnegative integer exponent <= " +
                                           std::to_string(Hamiltonian::kMaxExponent) + ", found " + describe(t));
        advance();
        const auto base = static_cast<unsigned long long>(t.number);
        if (tok_.kind != Token::Kind::caret) return static_cast<unsigned>(base);
        advance();
        const std::size_t at = tok_.offset;
        const unsigned rhs = exponent();
        unsigned long long r = 1;
        for (unsigned i = 0; i < rhs; ++i) {
            r *= base;
            if (r > Hamiltonian::kMaxExponent)
                throw ParseError(at, "exponent exceeds " + std::to_string(Hamiltonian::kMaxExponent));
        }
        return static_cast<unsigned>(r);
    }

    ExprPtr primary() {
        const Token t = tok_;
        switch (t.kind) {
            case Token::Kind::number:
                advance();
                return Expr::constant(t.number);
            case Token::Kind::lparen: {
                advance();
                auto e = expression();
                expect(Token::Kind::rparen, "')'");
                return e;
            }
            case Token::Kind::ident: {
                advance();
                if (t.text == "x") return Expr::variable(Var::x);
                if (t.text == "u") return Expr::variable(Var::u);
                if (t.text == "p") return Expr::variable(Var::p);
                if (t.text == "abs") {
                    expect(Token::Kind::lparen, "'(' after abs");
                    auto a = expression();
                    expect(Token::Kind::rparen, "')'");
                    return Expr::unary(Op::abs, a);
                }
                if (t.text == "min" || t.text == "max") {
                    expect(Token::Kind::lparen, "'(' after function name");
                    auto a = expression();
                    expect(Token::Kind::comma, "','");
                    auto b = expression();
                    expect(Token::Kind::rparen, "')'");
                    return Expr::binary(t.text == "min" ? Op::min : Op::max, a, b);
                }
                throw ParseError(t.offset, "unknown identifier '" + std::string(t.text) +
                                               "' (expected x, u, p, abs, min or max)");
            }
            default:
                throw ParseError(t.offset, "expected number, variable, function or '(', found " + describe(t));
        }
    }

    Lexer lex_;
    Token tok_{Token::Kind::end, 0, {}};
};

double evaluate(const Expr& e, double x, double u, double p) {
    switch (e.kind) {
        case Expr::Kind::constant: return e.value;
        case Expr::Kind::variable: return e.var == Var::x ? x : e.var == Var::u ? u : p;
        case Expr::Kind::op: break;
    }
    const double a = evaluate(*e.args[0], x, u, p);
    switch (e.op) {
        case Op::neg: return -a;
        case Op::abs: return std::abs(a);
        case Op::pow: {
            double r = 1.0;
            for (unsigned i = 0; i < e.exponent; ++i) r *= a;
            return r;
        }
        default: break;
    }
    const double b = evaluate(*e.args[1], x, u, p);
    switch (e.op) {
        case Op::add: return a + b;
        case Op::sub: return a - b;
        case Op::mul: return a * b;
        case Op::div:
            if (b == 0.0) throw EvalError("division by zero");
            return a / b;
        case Op::min: return b < a ? b : a;
        case Op::max: return a < b ? b : a;
        default: throw EvalError("malformed expression tree");
    }
}

// Binding strength used by the printer: larger binds tighter.
int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::op) return 5;
    switch (e.op) {
        case Op::add:
        case Op::sub: return 1;
        case Op::mul:
        case Op::div: return 2;
        case Op::neg: return 3;
        case Op::pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[32];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void print(const Expr& e, std::string& out) {
    auto wrap = [&out](const Expr& child, bool parens) {
        if (parens) out += '(';
        print(child, out);
        if (parens) out += ')';
    };
    switch (e.kind) {
        case Expr::Kind::constant: out += format_number(e.value); return;
        case Expr::Kind::variable: out += e.var == Var::x ? "x" : e.var == Var::u ? "u" : "p"; return;
        case Expr::Kind::op: break;
    }
    const int prec = precedence(e);
    switch (e.op) {
        case Op::neg:
            out += '-';
            wrap(*e.args[0], precedence(*e.args[0]) < prec);
            return;
        case Op::pow:
            wrap(*e.args[0], precedence(*e.args[0]) <= prec);
            out += '^' + std::to_string(e.exponent);
            return;
        case Op::abs:
        case Op::min:
        case Op::max:
            out += e.op == Op::abs ? "abs(" : e.op == Op::min ? "min(" : "max(";
            print(*e.args[0], out);
            if (e.args.size() > 1) {
                out += ", ";
                print(*e.args[1], out);
            }
            out += ')';
            return;
        default: {
            const char* sym = e.op == Op::add ? " + " : e.op == Op::sub ? " - " : e.op == Op::mul ? " * " : " / ";
            wrap(*e.args[0], precedence(*e.args[0]) < prec);
            out += sym;
            wrap(*e.args[1], precedence(*e.args[1]) <= prec);
            return;
        }
    }
}

bool has_division(const Expr& e) {
    if (e.kind == Expr::Kind::op && e.op == Op::div) return true;
    for (const auto& a : e.args)
        if (has_division(*a)) return true;
    return false;
}

}  // namespace

Hamiltonian Hamiltonian::parse(std::string_view src) { return Hamiltonian(Parser(src).parse()); }

Hamiltonian::Hamiltonian(ExprPtr root) : root_(std::move(root)) {
    if (!root_) throw std::invalid_argument("null expression");
}

double Hamiltonian::operator()(double x, double u, double p) const { return evaluate(*root_, x, u, p); }

std::string Hamiltonian::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool Hamiltonian::uses_division() const { return has_division(*root_); }

}  // namespace hjvisc
