#include "whw/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "whw/errors.hpp"

namespace whw {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double x) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Num : Node {
    double v;
    explicit Num(double val) : v(val) {}
    double eval(double) const override { return v; }
};
struct Var : Node {
    double eval(double x) const override { return x; }
};
struct Unary : Node {
    double (*fn)(double);
    NodePtr arg;
    Unary(double (*f)(double), NodePtr a) : fn(f), arg(std::move(a)) {}
    double eval(double x) const override { return fn(arg->eval(x)); }
};
struct Binary : Node {
    char op;
    NodePtr lhs, rhs;
    Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
    double eval(double x) const override {
        const double a = lhs->eval(x), b = rhs->eval(x);
        switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
        }
        return 0.0;
    }
};

class Parser {
public:
    explicit Parser(const std::string& s) : text_(s) {}

    NodePtr parse() {
        NodePtr e = sum();
        skip_ws();
        if (pos_ != text_.size())
            throw ConfigError("expression: trailing input at '" + text_.substr(pos_) + "'");
        return e;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (eat('+')) lhs = std::make_unique<Binary>('+', std::move(lhs), product());
            else if (eat('-')) lhs = std::make_unique<Binary>('-', std::move(lhs), product());
            else return lhs;
        }
    }
    NodePtr product() {
        NodePtr lhs = power();
        for (;;) {
            if (eat('*')) lhs = std::make_unique<Binary>('*', std::move(lhs), power());
            else if (eat('/')) lhs = std::make_unique<Binary>('/', std::move(lhs), power());
            else return lhs;
        }
    }
    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) // right-associative
            return std::make_unique<Binary>('^', std::move(base), power());
        return base;
    }
    NodePtr atom() {
        skip_ws();
        if (eat('-')) return std::make_unique<Binary>('-', std::make_unique<Num>(0.0), atom());
        if (eat('+')) return atom();
        if (eat('(')) {
            NodePtr e = sum();
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return e;
        }
        if (pos_ >= text_.size()) throw ConfigError("expression: unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ConfigError(std::string("expression: unexpected character '") + c + "'");
    }
    NodePtr number() {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
            ++end;
        const std::string tok = text_.substr(pos_, end - pos_);
        pos_ = end;
        try {
            return std::make_unique<Num>(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("expression: bad number '" + tok + "'");
        }
    }
    NodePtr identifier() {
        std::size_t end = pos_;
        while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
        const std::string name = text_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "x" || name == "xi") return std::make_unique<Var>();
        if (name == "pi") return std::make_unique<Num>(std::numbers::pi);
        static const std::map<std::string, double (*)(double)> fns = {
            {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
            {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
            {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
            {"abs", std::fabs}};
        const auto it = fns.find(name);
        if (it == fns.end()) throw ConfigError("expression: unknown identifier '" + name + "'");
        if (!eat('(')) throw ConfigError("expression: expected '(' after '" + name + "'");
        NodePtr arg = sum();
        if (!eat(')')) throw ConfigError("expression: missing ')'");
        return std::make_unique<Unary>(it->second, std::move(arg));
    }
};

} // namespace

std::function<double(double)> parse_expression(const std::string& text) {
    Parser p(text);
    std::shared_ptr<Node> root{p.parse().release()};
    return [root](double x) { return root->eval(x); };
}

} // namespace whw
