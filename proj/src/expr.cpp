#include "sumapprox/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sumapprox {

struct Expr::Node {
    enum class Op { constant, variable, add, sub, mul, neg, min2, max2, abs1 };
    Op op;
    double value = 0.0;
    int var = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("expression error at offset " + std::to_string(pos) +
                                    ": " + why);
    }

    NodePtr make(Expr::Node n) { return std::make_shared<Expr::Node>(std::move(n)); }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip();
            if (eat('+'))
                lhs = make({Expr::Node::Op::add, 0, 0, lhs, term()});
            else if (eat('-'))
                lhs = make({Expr::Node::Op::sub, 0, 0, lhs, term()});
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (eat('*')) lhs = make({Expr::Node::Op::mul, 0, 0, lhs, factor()});
        return lhs;
    }

    NodePtr factor() {
        skip();
        if (eat('-')) return make({Expr::Node::Op::neg, 0, 0, factor(), nullptr});
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s.c_str() + pos, &end);
            pos = end - s.c_str();
            return make({Expr::Node::Op::constant, v, 0, nullptr, nullptr});
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
            const std::string name = s.substr(start, pos - start);
            if (name == "x" || name == "y" || name == "z") {
                const int var = name == "x" ? 0 : name == "y" ? 1 : 2;
                return make({Expr::Node::Op::variable, 0, var, nullptr, nullptr});
            }
            if (name == "abs") {
                if (!eat('(')) fail("abs needs '('");
                NodePtr a = expr();
                if (!eat(')')) fail("expected ')'");
                return make({Expr::Node::Op::abs1, 0, 0, a, nullptr});
            }
            if (name == "min" || name == "max") {
                if (!eat('(')) fail(name + " needs '('");
                NodePtr a = expr();
                if (!eat(',')) fail(name + " needs two arguments");
                NodePtr b = expr();
                if (!eat(')')) fail("expected ')'");
                const auto op =
                    name == "min" ? Expr::Node::Op::min2 : Expr::Node::Op::max2;
                return make({op, 0, 0, a, b});
            }
            fail("unknown name '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval_node(const Expr::Node& n, const std::vector<double>& coords) {
    using Op = Expr::Node::Op;
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::variable:
            if (n.var >= static_cast<int>(coords.size()))
                throw std::invalid_argument("expression uses a coordinate the domain lacks");
            return coords[n.var];
        case Op::add: return eval_node(*n.lhs, coords) + eval_node(*n.rhs, coords);
        case Op::sub: return eval_node(*n.lhs, coords) - eval_node(*n.rhs, coords);
        case Op::mul: return eval_node(*n.lhs, coords) * eval_node(*n.rhs, coords);
        case Op::neg: return -eval_node(*n.lhs, coords);
        case Op::min2: return std::min(eval_node(*n.lhs, coords), eval_node(*n.rhs, coords));
        case Op::max2: return std::max(eval_node(*n.lhs, coords), eval_node(*n.rhs, coords));
        case Op::abs1: return std::fabs(eval_node(*n.lhs, coords));
    }
    throw std::logic_error("bad expression node");
}

}  // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

double Expr::eval(const std::vector<double>& coords) const {
    return eval_node(*root_, coords);
}

Field Expr::eval_field(const Domain& d) const {
    Field f(d.num_points());
    for (int p = 0; p < d.num_points(); ++p) f[p] = eval(d.points[p].coords);
    return f;
}

}  // namespace sumapprox
