#include "besseltrans/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace besseltrans {

namespace {

const char* const kFunctions[] = {"sin", "cos", "exp", "log", "sqrt", "abs"};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    std::unique_ptr<Expr> parse() {
        skip();
        if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
        auto e = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static std::unique_ptr<Expr> node(Expr::Kind k, std::unique_ptr<Expr> a, std::unique_ptr<Expr> b = nullptr) {
        auto e = std::make_unique<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }

    std::unique_ptr<Expr> expr() {
        auto e = term();
        for (;;) {
            if (accept('+')) e = node(Expr::Kind::add, std::move(e), term());
            else if (accept('-')) e = node(Expr::Kind::sub, std::move(e), term());
            else return e;
        }
    }
    std::unique_ptr<Expr> term() {
        auto e = unary();
        for (;;) {
            if (accept('*')) e = node(Expr::Kind::mul, std::move(e), unary());
            else if (accept('/')) e = node(Expr::Kind::div, std::move(e), unary());
            else return e;
        }
    }
    // -x^2 is -(x^2); the exponent may itself be negated, x^-1.
    std::unique_ptr<Expr> unary() {
        if (accept('-')) return node(Expr::Kind::neg, unary());
        return factor();
    }
    std::unique_ptr<Expr> factor() {
        auto e = base();
        if (accept('^')) return node(Expr::Kind::pow, std::move(e), unary());
        return e;
    }
    std::unique_ptr<Expr> base() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) throw ParseError("malformed number", pos_);
            pos_ += static_cast<std::size_t>(end - begin);
            auto e = std::make_unique<Expr>();
            e->value = v;
            return e;
        }
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") {
                auto e = std::make_unique<Expr>();
                e->kind = Expr::Kind::variable;
                return e;
            }
            for (const char* f : kFunctions) {
                if (name != f) continue;
                if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
                auto e = node(Expr::Kind::call, expr());
                e->func = name;
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                return e;
            }
            throw ParseError("unknown identifier '" + name + "'", start);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

double Expr::eval(double x) const {
    switch (kind) {
        case Kind::number: return value;
        case Kind::variable: return x;
        case Kind::add: return lhs->eval(x) + rhs->eval(x);
        case Kind::sub: return lhs->eval(x) - rhs->eval(x);
        case Kind::mul: return lhs->eval(x) * rhs->eval(x);
        case Kind::div: return lhs->eval(x) / rhs->eval(x);
        case Kind::pow: return std::pow(lhs->eval(x), rhs->eval(x));
        case Kind::neg: return -lhs->eval(x);
        case Kind::call: {
            const double a = lhs->eval(x);
            if (func == "sin") return std::sin(a);
            if (func == "cos") return std::cos(a);
            if (func == "exp") return std::exp(a);
            if (func == "abs") return std::abs(a);
            if (func == "sqrt") {
                if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a) + " at x = " + std::to_string(x));
                return std::sqrt(a);
            }
            if (func == "log") {
                if (!(a > 0.0)) throw DomainError("log of nonpositive value " + std::to_string(a) + " at x = " + std::to_string(x));
                return std::log(a);
            }
        }
    }
    throw DomainError("corrupt expression tree");
}

std::unique_ptr<Expr> parse_potential(const std::string& text) { return Parser(text).parse(); }

namespace {

SampledFunction checked(const UniformGrid& grid, std::vector<double> v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw DomainError("potential is not finite at x = " + std::to_string(grid.x(i)));
    return SampledFunction(grid, std::move(v));
}

SampledFunction read_samples(const std::string& path, const UniformGrid& grid) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open potential samples '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x = 0.0, q = 0.0;
        if (!(ls >> x >> q)) {
            if (values.empty() && lineno == 1) continue;  // header
            throw DomainError(path + ":" + std::to_string(lineno) + ": expected 'x,q'");
        }
        const std::size_t i = values.size();
        if (i >= grid.size()) throw DomainError(path + ": more samples than grid points");
        if (std::abs(x - grid.x(i)) > 1e-9 * std::max(1.0, grid.b()))
            throw DomainError(path + ":" + std::to_string(lineno) + ": x = " + std::to_string(x) +
                              " does not match grid node " + std::to_string(grid.x(i)));
        values.push_back(q);
    }
    if (values.size() != grid.size())
        throw DomainError(path + ": " + std::to_string(values.size()) + " samples, grid has " +
                          std::to_string(grid.size()));
    return checked(grid, std::move(values));
}

}  // namespace

SampledFunction sample_potential(const PotentialSpec& spec, const UniformGrid& grid) {
    if (const auto* e = std::get_if<ExpressionPotential>(&spec)) {
        const auto tree = parse_potential(e->text);
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = tree->eval(grid.x(i));
        return checked(grid, std::move(v));
    }
    if (const auto* p = std::get_if<PolynomialPotential>(&spec)) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double acc = 0.0;
            for (auto it = p->coefficients.rbegin(); it != p->coefficients.rend(); ++it) acc = acc * grid.x(i) + *it;
            v[i] = acc;
        }
        return checked(grid, std::move(v));
    }
    return read_samples(std::get<SampledPotential>(spec).path, grid);
}

}  // namespace besseltrans
