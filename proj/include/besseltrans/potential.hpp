#pragma once

// Potentials q(x): a small expression language, polynomials and sampled CSV data.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-' unary | base
//   base   := number | 'x' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | log | sqrt | abs

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "besseltrans/errors.hpp"
#include "besseltrans/grid.hpp"

namespace besseltrans {

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct Expr {
    enum class Kind { number, variable, add, sub, mul, div, pow, neg, call };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string func;
    std::unique_ptr<Expr> lhs, rhs;

    double eval(double x) const;
};

std::unique_ptr<Expr> parse_potential(const std::string& text);

struct PolynomialPotential {
    std::vector<double> coefficients;  ///< q = sum c_i x^i
};
struct ExpressionPotential {
    std::string text;
};
struct SampledPotential {
    std::string path;  ///< CSV of (x, q(x)) on the exact grid
};
using PotentialSpec = std::variant<ExpressionPotential, PolynomialPotential, SampledPotential>;

/// Samples q on the grid. Throws ParseError, DomainError (non-finite value,
/// grid mismatch) or std::runtime_error for unreadable files.
SampledFunction sample_potential(const PotentialSpec& spec, const UniformGrid& grid);

}  // namespace besseltrans
