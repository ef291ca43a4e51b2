#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lie/poly.hpp"
#include "lie/ratfun.hpp"

namespace lie {

enum class FnKind { Log, Exp, Atan, Sqrt };
const char* fn_name(FnKind k);

// Const, Var and Param are reported for Poly nodes that reduce to a single
// constant, variable or parameter. Every polynomial subtree is a Poly node.
enum class NodeKind { Const, Var, Param, Poly, Sum, Product, Pow, Fn };

struct Names {
    std::vector<std::string> vars;
    std::vector<std::string> params;
};

struct Point {
    std::vector<double> coords;
    std::vector<double> params;
};

struct ExactPoint {
    std::vector<Rational> coords;
    std::vector<Rational> params;
};

class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, std::string subexpr)
        : std::runtime_error(what + ": " + subexpr), subexpression(std::move(subexpr)) {}
    std::string subexpression;
};

class Expression {
public:
    struct Node;

    Expression();
    Expression(const Poly& p);
    Expression(const Rational& c);
    Expression(long c);

    static Expression var(std::uint32_t i) { return Expression(Poly::var(i)); }
    static Expression param(std::uint32_t i) { return Expression(Poly::param(i)); }
    static Expression sum(std::vector<Expression> terms);
    static Expression product(std::vector<Expression> factors);
    static Expression pow(const Expression& base, int k);
    static Expression fn(FnKind k, const Expression& arg);

    NodeKind kind() const;
    bool is_poly() const;
    const Poly& poly() const;  // valid when is_poly()
    const std::vector<Expression>& args() const;
    int exponent() const;
    FnKind fn_kind() const;
    // Structural identity key, independent of names.
    const std::string& key() const;

    bool is_zero() const { return is_poly() && poly().is_zero(); }
    bool contains_fn() const;
    // Number of variable / parameter slots referenced (max index + 1).
    std::uint32_t var_slots() const;
    std::uint32_t param_slots() const;
    bool depends_on_var(std::uint32_t i) const;

    Expression operator+(const Expression& o) const;
    Expression operator-(const Expression& o) const;
    Expression operator-() const;
    Expression operator*(const Expression& o) const;
    Expression operator/(const Expression& o) const;

    std::string to_string(const Names& names) const;
    std::string to_string() const;  // generic names v_i, c_i

private:
    explicit Expression(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

// Fn nodes become kernel symbols so that a tree can be read as a rational
// function in variables, parameters and kernels.
class KernelTable {
public:
    Sym intern(const Expression& fn_node);
    const Expression& expr(std::uint32_t index) const { return exprs_[index]; }
    std::size_t size() const { return exprs_.size(); }

private:
    std::vector<Expression> exprs_;
    std::map<std::string, std::uint32_t> index_;
};

RatFun to_ratfun(const Expression& e, KernelTable& kernels);
Expression from_ratfun(const RatFun& r, const KernelTable& kernels);
// Rational-function normal form (numerator over factored denominator).
Expression normalize(const Expression& e);

Expression differentiate(const Expression& e, std::uint32_t var);

double evaluate_numeric(const Expression& e, const Point& p);
std::optional<Rational> evaluate_exact(const Expression& e, const ExactPoint& p);

Expression substitute(const Expression& e, const std::map<Sym, Rational>& vals);
Expression substitute_params(const Expression& e, const std::vector<Rational>& params);
Expression rename_symbols(const Expression& e, const std::function<Sym(Sym)>& f);
// Replace variable i by the polynomial v.
Expression substitute_var(const Expression& e, std::uint32_t i, const Poly& v);

enum class ZeroVerdict { Yes, No, Unknown };
const char* to_string(ZeroVerdict v);
ZeroVerdict is_identically_zero(const Expression& e, std::uint64_t seed = 0);

// Compiled form for repeated double evaluation.
class NumericExpr {
public:
    NumericExpr() = default;
    explicit NumericExpr(const Expression& e);
    double operator()(const double* x, const double* params) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), offset(offset) {}
    std::size_t offset;
};

Expression parse_expression(const std::string& text, const std::vector<std::string>& vars,
                            const std::vector<std::string>& params);

}  // namespace lie
