#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lie/expr.hpp"
#include "lie/linalg.hpp"

namespace lie {

// First-order derivation sum_i coeffs[i] d/dx_i.
struct VectorField {
    std::vector<Expression> coeffs;

    VectorField() = default;
    explicit VectorField(std::vector<Expression> c) : coeffs(std::move(c)) {}
    static VectorField zero(std::size_t n) { return VectorField(std::vector<Expression>(n)); }
    static VectorField partial(std::size_t n, std::size_t i);

    std::size_t dim() const { return coeffs.size(); }
    bool is_zero() const;
    bool is_polynomial() const;

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator*(const Expression& f) const;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonPolynomial : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// p, q, r for dim <= 3, d1..dn beyond.
std::vector<std::string> basis_tokens(std::size_t dim);

VectorField parse_field(const std::string& text, const std::vector<std::string>& vars,
                        const std::vector<std::string>& params);
std::string to_string(const VectorField& X, const Names& names,
                      const std::vector<std::string>& tokens = {});

VectorField bracket(const VectorField& X, const VectorField& Y);
Expression apply_to_function(const VectorField& X, const Expression& f);
std::vector<double> evaluate_at_point(const VectorField& X, const Point& p);
std::vector<Rational> evaluate_exact(const VectorField& X, const ExactPoint& p);
// Identical coefficients after canonicalisation (exact zero test of the difference).
bool fields_equal(const VectorField& X, const VectorField& Y);

struct Sampling {
    std::vector<Rational> params;  // fixed parameter values; empty means sample them
    std::size_t param_count = 0;   // used when sampling; defaults to the slots referenced
    std::size_t block = 0;         // > 0: coordinates form blocks that must not coincide
    int points = 8;
};

std::size_t generic_rank(const std::vector<VectorField>& fields, std::uint64_t seed, const Sampling& s = {});
// Rank of the coefficient matrix at one exact point (nullopt if not evaluable).
std::optional<std::size_t> rank_at(const std::vector<VectorField>& fields, const ExactPoint& p);

bool linear_independence_over_constants(const std::vector<VectorField>& fields, int max_degree = 4,
                                        std::uint64_t seed = 0);

// Degree <= 1 Taylor part at base, written in shifted coordinates.
VectorField truncate_to_linear(const VectorField& X, const std::vector<Rational>& base);
// Jacobian of the coefficients at base; entries may involve parameters.
Matrix<RatFun> jacobian_at(const VectorField& X, const std::vector<Rational>& base);

VectorField prolong_jet1(const VectorField& X);
VectorField prolong_points(const VectorField& X, std::size_t s);
VectorField prolong_differentials(const VectorField& X);

// Names for s copies of vars: x1, y1, ..., x2, y2, ...
std::vector<std::string> block_names(const std::vector<std::string>& vars, std::size_t s);
// Names for (x, dx): x, y, dx, dy.
std::vector<std::string> differential_names(const std::vector<std::string>& vars);

// Random exact point with s blocks whose coordinates never coincide across blocks.
ExactPoint random_exact_point(class Rng& rng, std::size_t dim, std::size_t params, std::size_t block = 0);

}  // namespace lie
