#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lie/fields.hpp"

namespace lie {

// Candidate basis of a Lie algebra of vector fields (a presentation).
struct LieAlgebra {
    std::string name;
    std::vector<std::string> vars;
    std::vector<std::string> params;
    std::vector<VectorField> generators;

    Names names() const { return Names{vars, params}; }
    std::size_t dim() const { return vars.size(); }
    std::size_t size() const { return generators.size(); }
    // Substitute values for every parameter; the result has no parameters.
    LieAlgebra with_params(const std::vector<Rational>& values) const;
};

LieAlgebra make_algebra(std::string name, std::vector<std::string> vars, std::vector<std::string> params,
                        const std::vector<std::string>& field_texts);

// c(j, k, s) with [X_j, X_k] = sum_s c(j, k, s) X_s; entries are rational
// functions of the parameters (polynomials in every catalog case).
struct StructureConstants {
    std::size_t r = 0;
    std::vector<RatFun> c;

    StructureConstants() = default;
    explicit StructureConstants(std::size_t r) : r(r), c(r * r * r) {}
    RatFun& at(std::size_t j, std::size_t k, std::size_t s) { return c[(j * r + k) * r + s]; }
    const RatFun& at(std::size_t j, std::size_t k, std::size_t s) const { return c[(j * r + k) * r + s]; }
};

struct ClosureResult {
    bool closed = false;
    StructureConstants constants;
    // Set when not closed: generator indices (0-based) and the part of the
    // bracket outside the span.
    std::size_t j = 0, k = 0;
    VectorField residual;
};

ClosureResult check_closure(const LieAlgebra& L);
bool verify_structure(const StructureConstants& C);
std::string to_string(const StructureConstants& C, const std::vector<std::string>& params);

bool is_transitive(const LieAlgebra& L, std::uint64_t seed);

class NotTransitiveAtBase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rank of the evaluation matrix at base, parameters symbolic.
std::size_t evaluation_rank(const LieAlgebra& L, const std::vector<Rational>& base);
// Exact kernel of the evaluation map at base; parameters stay symbolic.
std::vector<VectorField> isotropy_at_point(const LieAlgebra& L, const std::vector<Rational>& base);
std::vector<Matrix<RatFun>> linear_isotropy_group(const LieAlgebra& L, const std::vector<Rational>& base);
// Linear field sum_i (A x)_i d/dx_i.
VectorField linear_field(const Matrix<RatFun>& A);
LieAlgebra reduced_algebra(const LieAlgebra& L, const std::vector<Rational>& base);

std::size_t joint_invariant_count(const LieAlgebra& L, std::size_t s, std::uint64_t seed);

struct TwoPointCriterion {
    bool holds = false;
    bool determinant_zero = false;
    bool some_minor_nonzero = false;
    std::string determinant;  // printed over the algebra's names
};
TwoPointCriterion two_point_invariant_criterion(const LieAlgebra& L, std::uint64_t seed);

// Same span over constants (exact, parameters symbolic).
bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b);

}  // namespace lie
