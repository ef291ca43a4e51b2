#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lie/algebra.hpp"

namespace lie {

// Function of s points; variables are the s blocks of the algebra's
// variables in block_names order (x1, y1, z1, x2, ...).
struct InvariantCandidate {
    std::size_t s = 2;
    std::string text;
    Expression body;
};

InvariantCandidate parse_invariant(const std::string& text, const LieAlgebra& L, std::size_t s);

enum class VerifyMode { Symbolic, Numeric };
enum class Verdict { Proven, NumericallySupported, Refuted };
const char* to_string(Verdict v);

struct InvariantVerdict {
    Verdict verdict = Verdict::Refuted;
    std::size_t generator = 0;  // first failing generator (0-based) when refuted
    std::string witness;        // residual, or the offending numeric value
    int sampled = 0;            // numeric configurations evaluated
    int rejected = 0;           // configurations outside the domain
};

class DomainExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

InvariantVerdict verify_joint_invariant(const LieAlgebra& L, const InvariantCandidate& J, VerifyMode mode,
                                        std::uint64_t seed);

// Random exact base point where L has full rank; throws NotTransitiveAtBase.
std::vector<Rational> generic_base_point(const LieAlgebra& L, std::uint64_t seed);

bool infinitesimal_invariant_exists(const LieAlgebra& L, std::uint64_t seed);
// 2n - generic rank of the prolonged-differentials algebra at random (x, dx).
std::size_t differential_invariant_count(const LieAlgebra& L, std::uint64_t seed);
bool arc_length_invariant_exists(const LieAlgebra& L, std::uint64_t seed);

using QuadraticForm = Matrix<Expression>;
QuadraticForm lie_derivative_quadratic_form(const VectorField& X, const QuadraticForm& g);

struct EssentialCheck {
    bool essential = false;
    std::size_t joint_count = 0;
    std::size_t pair_rank = 0;
};
EssentialCheck essential_invariant_check(const LieAlgebra& L, std::size_t s,
                                         const std::vector<InvariantCandidate>& pair_invariants,
                                         std::uint64_t seed);

// Points x with J(x0, x) = level, found by bracketing along random rays from x0.
std::vector<std::vector<double>> sample_pseudosphere(const InvariantCandidate& J, const std::vector<double>& x0,
                                                     const std::vector<double>& params, double level,
                                                     std::size_t count, std::uint64_t seed);

}  // namespace lie
