#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lie/algebra.hpp"

namespace lie {

class DivergenceSuspected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NormalizationImpossible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Compiled right-hand side x' = X(x).
class FieldEvaluator {
public:
    FieldEvaluator(const VectorField& X, std::vector<double> params = {});
    std::size_t dim() const { return fs_.size(); }
    // Throws DomainError if a coefficient is undefined or not finite at x.
    void operator()(const double* x, double* out) const;
    std::vector<double> operator()(const std::vector<double>& x) const;

private:
    std::vector<NumericExpr> fs_;
    std::vector<double> params_;
};

struct SeriesResult {
    std::vector<double> point;
    double estimate = 0;  // size of the last retained terms
    int order = 0;
};

// Taylor expansion of the flow, sum_k t^k/k! X^k(x_i) at x0.
SeriesResult lie_series_flow(const VectorField& X, const std::vector<double>& x0, double t, int order = 24,
                             const std::vector<double>& params = {});

struct Trajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> x;
    std::string to_csv() const;
};

std::vector<double> rk4_step(const FieldEvaluator& f, const std::vector<double>& x, double h);
std::vector<double> rk4_flow(const FieldEvaluator& f, std::vector<double> x, double t, int steps);
Trajectory numeric_flow(const VectorField& X, const std::vector<double>& x0, double t, int steps,
                        const std::vector<double>& params = {});

// |flow(flow(x0, t1), t2) - flow(x0, t1 + t2)|_inf
double one_param_group_law_check(const VectorField& X, const std::vector<double>& x0, double t1, double t2,
                                 const std::vector<double>& params = {});

// max |J(x(t)) - J(x0)| along the RK4 flow of X over [0, t].
double invariant_drift(const VectorField& X, const Expression& J, const std::vector<double>& x0, double t, int steps,
                       const std::vector<double>& params = {});

struct Completion {
    std::vector<VectorField> fields;
    std::vector<std::string> log;
};
Completion complete_system_complete(const std::vector<VectorField>& fields, std::uint64_t seed = 0);

struct SingleSolution {
    std::vector<Expression> omegas;  // one per non-pivot variable
    Expression divisor;              // X was divided by this coefficient
    bool terminated = true;          // every series terminated before the order cap
    bool exact = true;               // X(omega) = 0 proven symbolically
    double max_residual = 0;         // numeric check when not exact
};
SingleSolution complete_system_solve_single(const VectorField& X, std::size_t pivot, int order = 12,
                                            std::uint64_t seed = 0);

struct MonodromyOptions {
    int steps = 20000;
    int starts = 8;
    double radius = 0.1;
    std::vector<double> params;
    std::uint64_t seed = 0;
};

struct MonodromyResult {
    std::optional<double> period;
    double min_distance = 0;  // closest approach of the first start after leaving it
    std::vector<double> returns;  // first return time per start (NaN if none)
    std::string diagnostics;
};
MonodromyResult monodromy_period(const VectorField& X, const std::vector<double>& x0, double t_max, double tol,
                                 const MonodromyOptions& opt = {});

// Generator of the subgroup fixing p0 and p1 (requires a one-dimensional
// kernel), scaled so that its linear part at p0 has largest imaginary
// eigenvalue 1, or else largest entry 1.
VectorField two_point_stabilizer(const LieAlgebra& L, const std::vector<Rational>& p0,
                                 const std::vector<Rational>& p1);

}  // namespace lie
