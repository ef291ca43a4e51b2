#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "lie/flows.hpp"
#include "lie/invariants.hpp"

using namespace lie;

namespace {
const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<std::string> XY{"x", "y"};
VectorField F(const std::string& s, const std::vector<std::string>& v = XYZ) { return parse_field(s, v, {}); }
double maxdiff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}
LieAlgebra log_radius() {
    return make_algebra("log_radius", XYZ, {},
                        {"p", "q", "x*p + y*q + r", "y*p - x*q", "(x^2 - y^2)*p + 2*x*y*q + 2*x*r",
                         "2*x*y*p + (y^2 - x^2)*q + 2*y*r"});
}
}  // namespace

TEST_CASE("Lie series") {
    auto a = lie_series_flow(F("p"), {1, 2, 3}, 0.7);
    REQUIRE(maxdiff(a.point, {1.7, 2, 3}) < 1e-15);
    auto b = lie_series_flow(parse_field("x*p", {"x"}, {}), {1}, 0.5, 30);
    REQUIRE(std::abs(b.point[0] - std::exp(0.5)) < 1e-12);
    double t = std::numbers::pi / 3;
    auto c = lie_series_flow(F("y*p - x*q", XY), {1, 0}, t, 40);
    REQUIRE(maxdiff(c.point, {std::cos(t), -std::sin(t)}) < 1e-10);
    REQUIRE(c.estimate < 1e-10);
    // x' = x^2 blows up at t = 1.
    REQUIRE_THROWS_AS(lie_series_flow(parse_field("x^2*p", {"x"}, {}), {1}, 2.0), DivergenceSuspected);
    REQUIRE_THROWS_AS(lie_series_flow(F("log(x)*p"), {1, 1, 1}, 0.1), NonPolynomial);
}

TEST_CASE("RK4 flows") {
    auto tr = numeric_flow(F("p"), {0, 0, 0}, 1.0, 10);
    REQUIRE(tr.t.size() == 11);
    REQUIRE(maxdiff(tr.x.back(), {1, 0, 0}) < 1e-15);
    VectorField X = F("x^2*p + 2*x*r");
    auto ls = lie_series_flow(X, {0.5, 0.2, -0.3}, 0.2);
    auto rk = numeric_flow(X, {0.5, 0.2, -0.3}, 0.2, 400);
    REQUIRE(maxdiff(ls.point, rk.x.back()) < 1e-8);
    // Fourth order: halving the step divides the error by about 16.
    VectorField R = F("y*p - x*q", XY);
    double T = 2.0;
    std::vector<double> exact{std::cos(T), -std::sin(T)};
    double e1 = maxdiff(numeric_flow(R, {1, 0}, T, 20).x.back(), exact);
    double e2 = maxdiff(numeric_flow(R, {1, 0}, T, 40).x.back(), exact);
    REQUIRE(e1 / e2 > 14);
    REQUIRE(e1 / e2 < 18);
    REQUIRE(tr.to_csv().substr(0, 6) == "0,0,0,");
}

TEST_CASE("one-parameter group law") {
    REQUIRE(one_param_group_law_check(F("p"), {0, 1, 2}, 0.3, 0.4) < 1e-14);
    REQUIRE(one_param_group_law_check(F("y*p - x*q", XY), {1, 0.5}, 0.7, 0.7) < 1e-9);
    REQUIRE(one_param_group_law_check(F("x^2*p + x*y*q + 1/2*y^2*r"), {0.3, -0.2, 0.5}, 0.1, 0.2) < 1e-8);
}

TEST_CASE("invariants are conserved along prolonged flows") {
    LieAlgebra E = make_algebra("e", XYZ, {}, {"p", "q", "r", "x*q - y*p", "y*r - z*q", "z*p - x*r"});
    auto J = parse_invariant("(x1 - x2)^2 + (y1 - y2)^2 + (z1 - z2)^2", E, 2);
    for (auto& X : E.generators)
        REQUIRE(invariant_drift(prolong_points(X, 2), J.body, {0.1, 0.2, 0.3, -0.5, 0.4, 1.0}, 1.0, 10000) < 1e-6);
}

TEST_CASE("complete systems") {
    std::vector<std::string> x3{"x1", "x2", "x3"};
    Completion c = complete_system_complete({parse_field("d1", x3, {}), parse_field("d2 + x1*d3", x3, {})});
    REQUIRE(c.fields.size() == 3);
    REQUIRE(fields_equal(c.fields[2], parse_field("d3", x3, {})));
    REQUIRE(c.log == std::vector<std::string>{"adjoined [Y1, Y2]"});

    Completion u = complete_system_complete({F("p"), F("q")});
    REQUIRE(u.fields.size() == 2);
    REQUIRE(u.log.empty());

    std::vector<VectorField> e2;
    for (auto s : {"p", "q", "r", "x*q - y*p", "y*r - z*q", "z*p - x*r"}) e2.push_back(prolong_points(F(s), 2));
    Completion ec = complete_system_complete(e2);
    REQUIRE(ec.fields.size() == 5);
    for (auto& l : ec.log) REQUIRE(l.rfind("pruned", 0) == 0);

    Completion d = complete_system_complete({F("q"), F("3*q"), F("x*q")});
    REQUIRE(d.fields.size() == 1);
    REQUIRE(d.log.size() == 2);
}

TEST_CASE("completion certificate") {
    Completion c = complete_system_complete({F("p + y*r"), F("q + x^2*r")});
    REQUIRE(c.fields.size() <= 3);
    std::size_t r = generic_rank(c.fields, 1);
    for (std::size_t i = 0; i < c.fields.size(); ++i)
        for (std::size_t j = i + 1; j < c.fields.size(); ++j) {
            auto with = c.fields;
            with.push_back(bracket(c.fields[i], c.fields[j]));
            REQUIRE(generic_rank(with, 1) == r);
        }
}

TEST_CASE("solving a single equation") {
    auto names = Names{XYZ, {}};
    SingleSolution a = complete_system_solve_single(F("p", XY), 0);
    REQUIRE(a.omegas.size() == 1);
    REQUIRE(a.omegas[0].to_string(Names{XY, {}}) == "y");

    SingleSolution b = complete_system_solve_single(F("p + x*r"), 0);
    REQUIRE(b.exact);
    REQUIRE(b.terminated);
    REQUIRE(b.omegas[0].to_string(names) == "y");
    REQUIRE(is_identically_zero(b.omegas[1] - parse_expression("z - x^2/2", XYZ, {})) == ZeroVerdict::Yes);

    SingleSolution c = complete_system_solve_single(F("p + y*r"), 0);
    REQUIRE(is_identically_zero(c.omegas[1] - parse_expression("z - x*y", XYZ, {})) == ZeroVerdict::Yes);

    // Division by the pivot coefficient.
    SingleSolution d = complete_system_solve_single(F("2*p + 4*x*r"), 0);
    REQUIRE(is_identically_zero(d.omegas[1] - parse_expression("z - x^2", XYZ, {})) == ZeroVerdict::Yes);

    // z*exp(-x) is only reached as a truncated series; checked numerically.
    SingleSolution e = complete_system_solve_single(F("p + z*r"), 0, 30);
    REQUIRE_FALSE(e.terminated);
    REQUIRE(e.max_residual < 1e-10);

    REQUIRE_THROWS_AS(complete_system_solve_single(F("q"), 0), NormalizationImpossible);
}

TEST_CASE("monodromy of a rotation") {
    auto m = monodromy_period(F("y*p - x*q", XY), {1, 0.5}, 10, 1e-6);
    REQUIRE(m.period);
    REQUIRE(std::abs(*m.period - 2 * std::numbers::pi) < 1e-6);
    // Translation never returns.
    REQUIRE_FALSE(monodromy_period(F("p", XY), {1, 0.5}, 10, 1e-6).period);
}

TEST_CASE("monodromy of a two-point stabilizer") {
    LieAlgebra L = log_radius();
    VectorField W = two_point_stabilizer(L, {0, 0, 0}, {1, 1, 0});
    // The stabilizer vanishes at both points.
    for (auto& c : W.coeffs) {
        REQUIRE(evaluate_exact(c, ExactPoint{{0, 0, 0}, {}}) == Rational(0));
        REQUIRE(evaluate_exact(c, ExactPoint{{1, 1, 0}, {}}) == Rational(0));
    }
    std::vector<double> x0{0.3, -0.4, 0.2};
    auto m = monodromy_period(W, x0, 10, 1e-6);
    INFO(m.diagnostics);
    REQUIRE(m.period);
    REQUIRE(std::abs(*m.period - 2 * std::numbers::pi) < 1e-6);

    // Closed form of the planar part: w(t) = a w / ((a - w) e^{it} + w), with
    // a = x0 + i y0 of the second fixed point; time may run backwards
    // depending on the sign of the generator.
    std::complex<double> a(1, 1), w(x0[0], x0[1]);
    double t = 1.3;
    auto tr = numeric_flow(W, x0, t, 5000);
    auto closed = [&](double s) { return a * w / ((a - w) * std::exp(std::complex<double>(0, s)) + w); };
    std::complex<double> got(tr.x.back()[0], tr.x.back()[1]);
    double err = std::min(std::abs(got - closed(t)), std::abs(got - closed(-t)));
    REQUIRE(err < 1e-9);
    // z moves on the pseudosphere centred at the origin.
    double zc = x0[2] + std::log(std::norm(got) / std::norm(w));
    REQUIRE(std::abs(tr.x.back()[2] - zc) < 1e-9);

    // Reduced group: the stabilizer is (x0 y - y0 x) r up to scale, never periodic.
    LieAlgebra R = reduced_algebra(L, {0, 0, 0});
    VectorField V = two_point_stabilizer(R, {0, 0, 0}, {1, 1, 0});
    REQUIRE(same_span({V}, {F("(y - x)*r")}));
    auto n = monodromy_period(V, x0, 100, 1e-6);
    REQUIRE_FALSE(n.period);
}
