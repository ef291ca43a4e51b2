#include <catch_amalgamated.hpp>

#include "lie/algebra.hpp"

using namespace lie;

namespace {
const std::vector<std::string> XYZ{"x", "y", "z"};

LieAlgebra A(const std::string& name, const std::vector<std::string>& fs, const std::vector<std::string>& params = {}) {
    return make_algebra(name, XYZ, params, fs);
}
std::vector<VectorField> Fs(const std::vector<std::string>& fs, const std::vector<std::string>& params = {}) {
    std::vector<VectorField> out;
    for (auto& s : fs) out.push_back(parse_field(s, XYZ, params));
    return out;
}

const std::vector<Rational> O{0, 0, 0};

LieAlgebra euclid() { return A("euclid", {"p", "q", "r", "x*q - y*p", "y*r - z*q", "z*p - x*r"}); }
LieAlgebra chain4() { return A("chain4", {"q", "x*q + r", "x^2*q + 2*x*r", "x^3*q + 3*x^2*r", "x^4*q + 4*x^3*r", "p"}); }
LieAlgebra chain3() { return A("chain3", {"q", "x*q + r", "x^2*q + 2*x*r", "x^3*q + 3*x^2*r", "p", "x*p - z*r"}); }
LieAlgebra shear_c() {
    return A("shear_c", {"q", "p", "x*q + r", "x^2*q + 2*x*r", "x*p + y*q + c*r", "x^2*p + 2*x*y*q + 2*(c*x + y)*r"},
             {"c"});
}
LieAlgebra log_radius() {
    return A("log_radius", {"p", "q", "x*p + y*q + r", "y*p - x*q", "(x^2 - y^2)*p + 2*x*y*q + 2*x*r",
                    "2*x*y*p + (y^2 - x^2)*q + 2*y*r"});
}
LieAlgebra affine_jet() { return A("affine_jet", {"p", "q", "x*q + r", "y*q + z*r", "x*p - z*r", "y*p - z^2*r"}); }
LieAlgebra rejected_jet() {
    return A("rejected_jet", {"p", "q", "x*q + r", "x*p + y*q", "x*p - y*q - 2*z*r", "x^2*p + x*y*q + (y - x*z)*r"});
}
LieAlgebra parabolic_c() {
    return A("parabolic_c", {"p", "q", "x*q + r", "x*p + y*q + c*r", "x^2*q + 2*x*r", "x^2*p + 2*x*y*q + 2*(y + c*x)*r"},
             {"c"});
}
LieAlgebra two_lines() {
    return A("two_lines", {"p", "q", "x*p + r", "y*q + c*r", "x^2*p + 2*x*r", "y^2*q + 2*c*y*r"}, {"c"});
}
LieAlgebra heisenberg() { return A("heisenberg", {"p - y*r", "q + x*r", "r", "x*q", "x*p - y*q", "y*p"}); }
LieAlgebra parabolic() { return A("parabolic", {"p", "q", "r", "2*x*p + y*q", "x*q + y*r", "x^2*p + x*y*q + 1/2*y^2*r"}); }
}  // namespace

TEST_CASE("closure and structure constants") {
    ClosureResult e = check_closure(euclid());
    REQUIRE(e.closed);
    REQUIRE(verify_structure(e.constants));
    // [xq - yp, yr - zq] = xr - zp = -(zp - xr)
    REQUIRE(e.constants.at(3, 4, 5) == RatFun(-1));
    REQUIRE(e.constants.at(4, 3, 5) == RatFun(1));

    LieAlgebra bad = make_algebra("bad", {"x", "y"}, {}, {"p", "x*q"});
    ClosureResult b = check_closure(bad);
    REQUIRE_FALSE(b.closed);
    REQUIRE(b.j == 0);
    REQUIRE(b.k == 1);
    REQUIRE(fields_equal(b.residual, parse_field("q", {"x", "y"}, {})));

    ClosureResult c38 = check_closure(two_lines());
    REQUIRE(c38.closed);
    REQUIRE(verify_structure(c38.constants));
    REQUIRE(c38.constants.at(0, 4, 2) == RatFun(2));

    LieAlgebra parabolic_family = A("parabolic_family", {"p", "q", "r", "2*x*p + y*q", "x*q + y*r", "x^2*p + x*y*q + (1/2*y^2 + c*x)*r"}, {"c"});
    ClosureResult c51 = check_closure(parabolic_family);
    REQUIRE(c51.closed);
    REQUIRE(verify_structure(c51.constants));
    REQUIRE(c51.constants.at(0, 5, 2) == RatFun(Poly::param(0)));
    REQUIRE(to_string(c51.constants, {"c"}).find("[X1, X6] = c*X3 + X4") != std::string::npos);
}

TEST_CASE("verify_structure rejects corrupted constants") {
    ClosureResult rot = check_closure(A("rot", {"x*q - y*p", "y*r - z*q", "z*p - x*r"}));
    REQUIRE(rot.closed);
    REQUIRE(verify_structure(rot.constants));
    StructureConstants bad = rot.constants;
    bad.at(0, 1, 2) = -bad.at(0, 1, 2);
    REQUIRE_FALSE(verify_structure(bad));
    // Antisymmetric but violating Jacobi: [X1,X2] = X1, [X1,X3] = X1, [X2,X3] = X2.
    StructureConstants j(3);
    j.at(0, 1, 0) = 1;
    j.at(1, 0, 0) = -1;
    j.at(0, 2, 0) = 1;
    j.at(2, 0, 0) = -1;
    j.at(1, 2, 1) = 1;
    j.at(2, 1, 1) = -1;
    REQUIRE_FALSE(verify_structure(j));
}

TEST_CASE("closure holds for the worked groups") {
    for (auto L : {chain4(), chain3(), shear_c(), log_radius(), affine_jet(), rejected_jet(), parabolic_c(), two_lines(), heisenberg(), parabolic()}) {
        INFO(L.name);
        ClosureResult c = check_closure(L);
        REQUIRE(c.closed);
        REQUIRE(verify_structure(c.constants));
    }
}

TEST_CASE("transitivity") {
    REQUIRE(is_transitive(euclid(), 1));
    REQUIRE_FALSE(is_transitive(A("line", {"q", "x*q", "x^2*q"}), 1));
    LieAlgebra ab_family = A("ab_family",
                       {"p", "q", "x*p + y*q + a*r", "y*p - x*q + b*r", "(x^2 - y^2)*p + 2*x*y*q + 2*(a*x - b*y)*r",
                        "2*x*y*p + (y^2 - x^2)*q + 2*(b*x + a*y)*r"},
                       {"a", "b"});
    REQUIRE(is_transitive(ab_family, 1));
    REQUIRE_FALSE(is_transitive(ab_family.with_params({0, 0}), 1));
}

TEST_CASE("isotropy at the origin") {
    REQUIRE(same_span(isotropy_at_point(affine_jet(), O), Fs({"y*p - z^2*r", "x*p - y*q - 2*z*r", "x*p + y*q"})));
    REQUIRE(same_span(isotropy_at_point(euclid(), O), Fs({"x*q - y*p", "y*r - z*q", "z*p - x*r"})));
    auto g = log_radius();
    REQUIRE(same_span(isotropy_at_point(g, O), {g.generators[3], g.generators[4], g.generators[5]}));
    for (auto& Y : isotropy_at_point(parabolic_c(), O))
        for (auto& c : Y.coeffs) REQUIRE(substitute(c, {{make_sym(SymKind::Var, 0), 0},
                                                        {make_sym(SymKind::Var, 1), 0},
                                                        {make_sym(SymKind::Var, 2), 0}})
                                             .is_zero());
    REQUIRE(same_span(isotropy_at_point(parabolic_c(), O),
                      Fs({"x*p + (y - c*x)*q", "x^2*q + 2*x*r", "x^2*p + 2*x*y*q + 2*(y + c*x)*r"}, {"c"})));
}

TEST_CASE("linear isotropy and reduced algebras") {
    auto lin = [](const LieAlgebra& L) {
        std::vector<VectorField> out;
        for (auto& M : linear_isotropy_group(L, O)) out.push_back(linear_field(M));
        return out;
    };
    REQUIRE(same_span(lin(log_radius()), Fs({"y*p - x*q", "x*r", "y*r"})));
    REQUIRE(same_span(lin(euclid()), Fs({"x*q - y*p", "y*r - z*q", "z*p - x*r"})));
    REQUIRE(same_span(lin(shear_c()), Fs({"x*r", "x*p + y*q - c*x*q", "y*r"}, {"c"})));

    REQUIRE(same_span(reduced_algebra(chain4(), O).generators, Fs({"q", "r", "x*r", "p"})));
    REQUIRE(same_span(reduced_algebra(chain3(), O).generators, Fs({"q", "r", "x*r", "p", "x*p - z*r"})));
    REQUIRE(same_span(reduced_algebra(log_radius(), O).generators, Fs({"p", "q", "r", "y*p - x*q", "x*r", "y*r"})));
    REQUIRE(reduced_algebra(chain4(), O).size() == 4);
    REQUIRE_THROWS_AS(reduced_algebra(A("line", {"q", "x*q", "x^2*q"}), O), NotTransitiveAtBase);
    for (auto L : {chain4(), chain3(), shear_c(), log_radius(), parabolic_c()}) REQUIRE(check_closure(reduced_algebra(L, O)).closed);
}

TEST_CASE("joint invariant counts") {
    REQUIRE(joint_invariant_count(chain4(), 2, 1) == 1);
    REQUIRE(joint_invariant_count(reduced_algebra(chain4(), O), 2, 1) == 2);
    REQUIRE(joint_invariant_count(chain3(), 2, 1) == 0);
    REQUIRE(joint_invariant_count(reduced_algebra(chain3(), O), 2, 1) == 1);
    for (auto L : {euclid(), chain4(), log_radius(), parabolic_c()}) {
        std::size_t n = L.dim();
        REQUIRE(joint_invariant_count(L, 1, 3) == n - generic_rank(L.generators, 3));
        REQUIRE(joint_invariant_count(L, 3, 3) >= joint_invariant_count(L, 2, 3));
    }
}

TEST_CASE("two-point criterion") {
    REQUIRE(two_point_invariant_criterion(parabolic_c(), 1).holds);
    REQUIRE(two_point_invariant_criterion(two_lines(), 1).holds);
    REQUIRE(two_point_invariant_criterion(heisenberg(), 1).holds);
    REQUIRE(two_point_invariant_criterion(parabolic(), 1).holds);
    REQUIRE_FALSE(two_point_invariant_criterion(affine_jet(), 1).holds);
    REQUIRE_FALSE(two_point_invariant_criterion(rejected_jet(), 1).holds);
    for (auto L : {euclid(), affine_jet(), rejected_jet(), parabolic_c(), two_lines(), heisenberg(), parabolic()}) {
        INFO(L.name);
        REQUIRE(two_point_invariant_criterion(L, 2).holds == (joint_invariant_count(L, 2, 2) == 1));
    }
}
