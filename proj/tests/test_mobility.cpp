#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lie/flows.hpp"
#include "lie/mobility.hpp"
#include "lie/random.hpp"

using namespace lie;

namespace {
const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<Rational> BASE{Rational(1, 3), Rational(-1, 2), Rational(2, 5)};
const char* ROT[] = {"x*q - y*p", "y*r - z*q", "z*p - x*r"};

LieAlgebra with_rotations(std::string name, std::vector<std::string> t) {
    for (auto r : ROT) t.push_back(r);
    return make_algebra(std::move(name), XYZ, {}, t);
}
LieAlgebra euclid() { return with_rotations("euclid", {"p", "q", "r"}); }
LieAlgebra elliptic() {
    return with_rotations("elliptic", {"(1 + x^2)*p + x*y*q + x*z*r", "x*y*p + (1 + y^2)*q + y*z*r",
                                       "x*z*p + y*z*q + (1 + z^2)*r"});
}
LieAlgebra hyperbolic() {
    return with_rotations("hyperbolic", {"(1 - x^2)*p - x*y*q - x*z*r", "-x*y*p + (1 - y^2)*q - y*z*r",
                                         "-x*z*p - y*z*q + (1 - z^2)*r"});
}
std::vector<LieAlgebra> fixed_direction_groups() {
    return {make_algebra("a", XYZ, {"c"}, {"p", "q", "x*p + r", "y*q + c*r", "x^2*p + 2*x*r", "y^2*q + 2*c*y*r"}),
            make_algebra("b", XYZ, {"c"},
                         {"p", "q", "x*q + r", "x^2*q + 2*x*r", "x*p + y*q + c*r", "x^2*p + 2*x*y*q + 2*(y + c*x)*r"}),
            make_algebra("c", XYZ, {}, {"p - y*r", "q + x*r", "r", "x*q", "x*p - y*q", "y*p"}),
            make_algebra("d", XYZ, {}, {"p", "q", "r", "x*q + y*r", "2*x*p + y*q", "x^2*p + x*y*q + 1/2*y^2*r"})};
}

Matrix<Rational> Q(std::initializer_list<std::initializer_list<long>> rows) {
    Matrix<Rational> m;
    for (auto& r : rows) {
        m.emplace_back();
        for (long x : r) m.back().push_back(Rational(x));
    }
    return m;
}

Matrix<RatFun> as_ratfun(const Matrix<Rational>& m) {
    Matrix<RatFun> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (auto& x : m[i]) out[i].push_back(RatFun(x));
    return out;
}
}  // namespace

TEST_CASE("linear motion classification") {
    auto rot = classify_linear_one_param(Matrix<double>{{0, -1}, {1, 0}});
    REQUIRE(rot.tag == MotionTag::Periodic);
    REQUIRE(rot.omega == Catch::Approx(1.0));
    REQUIRE(rot.exact);
    REQUIRE(rot.projective_period == Catch::Approx(std::numbers::pi));
    REQUIRE(rot.factor == -1.0);
    REQUIRE(classify_linear_one_param(Matrix<double>{{0.5, -1}, {1, 0.5}}).tag == MotionTag::Spiral);
    REQUIRE(classify_linear_one_param(Matrix<double>{{-0.1, -1}, {1, -0.1}}).tag == MotionTag::Spiral);
    REQUIRE(classify_linear_one_param(Matrix<double>{{0, 1}, {0, 0}}).tag == MotionTag::Nilpotent);
    REQUIRE(classify_linear_one_param(Matrix<double>{{0, 0}, {0, 0}}).tag == MotionTag::Zero);
    REQUIRE(classify_linear_one_param(Matrix<double>{{1, 0}, {0, -2}}).tag == MotionTag::RealHyperbolic);
    REQUIRE(classify_linear_one_param(Matrix<double>{{1, 1}, {0, 1}}).tag == MotionTag::Degenerate);

    // Zero eigenvalue alongside a rotation: periodic only if diagonalizable.
    auto r3 = classify_linear_one_param(Q({{0, -2, 0}, {2, 0, 0}, {0, 0, 0}}));
    REQUIRE(r3.tag == MotionTag::Periodic);
    REQUIRE(r3.omega == Catch::Approx(2.0));
    REQUIRE(r3.factor == 1.0);
    // Conjugate of a rotation with irrational frequency sqrt(2).
    REQUIRE(classify_linear_one_param(Q({{1, -3}, {1, -1}})).tag == MotionTag::Periodic);
    REQUIRE(classify_linear_one_param(Q({{1, -3}, {1, -1}})).omega == Catch::Approx(std::sqrt(2.0)));
    // Helix: rotation plus a translation-like nilpotent part is not periodic.
    REQUIRE(classify_linear_one_param(Q({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}})).tag ==
            MotionTag::Degenerate);
    // Commensurable frequencies 1 and 3 combine to frequency 1.
    auto c13 = classify_linear_one_param(Q({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -3}, {0, 0, 3, 0}}));
    REQUIRE(c13.tag == MotionTag::Periodic);
    REQUIRE(c13.omega == Catch::Approx(1.0));
    REQUIRE(c13.factor == -1.0);
    // 1 and 2: period 2 pi, no half-period flip.
    auto c12 = classify_linear_one_param(Q({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -2}, {0, 0, 2, 0}}));
    REQUIRE(c12.tag == MotionTag::Periodic);
    REQUIRE(c12.projective_period == Catch::Approx(2 * std::numbers::pi));
    REQUIRE(c12.factor == 1.0);
    // Frequencies 1 and sqrt(2) are not commensurable.
    auto inc = classify_linear_one_param(Matrix<double>{{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -2}, {0, 0, 1, 0}});
    REQUIRE(inc.tag == MotionTag::Degenerate);
    // Repeated frequency with a Jordan block grows linearly.
    REQUIRE(classify_linear_one_param(Q({{0, -1, 1, 0}, {1, 0, 0, 1}, {0, 0, 0, -1}, {0, 0, 1, 0}})).tag ==
            MotionTag::Degenerate);
    // Float noise is snapped to the nearby rationals.
    REQUIRE(classify_linear_one_param(Matrix<double>{{1e-15, -1}, {1, 0}}).tag == MotionTag::Periodic);
    REQUIRE(rot.eigenvalues.size() == 2);
    REQUIRE(std::abs(std::abs(rot.eigenvalues[0].imag()) - 1) < 1e-12);
}

TEST_CASE("the seven projective forms") {
    auto forms = classify_seven_forms();
    REQUIRE(forms.size() == 7);
    int periodic = 0, accepted = 0;
    for (auto& f : forms) {
        periodic += f.motion.tag == MotionTag::Periodic;
        accepted += f.accepted;
    }
    REQUIRE(periodic == 1);
    REQUIRE(accepted == 1);
    REQUIRE(forms[6].accepted);
    REQUIRE(forms[6].field == "eta*p - xi*q");
    REQUIRE(forms[6].motion.omega == Catch::Approx(1.0));
    REQUIRE_FALSE(forms[6].fixed_line);
    const char* witness[] = {"{eta = 0}", "line at infinity", "{xi = 0}", "{xi = 0}", "{eta = 0}"};
    for (int i = 0; i < 5; ++i) {
        INFO(i);
        REQUIRE_FALSE(forms[i].accepted);
        REQUIRE(forms[i].fixed_line == std::optional<std::string>(witness[i]));
    }
    REQUIRE(forms[5].motion.tag == MotionTag::Spiral);
    REQUIRE_FALSE(forms[5].fixed_line);
    REQUIRE(forms[1].motion.tag == MotionTag::Nilpotent);
    REQUIRE(forms[3].motion.tag == MotionTag::Nilpotent);
    REQUIRE(forms[4].motion.tag == MotionTag::RealHyperbolic);
    // Other admissible constants.
    for (auto [c5, c6] : {std::pair{Rational(-1), Rational(-3)}, std::pair{Rational(1, 2), Rational(7)}}) {
        auto g = classify_seven_forms(c5, c6);
        REQUIRE(g[4].fixed_line == std::optional<std::string>("{eta = 0}"));
        REQUIRE(g[5].motion.tag == MotionTag::Spiral);
        REQUIRE(g[6].accepted);
    }
}

TEST_CASE("projectively periodic matrices") {
    // Rotation plus a dilation: a spiral for points, periodic up to scale.
    Matrix<Rational> m = Q({{0, -1, 0}, {1, 0, 0}, {0, 0, 0}});
    for (std::size_t i = 0; i < 3; ++i) m[i][i] += Rational(1, 4);
    REQUIRE(classify_linear_one_param(m).tag == MotionTag::Spiral);
    auto pp = classify_projective_one_param(m);
    REQUIRE(pp.tag == MotionTag::ProjectivelyPeriodic);
    REQUIRE(pp.shift == 0.25);
    REQUIRE(pp.omega == Catch::Approx(1.0));
    REQUIRE(pp.projective_period == Catch::Approx(2 * std::numbers::pi));
    REQUIRE(pp.factor == Catch::Approx(std::exp(std::numbers::pi / 2)));
    // Without the zero eigenvalue a half turn already gives a multiple of I.
    auto half = classify_projective_one_param(Q({{2, -1}, {1, 2}}));
    REQUIRE(half.tag == MotionTag::ProjectivelyPeriodic);
    REQUIRE(half.projective_period == Catch::Approx(std::numbers::pi));
    REQUIRE(half.factor == Catch::Approx(-std::exp(2 * std::numbers::pi)));
    // A spiral in the affine chart stays a spiral projectively.
    REQUIRE(classify_projective_one_param(Q({{1, -1, 0}, {1, 1, 0}, {0, 0, 0}})).tag == MotionTag::Spiral);
}

TEST_CASE("classification agrees with monodromy") {
    Rng rng(11);
    std::vector<Matrix<Rational>> ms{Q({{0, -1}, {1, 0}}), Q({{1, -2}, {2, 1}}), Q({{0, 1}, {0, 0}})};
    for (int k = 0; k < 20; ++k) {
        std::size_t n = k < 10 ? 2 : 3;
        Matrix<Rational> m(n, std::vector<Rational>(n));
        for (auto& r : m)
            for (auto& x : r) {
                x = Rational(rng.integer(-3, 3), rng.integer(1, 3));
                x.canonicalize();
            }
        ms.push_back(m);
    }
    // Conjugated rotations, so that the periodic branch is exercised.
    for (int k = 0; k < 4; ++k) {
        Rational a = rng.integer(1, 3), b = rng.integer(-2, 2), w = rng.integer(1, 2);
        // P = [[a, b], [0, 1]], R = [[0, -w], [w, 0]], P R P^-1
        ms.push_back({{b * w / a, -(a * w) - b * b * w / a}, {w / a, -b * w / a}});
    }
    int periodic = 0, aperiodic = 0;
    for (auto& m : ms) {
        auto cls = classify_linear_one_param(m);
        VectorField X = linear_field(as_ratfun(m));
        std::vector<double> x0{0.3, -0.4, 0.2};
        x0.resize(m.size());
        INFO(to_string(cls.tag) << " " << to_string(X, Names{{"x", "y", "z"}, {}}));
        if (cls.tag == MotionTag::Periodic) {
            ++periodic;
            double T = 2 * std::numbers::pi / cls.omega;
            auto r = monodromy_period(X, x0, 1.5 * T, 1e-7);
            INFO(r.diagnostics);
            REQUIRE(r.period);
            REQUIRE(std::abs(*r.period - T) < 1e-5);
        } else if (cls.tag == MotionTag::Spiral || cls.tag == MotionTag::Nilpotent) {
            ++aperiodic;
            REQUIRE_FALSE(monodromy_period(X, x0, 50, 1e-7).period);
        }
    }
    REQUIRE(periodic >= 5);
    REQUIRE(aperiodic >= 3);
}

TEST_CASE("free mobility in the infinitesimal") {
    for (auto L : {euclid(), elliptic(), hyperbolic()}) {
        INFO(L.name);
        auto v = free_mobility_infinitesimal(L, BASE, 1);
        INFO(v.witness);
        REQUIRE(v.free_mobility);
        REQUIRE(v.failing_stage == MobilityStage::None);
        REQUIRE(v.isotropy_dim == 3);
    }
    REQUIRE(free_mobility_infinitesimal(euclid(), {0, 0, 0}).free_mobility);

    std::vector<std::string> XY{"x", "y"};
    LieAlgebra planar = make_algebra("planar", XY, {"c"}, {"p", "q", "y*p - x*q + c*(x*p + y*q)"});
    for (Rational c : {Rational(0), Rational(1, 2), Rational(-3)}) {
        auto v = free_mobility_infinitesimal(planar.with_params({c}), {Rational(1, 2), Rational(3)});
        REQUIRE(v.free_mobility);
    }
    REQUIRE(free_mobility_infinitesimal(planar, {0, 0}, 5).free_mobility);

    for (auto L : fixed_direction_groups()) {
        INFO(L.name);
        auto v = free_mobility_infinitesimal(L, BASE, 2);
        INFO(v.witness);
        REQUIRE_FALSE(v.free_mobility);
        REQUIRE(v.failing_stage != MobilityStage::None);
        REQUIRE_FALSE(v.witness.empty());
    }
    // Indefinite metric: boosts about spacelike directions fix two planes.
    LieAlgebra lor = make_algebra("lor", XYZ, {}, {"p", "q", "r", "x*q - y*p", "y*r + z*q", "z*p + x*r"});
    auto lv = free_mobility_infinitesimal(lor, BASE, 3);
    REQUIRE(lv.failing_stage == MobilityStage::NoRotationAboutLine);
    // The group with isotropy {xq, xp - yq, yp} on the z axis.
    LieAlgebra g = make_algebra("g", XYZ, {}, {"p", "q", "r", "x*q", "x*p - y*q", "y*p"});
    auto v = free_mobility_infinitesimal(g, {0, 0, 0});
    REQUIRE(v.failing_stage == MobilityStage::FixedLineElement);
    REQUIRE(v.witness == "direction (0, 0, 1) is fixed");

    // Planar groups failing each stage.
    REQUIRE(free_mobility_infinitesimal(make_algebra("t", XY, {}, {"p", "q"}), {0, 0}).failing_stage ==
            MobilityStage::FixedLineElement);
    REQUIRE(free_mobility_infinitesimal(make_algebra("s", XY, {}, {"p", "q", "x*q", "x*p - y*q", "y*p"}), {0, 0})
                .failing_stage == MobilityStage::LineElementStabilizer);
    // Full linear isotropy in space: a flag still has a stabilizer.
    LieAlgebra gl3 = make_algebra("gl", XYZ, {},
                                  {"p", "q", "r", "x*p", "y*p", "z*p", "x*q", "y*q", "z*q", "x*r", "y*r", "z*r"});
    REQUIRE(free_mobility_infinitesimal(gl3, BASE).failing_stage == MobilityStage::SurfaceElementStabilizer);
    // Similitudes: rotations plus dilation keep a stabilizer of the flag as well.
    LieAlgebra sim = with_rotations("sim", {"p", "q", "r", "x*p + y*q + z*r"});
    REQUIRE(free_mobility_infinitesimal(sim, BASE).failing_stage == MobilityStage::SurfaceElementStabilizer);
    // Rotations about one axis only: fixing a generic direction stops everything.
    LieAlgebra axial = make_algebra("axial", XYZ, {}, {"p", "q", "r", "x*q - y*p"});
    REQUIRE(free_mobility_infinitesimal(axial, BASE).failing_stage == MobilityStage::FixedLineElement);
    // Rotations and shears of the z axis around a fixed plane.
    LieAlgebra nr = make_algebra("nr", XYZ, {}, {"p", "q", "r", "x*q - y*p", "x*r", "y*r"});
    REQUIRE(free_mobility_infinitesimal(nr, BASE).failing_stage != MobilityStage::None);

    REQUIRE_THROWS_AS(free_mobility_infinitesimal(make_algebra("l", {"x"}, {}, {"p"}), {0}), UnsupportedDimension);
    REQUIRE_THROWS_AS(free_mobility_infinitesimal(make_algebra("r", XY, {}, {"y*p - x*q"}), {1, 0}),
                      NotTransitiveAtBase);
}

TEST_CASE("Killing form") {
    auto C = [](const LieAlgebra& L) {
        auto r = check_closure(L);
        REQUIRE(r.closed);
        return r.constants;
    };
    LieAlgebra so3 = make_algebra("so3", XYZ, {}, {"x*q - y*p", "y*r - z*q", "z*p - x*r"});
    auto K = killing_form(C(so3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) REQUIRE(K[i][j] == Rational(i == j ? -2 : 0));
    REQUIRE(killing_form_signature(C(so3)) == Signature{0, 0, 3});
    REQUIRE(killing_form_signature(C(make_algebra("t", XYZ, {}, {"p", "q", "r"}))) == Signature{0, 3, 0});
    auto iso = killing_form_signature(C(make_algebra("i", XYZ, {}, {"y*p - x*q", "x*r", "y*r"})));
    REQUIRE(iso.zero >= 1);
    // sl2: indefinite, (2, 0, 1).
    auto sl2 = killing_form_signature(C(make_algebra("sl2", {"x"}, {}, {"p", "x*p", "x^2*p"})));
    REQUIRE(sl2 == Signature{2, 0, 1});
    // Euclidean group: the translations span the radical.
    REQUIRE(killing_form_signature(C(euclid())) == Signature{0, 3, 3});
    // Zero diagonal with nonzero off-diagonal entries.
    auto so21 = killing_form_signature(C(make_algebra("so21", {"x", "y"}, {}, {"x*q", "y*p", "x*p - y*q"})));
    REQUIRE(so21 == Signature{2, 0, 1});
    // Parameters need values.
    LieAlgebra P = make_algebra("P", {"x", "y"}, {"c"}, {"p", "q", "y*p - x*q + c*(x*p + y*q)"});
    REQUIRE_THROWS(killing_form_signature(C(P)));
    auto sp = killing_form_signature(C(P), {Rational(1, 2)});
    REQUIRE(sp.pos + sp.zero + sp.neg == 3);
    REQUIRE(sp.zero == 2);
}
