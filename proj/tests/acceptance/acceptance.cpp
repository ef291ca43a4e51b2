// One PASS/FAIL line per acceptance criterion, with its time budget.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "lie/catalog.hpp"
#include "lie/flows.hpp"
#include "lie/invariants.hpp"
#include "lie/mobility.hpp"
#include "lie/random.hpp"

using namespace lie;

namespace {

const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<std::string> XY{"x", "y"};

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects failed conditions; the first few end up in the detail line.
class Tally {
public:
    void require(bool ok, const std::string& what) {
        ++checked_;
        if (!ok) failures_.push_back(what);
    }
    Outcome outcome(const std::string& summary) const {
        Outcome o{failures_.empty(), summary};
        if (!failures_.empty()) {
            o.detail = std::to_string(failures_.size()) + " of " + std::to_string(checked_) + " failed:";
            for (std::size_t i = 0; i < failures_.size() && i < 4; ++i) o.detail += " [" + failures_[i] + "]";
        }
        return o;
    }
    std::size_t checked() const { return checked_; }

private:
    std::size_t checked_ = 0;
    std::vector<std::string> failures_;
};

const CatalogEntry& entry(const std::string& id) {
    const CatalogEntry* e = find_entry(id);
    if (!e) throw std::runtime_error("missing catalog entry " + id);
    return *e;
}

// Parameters fixed at the first admissible sample.
LieAlgebra sampled(const CatalogEntry& e) {
    if (e.algebra.params.empty()) return e.algebra;
    return e.algebra.with_params(parameter_samples(e).front().first);
}

std::vector<double> sample_doubles(const CatalogEntry& e) {
    std::vector<double> v;
    if (e.algebra.params.empty()) return v;
    auto samples = parameter_samples(e);
    for (auto& q : samples.front().first) v.push_back(q.get_d());
    return v;
}

Expression det3(const std::vector<std::vector<Expression>>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Expression det_of(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& params) {
    std::vector<std::vector<Expression>> m;
    for (auto& r : rows) {
        std::vector<Expression> row;
        for (auto& s : r) row.push_back(parse_expression(s, XYZ, params));
        m.push_back(row);
    }
    return det3(m);
}

Outcome catalog_closure() {
    Tally t;
    auto& es = builtin_entries();
    t.require(es.size() >= 24, "fewer than 24 entries");
    for (auto& e : es) {
        ClosureResult c = check_closure(e.algebra);
        t.require(c.closed, e.id + " not closed");
        if (!c.closed) continue;
        bool constant = true;
        for (auto& k : c.constants.c) constant = constant && !k.has_kind(SymKind::Var);
        t.require(constant, e.id + " constants depend on the variables");
        t.require(verify_structure(c.constants), e.id + " Jacobi identity");
    }
    return t.outcome(std::to_string(es.size()) + " entries closed, Jacobi identities exact");
}

Outcome invariant_identities() {
    Tally t;
    for (auto& e : builtin_entries())
        for (auto& text : e.invariants) {
            auto v = verify_joint_invariant(e.algebra, parse_invariant(text, e.algebra, 2), VerifyMode::Symbolic, 0);
            t.require(v.verdict == Verdict::Proven, e.id + ": " + to_string(v.verdict));
        }
    return t.outcome(std::to_string(t.checked()) + " invariants Proven symbolically");
}

Outcome invariant_counts() {
    Tally t;
    auto count = [&](const std::string& id, std::size_t want) {
        std::size_t got = joint_invariant_count(entry(id).algebra, 2, 0);
        t.require(got == want, id + " count " + std::to_string(got));
    };
    count("ex94-21", 1);
    count("ex94-21r", 2);
    count("ex94-22", 0);
    count("ex94-22r", 1);
    // Three generators spanning a single direction.
    LieAlgebra r23 = entry("ex94-23r").algebra.with_params({Rational(1, 2)});
    const auto& g = r23.generators;
    std::string found;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            for (std::size_t k = j + 1; k < g.size(); ++k)
                if (generic_rank({g[i], g[j], g[k]}, 0) == 1)
                    found = "X" + std::to_string(i + 1) + ", X" + std::to_string(j + 1) + ", X" + std::to_string(k + 1);
    t.require(!found.empty(), "no three fields with common integral curves in ex94-23r");
    t.require(generic_rank(g, 0) == 3, "ex94-23r not transitive");
    return t.outcome("counts 1, 2, 0, 1; common integral curves for " + found);
}

Outcome determinant_criteria() {
    Tally t;
    Expression d34 = det_of({{"x", "y - c*x", "0"}, {"0", "x^2", "2*x"}, {"x^2", "2*x*y", "2*(y + c*x)"}}, {"c"});
    Expression d40 = det_of({{"-c*x", "y", "0"}, {"x^2", "0", "2*x"}, {"0", "y^2", "2*c*y"}}, {"c"});
    t.require(is_identically_zero(d34) == ZeroVerdict::Yes, "ex87-32 isotropy determinant not zero");
    t.require(is_identically_zero(d40) == ZeroVerdict::Yes, "ex87-38 isotropy determinant not zero");
    for (auto id : {"ex87-28", "ex87-30"}) {
        auto iso = isotropy_at_point(entry(id).algebra, {0, 0, 0});
        t.require(iso.size() == 3, std::string(id) + " isotropy size");
        if (iso.size() != 3) continue;
        std::vector<std::vector<Expression>> m;
        for (auto& Y : iso) m.push_back(Y.coeffs);
        t.require(is_identically_zero(det3(m)) == ZeroVerdict::No, std::string(id) + " determinant vanishes");
    }
    for (auto [id, want] : std::vector<std::pair<std::string, bool>>{{"ex87-28", false},
                                                                     {"ex87-30", false},
                                                                     {"ex87-32", true},
                                                                     {"ex87-38", true},
                                                                     {"ex87-45", true},
                                                                     {"ex87-52", true}})
        t.require(two_point_invariant_criterion(entry(id).algebra, 0).holds == want, id + " criterion");
    return t.outcome("isotropy determinants of ex87-32, ex87-38 vanish, of ex87-28, ex87-30 do not; criterion matches");
}

Outcome monodromy() {
    Tally t;
    const std::vector<double> x0{0.3, -0.4, 0.2};
    MonodromyOptions opt;
    opt.steps = 20000;
    opt.starts = 8;
    VectorField W = two_point_stabilizer(entry("ex94-24").algebra, {0, 0, 0}, {1, 1, 0});
    MonodromyResult m = monodromy_period(W, x0, 10, 1e-6, opt);
    double err = m.period ? std::abs(*m.period - 2 * std::numbers::pi) : INFINITY;
    t.require(err < 1e-6, "ex94-24 period " + m.diagnostics);

    const LieAlgebra& R = entry("ex94-24r").algebra;
    VectorField V = two_point_stabilizer(R, {0, 0, 0}, {1, 1, 0});
    t.require(same_span({V}, {parse_field("(y - x)*r", XYZ, {})}), "ex94-24r stabilizer is not (x0 y - y0 x) r");
    MonodromyOptions longer = opt;
    longer.steps = 200000;
    MonodromyResult n = monodromy_period(V, x0, 100, 1e-6, longer);
    t.require(!n.period, "ex94-24r returned");
    std::ostringstream s;
    s << "period 2*pi within " << std::setprecision(2) << err << "; ex94-24r None up to t = 100";
    return t.outcome(s.str());
}

Outcome seven_forms() {
    Tally t;
    auto forms = classify_seven_forms();
    t.require(forms.size() == 7, "seven forms");
    if (forms.size() != 7) return t.outcome("");
    int accepted = 0;
    for (auto& f : forms) accepted += f.accepted;
    t.require(accepted == 1 && forms[6].accepted, "only the rotation is accepted");
    t.require(forms[6].motion.tag == MotionTag::Periodic, "rotation periodic");
    for (int k = 0; k < 5; ++k)
        t.require(!forms[k].accepted && forms[k].fixed_line.has_value(), "form " + std::to_string(k + 1) + " witness");
    t.require(forms[5].motion.tag == MotionTag::Spiral, "form 6 spiral");
    t.require(forms[5].motion.exact && forms[6].motion.exact, "exact eigenvalues");
    return t.outcome("rotation periodic; forms 1-5 fix a line; form 6 Spiral");
}

Outcome free_mobility() {
    Tally t;
    const std::vector<Rational> O3{0, 0, 0}, O2{0, 0};
    for (auto id : {"thm37-1", "thm37-3", "thm37-4"})
        t.require(free_mobility_infinitesimal(entry(id).algebra, O3, 0).free_mobility, std::string(id) + " not free");
    LieAlgebra planar = make_algebra("planar", XY, {"c"}, {"p", "q", "y*p - x*q + c*(x*p + y*q)"});
    for (auto c : {Rational(0), Rational(1, 2)})
        t.require(free_mobility_infinitesimal(planar.with_params({c}), O2, 0).free_mobility,
                  "planar family at c = " + c.get_str());
    std::string stages;
    for (auto id : {"thm37-8", "thm37-9", "thm37-10", "thm37-11"}) {
        const CatalogEntry& e = entry(id);
        for (auto& [vals, x] : parameter_samples(e)) {
            LieAlgebra L = vals.empty() ? e.algebra : e.algebra.with_params(vals);
            MobilityVerdict v = free_mobility_infinitesimal(L, O3, 0);
            t.require(!v.free_mobility && v.failing_stage != MobilityStage::None, std::string(id) + " free");
            if (vals.empty() || vals == parameter_samples(e).front().first)
                stages += std::string(stages.empty() ? "" : "; ") + id + ": " + to_string(v.failing_stage);
        }
    }
    return t.outcome("thm37-1, thm37-3, thm37-4 and the planar family free; " + stages);
}

Outcome flows() {
    Tally t;
    Rng rng(2024);
    double worst_series = 0, worst_law = 0, worst_drift = 0;
    std::vector<std::pair<const CatalogEntry*, std::size_t>> gens;
    for (auto& e : builtin_entries()) {
        LieAlgebra L = sampled(e);
        auto params = sample_doubles(e);
        for (std::size_t k = 0; k < L.size(); ++k) {
            gens.emplace_back(&e, k);
            for (double tt : {0.2, -0.2, 0.1}) {
                std::vector<double> x0;
                for (std::size_t i = 0; i < L.dim(); ++i) x0.push_back(rng.uniform(-0.5, 0.5));
                auto ls = lie_series_flow(e.algebra.generators[k], x0, tt, 24, params);
                auto rk = numeric_flow(e.algebra.generators[k], x0, tt, 400, params);
                double d = 0;
                for (std::size_t i = 0; i < x0.size(); ++i) d = std::max(d, std::abs(ls.point[i] - rk.x.back()[i]));
                worst_series = std::max(worst_series, d);
                t.require(d < 1e-8, e.id + " X" + std::to_string(k + 1) + " series vs RK4");
            }
        }
    }
    for (int draw = 0; draw < 50; ++draw) {
        auto [e, k] = gens[rng.integer(0, static_cast<long>(gens.size()) - 1)];
        std::vector<double> x0;
        for (std::size_t i = 0; i < e->algebra.dim(); ++i) x0.push_back(rng.uniform(-0.5, 0.5));
        double t1 = rng.uniform(-0.3, 0.3), t2 = rng.uniform(-0.3, 0.3);
        double d = one_param_group_law_check(e->algebra.generators[k], x0, t1, t2, sample_doubles(*e));
        worst_law = std::max(worst_law, d);
        t.require(d < 1e-9, e->id + " X" + std::to_string(k + 1) + " group law");
    }
    for (auto& e : builtin_entries()) {
        auto params = sample_doubles(e);
        std::size_t n = e.algebra.dim();
        // Two nearby points with every coordinate difference positive.
        std::vector<double> pts = n == 3 ? std::vector<double>{0.1, 0.05, 0.2, 0.35, 0.1, 0.3}
                                         : std::vector<double>{0.1, 0.05, 0.35, 0.1};
        for (auto& text : e.invariants) {
            InvariantCandidate J = parse_invariant(text, e.algebra, 2);
            for (std::size_t k = 0; k < e.algebra.size(); ++k) {
                double d = invariant_drift(prolong_points(e.algebra.generators[k], 2), J.body, pts, 1.0, 2000, params);
                worst_drift = std::max(worst_drift, d);
                t.require(d < 1e-6, e.id + " X" + std::to_string(k + 1) + " drift " + std::to_string(d));
            }
        }
    }
    std::ostringstream s;
    s << std::setprecision(2) << "series vs RK4 " << worst_series << ", group law " << worst_law
      << ", invariant drift " << worst_drift;
    return t.outcome(s.str());
}

Outcome complete_systems() {
    Tally t;
    std::vector<std::string> x3{"x1", "x2", "x3"};
    Completion c = complete_system_complete({parse_field("d1", x3, {}), parse_field("d2 + x1*d3", x3, {})});
    t.require(c.fields.size() == 3 && fields_equal(c.fields[2], parse_field("d3", x3, {})), "adjoined field");
    VectorField X = parse_field("p + x*r", XYZ, {});
    SingleSolution s = complete_system_solve_single(X, 0);
    t.require(s.exact && s.terminated && s.omegas.size() == 2, "exact solution");
    if (s.omegas.size() == 2) {
        t.require(is_identically_zero(s.omegas[0] - parse_expression("y", XYZ, {})) == ZeroVerdict::Yes, "omega 1");
        t.require(is_identically_zero(s.omegas[1] - parse_expression("z - x^2/2", XYZ, {})) == ZeroVerdict::Yes,
                  "omega 2");
        for (auto& w : s.omegas)
            t.require(is_identically_zero(apply_to_function(X, w)) == ZeroVerdict::Yes, "X(omega) = 0");
    }
    return t.outcome("adjoined d3; omega = (y, z - x^2/2)");
}

Outcome theorem44() {
    Tally t;
    std::size_t n = 0;
    for (auto& e : builtin_entries())
        for (auto& [vals, x] : parameter_samples(e)) {
            LieAlgebra L = vals.empty() ? e.algebra : e.algebra.with_params(vals);
            if (joint_invariant_count(L, 2, 0) < 1) continue;
            ++n;
            t.require(infinitesimal_invariant_exists(L, 0), e.id + " has no infinitesimal invariant");
        }
    const LieAlgebra& g22 = entry("ex94-22").algebra;
    t.require(joint_invariant_count(g22, 2, 0) == 0, "ex94-22 has a pair invariant");
    Expression w = parse_expression("dy - z*dx", differential_names(XYZ), {});
    for (auto& X : g22.generators)
        t.require(is_identically_zero(apply_to_function(prolong_differentials(X), w)) == ZeroVerdict::Yes,
                  "dy - z dx not invariant");
    return t.outcome(std::to_string(n) + " samples with a pair invariant; dy - z dx invariant under ex94-22");
}

Outcome prolongation() {
    Tally t;
    std::vector<VectorField> pro;
    for (auto s : {"p", "q", "x*q", "y*q", "x*p", "y*p"}) pro.push_back(prolong_jet1(parse_field(s, XY, {})));
    t.require(same_span(pro, entry("ex87-28").algebra.generators), "span differs from ex87-28");
    return t.outcome("prolonged affine fields span ex87-28");
}

Outcome arc_length() {
    Tally t;
    t.require(!arc_length_invariant_exists(make_algebra("dil", XY, {}, {"p", "q", "x*p + y*q"}), 0), "dilations");
    t.require(arc_length_invariant_exists(entry("thm37-1").algebra, 0), "Euclidean group");
    return t.outcome("false for {p, q, xp + yq}, true for the Euclidean group");
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        double budget;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all{
        {1, "catalog closure", 10, catalog_closure},
        {2, "invariant identities", 30, invariant_identities},
        {3, "invariant counts", 5, invariant_counts},
        {4, "determinant criteria", 2, determinant_criteria},
        {5, "monodromy", 10, monodromy},
        {6, "seven projective forms", 1, seven_forms},
        {7, "free mobility", 5, free_mobility},
        {8, "flows", 60, flows},
        {9, "complete systems", 1, complete_systems},
        {10, "infinitesimal invariants", 5, theorem44},
        {11, "prolongation identity", 1, prolongation},
        {12, "arc-length criterion", 1, arc_length},
    };
    int failed = 0;
    for (auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && secs < c.budget;
        failed += !pass;
        std::cout << (pass ? "PASS " : "FAIL ") << std::setw(2) << c.number << " " << c.name << " (" << std::fixed
                  << std::setprecision(2) << secs << " s, limit " << std::setprecision(0) << c.budget << " s): "
                  << o.detail << std::defaultfloat << "\n";
    }
    return failed ? 1 : 0;
}
