#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

#include "lie/algebra_file.hpp"
#include "lie/catalog.hpp"
#include "lie/flows.hpp"
#include "lie/invariants.hpp"
#include "lie/mobility.hpp"
#include "lie/random.hpp"

using namespace lie;

namespace {

// Usage and input errors; exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    const char* s = std::getenv("SEED");
    if (!s || !*s) return 0;
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used != std::string(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("SEED must be a non-negative integer, got '") + s + "'");
    }
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(what + ": bad number '" + item + "'");
        }
    }
    return out;
}

std::string format_point(const std::vector<double>& x) {
    std::ostringstream s;
    s << std::setprecision(12) << "(";
    for (std::size_t i = 0; i < x.size(); ++i) s << (i ? ", " : "") << x[i];
    return s.str() + ")";
}

// Field literals use p, q, r over x, y, z unless they mention d1, d2, ...
std::vector<std::string> literal_vars(const std::vector<std::string>& texts) {
    static const std::regex dn(R"(\bd([0-9]+)\b)");
    std::size_t n = 0;
    for (auto& t : texts)
        for (std::sregex_iterator it(t.begin(), t.end(), dn), end; it != end; ++it)
            n = std::max<std::size_t>(n, std::stoul((*it)[1]));
    if (n <= 3 && n > 0) n = 3;
    if (n == 0) return {"x", "y", "z"};
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

// Number of point blocks an invariant text refers to (x1, ..., z3 -> 3).
std::size_t point_count(const std::string& text, const std::vector<std::string>& vars) {
    std::size_t s = 2;
    for (auto& v : vars) {
        std::regex re("\\b" + v + "([0-9]+)\\b");
        for (std::sregex_iterator it(text.begin(), text.end(), re), end; it != end; ++it)
            s = std::max<std::size_t>(s, std::stoul((*it)[1]));
    }
    return s;
}

struct Loaded {
    AlgebraFile file;
    LieAlgebra algebra;
};

Loaded load(const std::string& path) {
    Loaded l;
    try {
        l.file = read_algebra_file(path);
        l.algebra = to_algebra(l.file);
    } catch (const FileFormatError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const ParseError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
    return l;
}

// Parameters replaced by generic values drawn from seed; printed so that runs
// can be reproduced.
std::vector<double> numeric_params(const LieAlgebra& L, std::uint64_t seed, std::ostream& out) {
    std::vector<double> vals;
    if (L.params.empty()) return vals;
    Rng rng(seed);
    out << "params:";
    for (auto& p : L.params) {
        Rational v = rng.generic_parameter();
        out << " " << p << "=" << v.get_str();
        vals.push_back(v.get_d());
    }
    out << "\n";
    return vals;
}

int cmd_bracket(const std::string& a, const std::string& b) {
    auto vars = literal_vars({a, b});
    VectorField X, Y;
    try {
        X = parse_field(a, vars, {});
        Y = parse_field(b, vars, {});
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    std::cout << to_string(bracket(X, Y), Names{vars, {}}) << "\n";
    return 0;
}

int cmd_closure(const std::string& path) {
    Loaded l = load(path);
    ClosureResult c = check_closure(l.algebra);
    if (!c.closed) {
        std::cout << "NotClosed\n";
        std::cout << "pair: X" << c.j + 1 << ", X" << c.k + 1 << "\n";
        std::cout << "residual: " << to_string(c.residual, l.algebra.names()) << "\n";
        return 1;
    }
    std::cout << to_string(c.constants, l.algebra.params);
    bool ok = verify_structure(c.constants);
    std::cout << "jacobi: " << (ok ? "holds" : "fails") << "\n";
    return ok ? 0 : 1;
}

int cmd_invariants(const std::string& path, std::size_t s, std::uint64_t seed) {
    if (s == 0) throw UsageError("--points must be positive");
    Loaded l = load(path);
    std::cout << joint_invariant_count(l.algebra, s, seed) << "\n";
    return 0;
}

int cmd_verify(const std::string& path, const std::string& text, std::uint64_t seed) {
    Loaded l = load(path);
    InvariantCandidate J;
    try {
        J = parse_invariant(text, l.algebra, point_count(text, l.algebra.vars));
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    InvariantVerdict v = verify_joint_invariant(l.algebra, J, VerifyMode::Symbolic, seed);
    std::cout << to_string(v.verdict) << "\n";
    if (v.verdict == Verdict::Refuted) {
        std::cout << "generator: X" << v.generator + 1 << "\n";
        std::cout << "residual: " << v.witness << "\n";
        return 1;
    }
    return 0;
}

int cmd_flow(const std::string& path, std::size_t k, const std::string& from, double t, std::uint64_t seed) {
    Loaded l = load(path);
    const LieAlgebra& L = l.algebra;
    if (k < 1 || k > L.size()) throw UsageError("--gen must be between 1 and " + std::to_string(L.size()));
    auto x0 = parse_numbers(from, "--from");
    if (x0.size() != L.dim()) throw UsageError("--from needs " + std::to_string(L.dim()) + " coordinates");
    auto params = numeric_params(L, seed, std::cout);
    const VectorField& X = L.generators[k - 1];
    int steps = std::max(100, static_cast<int>(std::ceil(std::abs(t) * 2000)));
    auto tr = numeric_flow(X, x0, t, steps, params);
    std::cout << "endpoint: " << format_point(tr.x.back()) << "\n";
    // Each invariant is followed on s copies of the start point, spread apart.
    if (l.file.invariants.empty()) std::cout << "drift: none (no invariants in file)\n";
    for (auto& [s, text] : l.file.invariants) {
        InvariantCandidate J = parse_invariant(text, L, s);
        std::vector<double> pts;
        for (std::size_t b = 0; b < s; ++b)
            for (std::size_t i = 0; i < x0.size(); ++i) pts.push_back(x0[i] + 0.25 * b * (i + 1));
        double d = invariant_drift(prolong_points(X, s), J.body, pts, t, steps, params);
        std::cout << "drift: " << std::setprecision(3) << std::scientific << d << std::defaultfloat << "  " << text
                  << "\n";
    }
    return 0;
}

int cmd_monodromy(const std::string& path, const std::string& combo, const std::string& from, std::uint64_t seed) {
    Loaded l = load(path);
    const LieAlgebra& L = l.algebra;
    auto c = parse_numbers(combo, "--gen-combo");
    if (c.size() != L.size()) throw UsageError("--gen-combo needs " + std::to_string(L.size()) + " coefficients");
    auto x0 = parse_numbers(from, "--from");
    if (x0.size() != L.dim()) throw UsageError("--from needs " + std::to_string(L.dim()) + " coordinates");
    MonodromyOptions opt;
    opt.params = numeric_params(L, seed, std::cout);
    opt.seed = seed;
    opt.steps = 100000;
    VectorField X = VectorField::zero(L.dim());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        Rational q(c[i]);
        X = X + L.generators[i] * Expression(q);
    }
    MonodromyResult m = monodromy_period(X, x0, 50, 1e-6, opt);
    if (m.period)
        std::cout << "period: " << std::setprecision(10) << *m.period << "\n";
    else
        std::cout << "period: None\n";
    return 0;
}

int cmd_mobility(const std::string& path, std::uint64_t seed) {
    Loaded l = load(path);
    const LieAlgebra& L = l.algebra;
    std::vector<Rational> base = l.file.base ? *l.file.base : std::vector<Rational>(L.dim(), Rational(0));
    if (!l.file.base && evaluation_rank(L, base) < L.dim()) base = generic_base_point(L, seed);
    MobilityVerdict v = free_mobility_infinitesimal(L, base, seed);
    std::cout << "base:";
    for (auto& b : base) std::cout << " " << b.get_str();
    std::cout << "\nfree_mobility: " << (v.free_mobility ? "true" : "false") << "\n";
    std::cout << "isotropy_dim: " << v.isotropy_dim << "\n";
    if (!v.free_mobility) {
        std::cout << "failing_stage: " << to_string(v.failing_stage) << "\n";
        std::cout << "witness: " << v.witness << "\n";
    }
    return 0;
}

int cmd_catalog_verify(const std::string& entry, std::uint64_t seed, const std::string& format) {
    std::vector<CatalogEntry> es;
    if (entry.empty()) {
        es = builtin_entries();
    } else {
        const CatalogEntry* e = find_entry(entry);
        if (!e) throw UsageError("unknown catalog entry '" + entry + "'");
        es.push_back(*e);
    }
    auto reports = verify_entries(es, seed);
    std::cout << export_report(reports, format == "json" ? ReportFormat::Json : ReportFormat::Text);
    for (auto& r : reports)
        if (!r.passed()) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Computations with Lie algebras of vector fields"};
    app.require_subcommand(1);

    std::string a, b, file, invariant, from, combo, entry, format = "text";
    std::size_t points = 2, gen = 1;
    double t = 1;
    std::optional<std::uint64_t> seed_flag;

    auto* bracket_cmd = app.add_subcommand("bracket", "Bracket of two field literals");
    bracket_cmd->add_option("A", a)->required();
    bracket_cmd->add_option("B", b)->required();

    auto* closure_cmd = app.add_subcommand("closure", "Structure constants or the residual outside the span");
    closure_cmd->add_option("FILE", file)->required();

    auto* inv_cmd = app.add_subcommand("invariants", "Number of joint invariants of s points");
    inv_cmd->add_option("FILE", file)->required();
    inv_cmd->add_option("--points", points, "number of points")->required();

    auto* verify_cmd = app.add_subcommand("verify", "Check that an expression is a joint invariant");
    verify_cmd->add_option("FILE", file)->required();
    verify_cmd->add_option("--invariant", invariant)->required();

    auto* flow_cmd = app.add_subcommand("flow", "Integrate one generator");
    flow_cmd->add_option("FILE", file)->required();
    flow_cmd->add_option("--gen", gen, "generator number, from 1")->required();
    flow_cmd->add_option("--from", from, "start point, comma separated")->required();
    flow_cmd->add_option("--t", t, "time")->required();

    auto* mono_cmd = app.add_subcommand("monodromy", "First return time of a combination of generators");
    mono_cmd->add_option("FILE", file)->required();
    mono_cmd->add_option("--gen-combo", combo, "coefficients c1,...,cr")->required();
    mono_cmd->add_option("--from", from, "start point, comma separated")->required();

    auto* mob_cmd = app.add_subcommand("mobility", "Infinitesimal free mobility");
    mob_cmd->add_option("FILE", file)->required();

    auto* cat_cmd = app.add_subcommand("catalog", "Built-in catalog");
    cat_cmd->require_subcommand(1);
    auto* cat_verify = cat_cmd->add_subcommand("verify", "Run the verification harness");
    cat_verify->add_option("--entry", entry);
    cat_verify->add_option("--seed", seed_flag);
    cat_verify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
        if (*bracket_cmd) return cmd_bracket(a, b);
        if (*closure_cmd) return cmd_closure(file);
        if (*inv_cmd) return cmd_invariants(file, points, seed);
        if (*verify_cmd) return cmd_verify(file, invariant, seed);
        if (*flow_cmd) return cmd_flow(file, gen, from, t, seed);
        if (*mono_cmd) return cmd_monodromy(file, combo, from, seed);
        if (*mob_cmd) return cmd_mobility(file, seed);
        if (*cat_verify) return cmd_catalog_verify(entry, seed, format);
    } catch (const UsageError& e) {
        std::cerr << "liecalc: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "liecalc: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
