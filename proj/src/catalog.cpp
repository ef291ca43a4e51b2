#include "lie/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "lie/flows.hpp"
#include "lie/invariants.hpp"
#include "lie/mobility.hpp"

namespace lie {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

std::size_t parse_count(const std::string& key, const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument(key + ": expected a count, got '" + v + "'");
    return std::stoul(v);
}

std::string values_text(const std::vector<std::string>& names, const std::vector<Rational>& vals) {
    std::string s;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) s += ", ";
        s += names[i] + "=" + vals[i].get_str();
    }
    return s;
}

}  // namespace

std::string to_string(const ParamConstraint& c) {
    switch (c.kind) {
    case ConstraintKind::NonZero: return c.param + " != 0";
    case ConstraintKind::NonNegative: return c.param + " >= 0";
    case ConstraintKind::SquareAtMostOne: return c.param + "^2 <= 1";
    case ConstraintKind::NotAllZero: return "params != 0";
    }
    return "";
}

ParamConstraint parse_constraint(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ' && ch != '\t') t += ch;
    auto ends = [&](const std::string& suf) {
        return t.size() > suf.size() && t.compare(t.size() - suf.size(), suf.size(), suf) == 0;
    };
    auto head = [&](const std::string& suf) { return t.substr(0, t.size() - suf.size()); };
    if (t == "params!=0") return {ConstraintKind::NotAllZero, ""};
    if (ends("^2<=1")) return {ConstraintKind::SquareAtMostOne, head("^2<=1")};
    if (ends("!=0")) return {ConstraintKind::NonZero, head("!=0")};
    if (ends(">=0")) return {ConstraintKind::NonNegative, head(">=0")};
    throw std::invalid_argument("unrecognised constraint '" + text + "'");
}

bool satisfies(const std::vector<ParamConstraint>& cs, const std::vector<std::string>& params,
               const std::vector<Rational>& values) {
    for (auto& c : cs) {
        if (c.kind == ConstraintKind::NotAllZero) {
            if (std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 0; })) return false;
            continue;
        }
        auto it = std::find(params.begin(), params.end(), c.param);
        if (it == params.end()) throw std::invalid_argument("constraint on unknown parameter " + c.param);
        const Rational& v = values[it - params.begin()];
        switch (c.kind) {
        case ConstraintKind::NonZero:
            if (v == 0) return false;
            break;
        case ConstraintKind::NonNegative:
            if (v < 0) return false;
            break;
        case ConstraintKind::SquareAtMostOne:
            if (v * v > 1) return false;
            break;
        case ConstraintKind::NotAllZero: break;
        }
    }
    return true;
}

KeyValues to_key_values(const Expected& e) {
    KeyValues kv{{"closed", bool_text(e.closed)}};
    auto b = [&](const char* k, const std::optional<bool>& v) {
        if (v) kv.emplace_back(k, bool_text(*v));
    };
    b("transitive", e.transitive);
    if (e.pair_invariant_count) kv.emplace_back("pair_invariant_count", std::to_string(*e.pair_invariant_count));
    b("essential_3pt", e.essential_3pt);
    b("two_point_criterion", e.two_point_criterion);
    b("monodromy", e.monodromy);
    b("free_mobility", e.free_mobility);
    b("infinitesimal_invariant_exists", e.infinitesimal_exists);
    if (e.infinitesimal_invariant) kv.emplace_back("infinitesimal_invariant", *e.infinitesimal_invariant);
    if (e.common_integral_curves)
        kv.emplace_back("common_integral_curves", std::to_string(*e.common_integral_curves));
    if (e.reduced_from) kv.emplace_back("reduced_from", *e.reduced_from);
    return kv;
}

void set_expectation(Expected& e, const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    if (key == "closed")
        e.closed = parse_bool(key, v);
    else if (key == "transitive")
        e.transitive = parse_bool(key, v);
    else if (key == "pair_invariant_count")
        e.pair_invariant_count = parse_count(key, v);
    else if (key == "essential_3pt")
        e.essential_3pt = parse_bool(key, v);
    else if (key == "two_point_criterion")
        e.two_point_criterion = parse_bool(key, v);
    else if (key == "monodromy")
        e.monodromy = parse_bool(key, v);
    else if (key == "free_mobility")
        e.free_mobility = parse_bool(key, v);
    else if (key == "infinitesimal_invariant_exists")
        e.infinitesimal_exists = parse_bool(key, v);
    else if (key == "infinitesimal_invariant")
        e.infinitesimal_invariant = v;
    else if (key == "common_integral_curves")
        e.common_integral_curves = parse_count(key, v);
    else if (key == "reduced_from")
        e.reduced_from = v;
    else
        throw std::invalid_argument("unknown expectation '" + key + "'");
}

CatalogEntry make_entry(std::string id, std::vector<std::string> vars, std::vector<std::string> params,
                        std::vector<std::string> fields) {
    CatalogEntry e;
    e.algebra = make_algebra(id, std::move(vars), std::move(params), fields);
    e.id = std::move(id);
    e.field_texts = std::move(fields);
    return e;
}

namespace {

const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<std::string> XY{"x", "y"};

const char* const DIST = "(x1 - x2)^2 + (y1 - y2)^2 + (z1 - z2)^2";
const char* const BIRAPPORT =
    "((x1 - x2)^2 + (y1 - y2)^2 + (z1 - z2)^2 + (x1*y2 - y1*x2)^2 + (y1*z2 - z1*y2)^2 + (z1*x2 - x1*z2)^2)"
    "/(1 + x1*x2 + y1*y2 + z1*z2)^2";
const char* const INV35 = "z1 + z2 - c*log((x2 - x1)^2) - 2*(y2 - y1)/(x2 - x1)";
const char* const INV41 = "z1 + z2 - log((x2 - x1)^2) - c*log((y2 - y1)^2)";
const char* const INV48 = "z2 - z1 + x1*y2 - x2*y1";
const char* const INV53 = "z2 - z1 - (y2 - y1)^2/(2*(x2 - x1))";

const std::vector<std::string> EUCLID{"p", "q", "r", "x*q - y*p", "y*r - z*q", "z*p - x*r"};
const std::vector<std::string> PROJECTIVE{"p + x*(x*p + y*q + z*r)", "q + y*(x*p + y*q + z*r)",
                                          "r + z*(x*p + y*q + z*r)",   "x*q - y*p",
                                          "y*r - z*q",                 "z*p - x*r"};
const std::vector<std::string> G32{"p", "q", "x*q + r", "x*p + y*q + c*r", "x^2*q + 2*x*r",
                                   "x^2*p + 2*x*y*q + 2*(y + c*x)*r"};
const std::vector<std::string> G38{"p", "q", "x*p + r", "y*q + c*r", "x^2*p + 2*x*r", "y^2*q + 2*c*y*r"};
const std::vector<std::string> G45{"p - y*r", "q + x*r", "r", "x*q", "x*p - y*q", "y*p"};
const std::vector<std::string> G52{"p", "q", "r", "2*x*p + y*q", "x*q + y*r", "x^2*p + x*y*q + 1/2*y^2*r"};
const std::vector<std::string> G24{"p",
                                   "q",
                                   "x*p + y*q + r",
                                   "y*p - x*q",
                                   "(x^2 - y^2)*p + 2*x*y*q + 2*x*r",
                                   "2*x*y*p + (y^2 - x^2)*q + 2*y*r"};
const char* const INV24 = "z1 + z2 - log((x2 - x1)^2 + (y2 - y1)^2)";
const std::vector<std::string> CONIC{"p + x^2*p + x*y*q", "q + x*y*p + y^2*q", "y*p - x*q"};
const char* const INV_CONIC = "((x2 - x1)^2 + (y2 - y1)^2 + (x1*y2 - x2*y1)^2)/(1 + x1*x2 + y1*y2)^2";

ParamConstraint nonzero(const std::string& c) { return {ConstraintKind::NonZero, c}; }

// Properties shared by the groups in which two points have exactly one
// invariant and more points none beyond those of pairs.
void single_pair_invariant(CatalogEntry& e, bool six_in_space = true) {
    e.expected.transitive = true;
    e.expected.pair_invariant_count = 1;
    e.expected.essential_3pt = false;
    e.expected.infinitesimal_exists = true;
    if (six_in_space) e.expected.two_point_criterion = true;
}

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> out;
    auto add = [&](CatalogEntry e) -> CatalogEntry& {
        out.push_back(std::move(e));
        return out.back();
    };

    // The eleven groups in space.
    {
        auto& e = add(make_entry("thm37-1", XYZ, {}, EUCLID));
        single_pair_invariant(e);
        e.invariants = {DIST};
        e.expected.free_mobility = true;
    }
    {
        auto& e = add(make_entry("thm37-2", XYZ, {}, {"p", "q", "r", "x*q - y*p", "y*r + z*q", "z*p + x*r"}));
        single_pair_invariant(e);
        e.invariants = {"(x1 - x2)^2 + (y1 - y2)^2 - (z1 - z2)^2"};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("thm37-3", XYZ, {}, PROJECTIVE));
        single_pair_invariant(e);
        e.invariants = {BIRAPPORT};
        e.expected.free_mobility = true;
    }
    {
        auto& e = add(make_entry("thm37-4", XYZ, {},
                                 {"p - x*(x*p + y*q + z*r)", "q - y*(x*p + y*q + z*r)", "r - z*(x*p + y*q + z*r)",
                                  "x*q - y*p", "y*r - z*q", "z*p - x*r"}));
        single_pair_invariant(e);
        e.invariants = {"((x1 - x2)^2 + (y1 - y2)^2 + (z1 - z2)^2 - (x1*y2 - y1*x2)^2 - (y1*z2 - z1*y2)^2 - "
                        "(z1*x2 - x1*z2)^2)/(1 - x1*x2 - y1*y2 - z1*z2)^2"};
        e.expected.free_mobility = true;
    }
    {
        auto& e = add(make_entry("thm37-5", XYZ, {},
                                 {"p - x*(x*p + y*q + z*r)", "q - y*(x*p + y*q + z*r)", "r + z*(x*p + y*q + z*r)",
                                  "x*q - y*p", "y*r + z*q", "z*p + x*r"}));
        single_pair_invariant(e);
        e.invariants = {"(-(x1 - x2)^2 - (y1 - y2)^2 + (z1 - z2)^2 + (x1*y2 - y1*x2)^2 - (y1*z2 - z1*y2)^2 - "
                        "(z1*x2 - x1*z2)^2)/(1 - x1*x2 - y1*y2 + z1*z2)^2"};
    }
    {
        auto& e = add(make_entry("thm37-6", XYZ, {"c"},
                                 {"p", "q", "x*p + y*q + c*r", "y*p - x*q + r",
                                  "(x^2 - y^2)*p + 2*x*y*q + 2*(c*x - y)*r",
                                  "2*x*y*p + (y^2 - x^2)*q + 2*(x + c*y)*r"}));
        single_pair_invariant(e);
        e.constraints = {{ConstraintKind::NonNegative, "c"}};
        e.invariants = {"z1 + z2 - c*log((x2 - x1)^2 + (y2 - y1)^2) + 2*atan((y2 - y1)/(x2 - x1))"};
        e.boundaries = {{{Rational(0)}, {}}};
    }
    {
        auto& e = add(make_entry("thm37-7", XYZ, {}, G24));
        single_pair_invariant(e);
        e.invariants = {INV24};
    }
    {
        auto& e = add(make_entry("thm37-8", XYZ, {"c"}, G38));
        single_pair_invariant(e);
        e.constraints = {nonzero("c"), {ConstraintKind::SquareAtMostOne, "c"}};
        e.invariants = {INV41};
        e.expected.free_mobility = false;
        e.boundaries = {{{Rational(1)}, {}}, {{Rational(-1)}, {}}};
    }
    {
        auto& e = add(make_entry("thm37-9", XYZ, {"c"}, G32));
        single_pair_invariant(e);
        e.invariants = {INV35};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("thm37-10", XYZ, {}, G45));
        single_pair_invariant(e);
        e.invariants = {INV48};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("thm37-11", XYZ, {}, {"p", "q", "r", "x*q + y*r", "2*x*p + y*q",
                                                       "x^2*p + x*y*q + 1/2*y^2*r"}));
        single_pair_invariant(e);
        e.invariants = {INV53};
        e.expected.free_mobility = false;
    }

    // Euclidean and projective groups of space.
    {
        auto& e = add(make_entry("ex86-22", XYZ, {}, EUCLID));
        single_pair_invariant(e);
        e.invariants = {DIST};
        e.expected.free_mobility = true;
    }
    {
        auto& e = add(make_entry("ex86-23", XYZ, {}, PROJECTIVE));
        single_pair_invariant(e);
        e.invariants = {BIRAPPORT};
        e.expected.free_mobility = true;
    }

    // Candidates examined with the two-point determinant.
    {
        auto& e = add(make_entry("ex87-28", XYZ, {}, {"p", "q", "x*q + r", "y*q + z*r", "x*p - z*r", "y*p - z^2*r"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 0;
        e.expected.two_point_criterion = false;
    }
    {
        auto& e = add(make_entry("ex87-30", XYZ, {},
                                 {"p", "q", "x*q + r", "x*p + y*q", "x*p - y*q - 2*z*r", "x^2*p + x*y*q + (y - x*z)*r"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 0;
        e.expected.two_point_criterion = false;
    }
    {
        auto& e = add(make_entry("ex87-32", XYZ, {"c"}, G32));
        single_pair_invariant(e);
        e.invariants = {INV35};
    }
    {
        auto& e = add(make_entry("ex87-38", XYZ, {"c"}, G38));
        single_pair_invariant(e);
        e.constraints = {nonzero("c")};
        e.invariants = {INV41, "(x2 - x1)*exp(c*log(y2 - y1))*exp(-1/2*(z1 + z2))"};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("ex87-45", XYZ, {}, G45));
        single_pair_invariant(e);
        e.invariants = {INV48};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("ex87-51", XYZ, {"c"},
                                 {"p", "q", "r", "2*x*p + y*q", "x*q + y*r", "x^2*p + x*y*q + (1/2*y^2 + c*x)*r"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 0;
        e.expected.two_point_criterion = false;
        e.boundaries = {{{Rational(0)},
                         {{"pair_invariant_count", "1"},
                          {"two_point_criterion", "true"},
                          {"infinitesimal_invariant_exists", "true"}}}};
    }
    {
        auto& e = add(make_entry("ex87-52", XYZ, {}, G52));
        single_pair_invariant(e);
        e.invariants = {INV53};
        e.expected.free_mobility = false;
    }

    // The family from which groups 6 and 7 come.
    {
        auto& e = add(make_entry("ex89-58", XYZ, {"a", "b"},
                                 {"p", "q", "x*p + y*q + a*r", "y*p - x*q + b*r",
                                  "(x^2 - y^2)*p + 2*x*y*q + 2*(a*x - b*y)*r",
                                  "2*x*y*p + (y^2 - x^2)*q + 2*(b*x + a*y)*r"}));
        single_pair_invariant(e);
        e.constraints = {{ConstraintKind::NotAllZero, ""}};
        e.invariants = {"z1 + z2 - a*log((x2 - x1)^2 + (y2 - y1)^2) + 2*b*atan((y2 - y1)/(x2 - x1))"};
    }

    // Planar groups.
    {
        auto& e = add(make_entry("ex90-60a", XY, {"c"}, {"p", "q", "x*p + c*y*q"}));
        single_pair_invariant(e, false);
        e.constraints = {nonzero("c")};
        e.invariants = {"c*log((x2 - x1)^2) - log((y2 - y1)^2)"};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("ex90-60b", XY, {}, CONIC));
        single_pair_invariant(e, false);
        e.invariants = {INV_CONIC};
        e.expected.free_mobility = true;
    }
    {
        auto& e = add(make_entry("ex90-60c", XY, {}, {"x*q", "x*p - y*q", "y*p"}));
        single_pair_invariant(e, false);
        e.invariants = {"x1*y2 - x2*y1"};
        e.expected.free_mobility = false;
        e.base = std::vector<Rational>{1, 0};
    }
    {
        auto& e = add(make_entry("ex90-60d", XY, {}, {"p", "q", "x*p + (x + y)*q"}));
        single_pair_invariant(e, false);
        e.invariants = {"(x2 - x1)*exp(-(y2 - y1)/(x2 - x1))"};
        e.expected.free_mobility = false;
    }
    {
        auto& e = add(make_entry("ex90-62a", XY, {"c"}, {"p", "q", "y*p - x*q + c*(x*p + y*q)"}));
        single_pair_invariant(e, false);
        e.invariants = {"((x2 - x1)^2 + (y2 - y1)^2)*exp(2*c*atan((y2 - y1)/(x2 - x1)))"};
        e.expected.free_mobility = true;
        e.boundaries = {{{Rational(0)}, {}}};
    }
    {
        auto& e = add(make_entry("ex90-62b", XY, {}, {"p - x^2*p - x*y*q", "q - x*y*p - y^2*q", "y*p - x*q"}));
        single_pair_invariant(e, false);
        e.invariants = {"((x2 - x1)^2 + (y2 - y1)^2 - (x1*y2 - x2*y1)^2)/(1 - x1*x2 - y1*y2)^2"};
        e.expected.free_mobility = true;
    }

    // Groups with the isotropy of the Euclidean group and their reductions.
    {
        auto& e = add(make_entry("ex94-21", XYZ, {},
                                 {"q", "x*q + r", "x^2*q + 2*x*r", "x^3*q + 3*x^2*r", "x^4*q + 4*x^3*r", "p"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 1;
        e.expected.essential_3pt = true;
        e.expected.two_point_criterion = true;
        e.expected.infinitesimal_exists = true;
        e.invariants = {"x2 - x1"};
    }
    {
        auto& e = add(make_entry("ex94-21r", XYZ, {}, {"q", "r", "x*r", "p"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 2;
        e.expected.infinitesimal_exists = true;
        e.expected.reduced_from = "ex94-21";
        e.invariants = {"x2 - x1"};
    }
    {
        auto& e = add(make_entry("ex94-22", XYZ, {},
                                 {"q", "x*q + r", "x^2*q + 2*x*r", "x^3*q + 3*x^2*r", "p", "x*p - z*r"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 0;
        e.expected.essential_3pt = true;
        e.expected.two_point_criterion = false;
        e.expected.infinitesimal_exists = true;
        e.expected.infinitesimal_invariant = "dy - z*dx";
    }
    {
        auto& e = add(make_entry("ex94-22r", XYZ, {}, {"q", "r", "x*r", "p", "x*p - z*r"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 1;
        e.expected.infinitesimal_exists = true;
        e.expected.reduced_from = "ex94-22";
        e.invariants = {"y2 - y1"};
    }
    {
        auto& e = add(make_entry("ex94-23", XYZ, {"c"},
                                 {"q", "p", "x*q + r", "x^2*q + 2*x*r", "x*p + y*q + c*r",
                                  "x^2*p + 2*x*y*q + 2*(c*x + y)*r"}));
        single_pair_invariant(e);
        e.invariants = {INV35};
    }
    {
        auto& e = add(make_entry("ex94-23r", XYZ, {"c"}, {"q", "p", "r", "x*r", "x*p + y*q - c*x*q", "y*r"}));
        e.expected.transitive = true;
        e.expected.common_integral_curves = 3;
        e.expected.reduced_from = "ex94-23";
    }
    {
        auto& e = add(make_entry("ex94-24", XYZ, {}, G24));
        single_pair_invariant(e);
        e.invariants = {INV24};
        e.expected.monodromy = true;
    }
    {
        auto& e = add(make_entry("ex94-24r", XYZ, {}, {"p", "q", "r", "y*p - x*q", "x*r", "y*r"}));
        e.expected.transitive = true;
        e.expected.pair_invariant_count = 1;
        e.expected.infinitesimal_exists = true;
        e.expected.monodromy = false;
        e.expected.reduced_from = "ex94-24";
        e.invariants = {"(x2 - x1)^2 + (y2 - y1)^2"};
    }

    // The projective group of the plane without the first six one-parameter forms.
    {
        auto& e = add(make_entry("ex95-32", XY, {}, CONIC));
        single_pair_invariant(e, false);
        e.invariants = {INV_CONIC};
        e.expected.free_mobility = true;
    }

    std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
    return out;
}

}  // namespace

const std::vector<CatalogEntry>& builtin_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

const CatalogEntry* find_entry(const std::string& id) {
    for (auto& e : builtin_entries())
        if (e.id == id) return &e;
    return nullptr;
}

std::vector<std::pair<std::vector<Rational>, Expected>> parameter_samples(const CatalogEntry& e) {
    std::vector<std::pair<std::vector<Rational>, Expected>> out;
    const auto& params = e.algebra.params;
    if (params.empty()) {
        out.emplace_back(std::vector<Rational>{}, e.expected);
        return out;
    }
    const Rational S[4] = {Rational(-2), Rational(-1, 3), Rational(1, 2), Rational(3)};
    for (int k = 0; k < 4; ++k) {
        std::vector<Rational> v;
        for (std::size_t i = 0; i < params.size(); ++i) v.push_back(S[(k + i) % 4]);
        if (satisfies(e.constraints, params, v)) out.emplace_back(v, e.expected);
    }
    for (auto& b : e.boundaries) {
        Expected x = e.expected;
        for (auto& [k, v] : b.overrides) set_expectation(x, k, v);
        out.emplace_back(b.values, x);
    }
    return out;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

struct Observation {
    std::string observed;
    std::string diagnostics;
};

class Recorder {
public:
    explicit Recorder(VerificationReport& r) : r_(r) {}

    template <class F>
    void run(const std::string& name, const std::string& expected, F&& f) {
        Check c;
        c.name = name;
        c.expected = expected;
        try {
            Observation o = f();
            c.observed = o.observed;
            c.diagnostics = o.diagnostics;
            c.pass = c.observed == expected;
        } catch (const std::exception& ex) {
            c.observed = "error";
            c.diagnostics = ex.what();
        }
        r_.checks.push_back(std::move(c));
    }

private:
    VerificationReport& r_;
};

// Size of the largest class of generators that are pairwise proportional
// over functions.
std::size_t largest_common_curve_class(const std::vector<VectorField>& gens, std::uint64_t seed) {
    std::size_t n = gens.size();
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = i;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (cls[j] == j && !gens[i].is_zero() && generic_rank({gens[i], gens[j]}, seed) == 1) cls[j] = cls[i];
    std::map<std::size_t, std::size_t> sizes;
    for (auto c : cls) ++sizes[c];
    std::size_t best = 0;
    for (auto& [c, s] : sizes) best = std::max(best, s);
    return best;
}

const std::vector<Rational> P0{0, 0, 0}, P1{1, 1, 0};
const std::vector<double> X0{0.3, -0.4, 0.2};

void sample_checks(Recorder& rec, const CatalogEntry& e, const std::vector<Rational>& values, const Expected& x,
                   std::uint64_t seed) {
    const LieAlgebra& L = e.algebra;
    LieAlgebra Ls = L.params.empty() ? L : L.with_params(values);
    std::string suffix = values.empty() ? "" : " [" + values_text(L.params, values) + "]";
    std::size_t n = L.dim();

    if (x.transitive)
        rec.run("transitive" + suffix, bool_text(*x.transitive),
                [&] { return Observation{bool_text(is_transitive(Ls, seed)), ""}; });

    if (x.pair_invariant_count)
        rec.run("pair_invariant_count" + suffix, std::to_string(*x.pair_invariant_count), [&] {
            std::size_t k = joint_invariant_count(Ls, 2, seed);
            return Observation{std::to_string(k), "generic rank " + std::to_string(2 * n - k) + " over pairs"};
        });

    if (x.two_point_criterion)
        rec.run("two_point_criterion" + suffix, bool_text(*x.two_point_criterion), [&] {
            TwoPointCriterion t = two_point_invariant_criterion(Ls, seed);
            std::string d = "determinant " + (t.determinant_zero ? std::string("0") : t.determinant);
            if (t.determinant_zero) d += t.some_minor_nonzero ? ", some 2x2 minor nonzero" : ", all 2x2 minors zero";
            return Observation{bool_text(t.holds), d};
        });

    if (x.essential_3pt)
        rec.run("essential_3pt" + suffix, bool_text(*x.essential_3pt), [&] {
            if (e.invariants.empty() && x.pair_invariant_count != 0u)
                throw std::invalid_argument("needs the pair invariants");
            std::vector<InvariantCandidate> js;
            for (auto& text : e.invariants) {
                InvariantCandidate j = parse_invariant(text, L, 2);
                if (!values.empty()) j.body = substitute_params(j.body, values);
                js.push_back(j);
            }
            EssentialCheck c = essential_invariant_check(Ls, 3, js, seed);
            return Observation{bool_text(c.essential), std::to_string(c.joint_count) + " invariants of 3 points, " +
                                                           std::to_string(c.pair_rank) + " from pairs"};
        });

    if (x.infinitesimal_exists)
        rec.run("infinitesimal_invariant_exists" + suffix, bool_text(*x.infinitesimal_exists), [&] {
            return Observation{bool_text(infinitesimal_invariant_exists(Ls, seed)),
                               "differential invariant count " + std::to_string(differential_invariant_count(Ls, seed))};
        });

    if (x.common_integral_curves)
        rec.run("common_integral_curves" + suffix, std::to_string(*x.common_integral_curves), [&] {
            return Observation{std::to_string(largest_common_curve_class(Ls.generators, seed)), ""};
        });

    if (x.monodromy)
        rec.run("monodromy" + suffix, bool_text(*x.monodromy), [&] {
            VectorField W = two_point_stabilizer(Ls, P0, P1);
            double t_max = *x.monodromy ? 10 : 100;
            MonodromyOptions opt;
            opt.seed = seed;
            if (!*x.monodromy) opt.steps = 50000;
            MonodromyResult m = monodromy_period(W, X0, t_max, 1e-6, opt);
            std::ostringstream d;
            d.precision(10);
            if (m.period)
                d << "period " << *m.period << ", off 2*pi by " << (*m.period - 2 * std::numbers::pi);
            else
                d << "period None up to t = " << t_max << ", closest return " << m.min_distance;
            return Observation{bool_text(m.period.has_value()), d.str()};
        });

    if (x.free_mobility)
        rec.run("free_mobility" + suffix, bool_text(*x.free_mobility), [&] {
            std::vector<Rational> base = e.base ? *e.base : std::vector<Rational>(n, Rational(0));
            if (!e.base && evaluation_rank(Ls, base) < n) base = generic_base_point(Ls, seed);
            MobilityVerdict v = free_mobility_infinitesimal(Ls, base, seed);
            std::string d = "isotropy dimension " + std::to_string(v.isotropy_dim);
            if (!v.free_mobility) d += ", fails at " + to_string(v.failing_stage) + ": " + v.witness;
            return Observation{bool_text(v.free_mobility), d};
        });
}

}  // namespace

VerificationReport verify_entry(const CatalogEntry& e, std::uint64_t seed) {
    VerificationReport rep;
    rep.entry = e.id;
    rep.seed = seed;
    Recorder rec(rep);
    const LieAlgebra& L = e.algebra;

    rec.run("closed", bool_text(e.expected.closed), [&] {
        ClosureResult c = check_closure(L);
        if (!c.closed)
            return Observation{"false", "[X" + std::to_string(c.j + 1) + ", X" + std::to_string(c.k + 1) +
                                            "] leaves the span by " + to_string(c.residual, L.names())};
        for (auto& k : c.constants.c)
            if (k.has_kind(SymKind::Var)) return Observation{"false", "structure constants depend on the variables"};
        bool ok = verify_structure(c.constants);
        return Observation{bool_text(ok), ok ? "antisymmetry and Jacobi identities hold" : "Jacobi identity fails"};
    });

    for (std::size_t i = 0; i < e.invariants.size(); ++i)
        rec.run("invariant " + std::to_string(i + 1), to_string(Verdict::Proven), [&] {
            InvariantVerdict v = verify_joint_invariant(L, parse_invariant(e.invariants[i], L, 2),
                                                        VerifyMode::Symbolic, seed);
            std::string d = e.invariants[i];
            if (v.verdict == Verdict::Refuted)
                d += "; X" + std::to_string(v.generator + 1) + " leaves " + v.witness;
            return Observation{to_string(v.verdict), d};
        });

    if (e.expected.infinitesimal_invariant)
        rec.run("infinitesimal_invariant", "true", [&] {
            Expression w = parse_expression(*e.expected.infinitesimal_invariant, differential_names(L.vars), L.params);
            for (std::size_t k = 0; k < L.size(); ++k) {
                Expression r = apply_to_function(prolong_differentials(L.generators[k]), w);
                if (is_identically_zero(r, seed) != ZeroVerdict::Yes)
                    return Observation{"false", "X" + std::to_string(k + 1) + " does not annihilate it"};
            }
            return Observation{"true", *e.expected.infinitesimal_invariant + " annihilated by every prolonged generator"};
        });

    if (e.expected.reduced_from)
        rec.run("reduced_from", *e.expected.reduced_from, [&] {
            const CatalogEntry* parent = find_entry(*e.expected.reduced_from);
            if (!parent) throw std::invalid_argument("unknown entry " + *e.expected.reduced_from);
            LieAlgebra R = reduced_algebra(parent->algebra, std::vector<Rational>(L.dim(), Rational(0)));
            bool same = same_span(R.generators, L.generators);
            return Observation{same ? parent->id : "different span",
                               "reduced at the origin: " + std::to_string(R.size()) + " generators"};
        });

    for (auto& [values, x] : parameter_samples(e)) sample_checks(rec, e, values, x, seed);
    return rep;
}

std::vector<VerificationReport> verify_entries(const std::vector<CatalogEntry>& es, std::uint64_t seed) {
    std::vector<std::future<VerificationReport>> jobs;
    for (auto& e : es) jobs.push_back(std::async(std::launch::async, [&e, seed] { return verify_entry(e, seed); }));
    std::vector<VerificationReport> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

std::string export_report(const std::vector<VerificationReport>& reports, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (auto& r : reports) {
            nlohmann::ordered_json checks = nlohmann::ordered_json::array();
            for (auto& c : r.checks)
                checks.push_back({{"name", c.name},
                                  {"expected", c.expected},
                                  {"observed", c.observed},
                                  {"status", c.pass ? "pass" : "fail"},
                                  {"diagnostics", c.diagnostics}});
            doc.push_back({{"entry", r.entry}, {"seed", r.seed}, {"checks", checks}});
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    for (auto& r : reports) {
        out << r.entry << " (seed " << r.seed << "): " << (r.passed() ? "pass" : "fail") << "\n";
        for (auto& c : r.checks) {
            out << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << ": expected " << c.expected << ", observed "
                << c.observed;
            if (!c.diagnostics.empty()) out << " (" << c.diagnostics << ")";
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace lie
