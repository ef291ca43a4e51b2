#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lie/algebra.hpp"

namespace lie {

enum class ConstraintKind { NonZero, NonNegative, SquareAtMostOne, NotAllZero };

struct ParamConstraint {
    ConstraintKind kind = ConstraintKind::NonZero;
    std::string param;  // empty for NotAllZero

    bool operator==(const ParamConstraint&) const = default;
};

// "c != 0", "c >= 0", "c^2 <= 1", "params != 0"
std::string to_string(const ParamConstraint& c);
ParamConstraint parse_constraint(const std::string& text);
bool satisfies(const std::vector<ParamConstraint>& cs, const std::vector<std::string>& params,
               const std::vector<Rational>& values);

struct Expected {
    bool closed = true;
    std::optional<bool> transitive;
    std::optional<std::size_t> pair_invariant_count;
    std::optional<bool> essential_3pt;
    std::optional<bool> two_point_criterion;
    std::optional<bool> monodromy;
    std::optional<bool> free_mobility;
    std::optional<bool> infinitesimal_exists;
    // Over x, y, z, dx, dy, dz.
    std::optional<std::string> infinitesimal_invariant;
    // Largest set of generators with common integral curves.
    std::optional<std::size_t> common_integral_curves;
    // Id of the entry whose reduced group this is.
    std::optional<std::string> reduced_from;

    bool operator==(const Expected&) const = default;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues to_key_values(const Expected& e);
// Throws std::invalid_argument on unknown keys or malformed values.
void set_expectation(Expected& e, const std::string& key, const std::string& value);

// Parameter values checked in addition to the default samples, with the
// expectations that change there.
struct Boundary {
    std::vector<Rational> values;
    KeyValues overrides;

    bool operator==(const Boundary&) const = default;
};

struct CatalogEntry {
    std::string id;
    LieAlgebra algebra;
    std::vector<std::string> field_texts;
    std::vector<ParamConstraint> constraints;
    std::vector<std::string> invariants;  // two-point invariants over x1, y1, ..., z2
    Expected expected;
    std::vector<Boundary> boundaries;
    // Point used for the mobility check; the origin when omitted.
    std::optional<std::vector<Rational>> base;
};

CatalogEntry make_entry(std::string id, std::vector<std::string> vars, std::vector<std::string> params,
                        std::vector<std::string> fields);

// Sorted by id.
const std::vector<CatalogEntry>& builtin_entries();
const CatalogEntry* find_entry(const std::string& id);

// {-2, -1/3, 1/2, 3} filtered by the constraints, then the boundaries; each
// with the expectations in force there. One empty sample without parameters.
std::vector<std::pair<std::vector<Rational>, Expected>> parameter_samples(const CatalogEntry& e);

struct Check {
    std::string name;
    std::string expected;
    std::string observed;
    bool pass = false;
    std::string diagnostics;
};

struct VerificationReport {
    std::string entry;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    bool passed() const;
};

VerificationReport verify_entry(const CatalogEntry& e, std::uint64_t seed);
// Entries run concurrently; the result is in input order.
std::vector<VerificationReport> verify_entries(const std::vector<CatalogEntry>& es, std::uint64_t seed);

enum class ReportFormat { Json, Text };
std::string export_report(const std::vector<VerificationReport>& reports, ReportFormat format);

}  // namespace lie
