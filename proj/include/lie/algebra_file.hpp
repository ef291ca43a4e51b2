#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lie/catalog.hpp"

namespace lie {

// Line-based description of an algebra:
//   id: thm37-8
//   vars: x y z
//   params: c
//   constraint: c != 0
//   field: x^2*p + 2*x*r
//   invariant[s=2]: z1 + z2 - log((x2 - x1)^2)
//   expect: pair_invariant_count=1
//   boundary: c=0 | two_point_criterion=true
//   base: 0 0 0
// Blank lines and lines starting with '#' are ignored.
struct AlgebraFile {
    std::string id;
    std::vector<std::string> vars;
    std::vector<std::string> params;
    std::vector<std::string> fields;
    std::vector<std::pair<std::size_t, std::string>> invariants;  // (s, text)
    std::vector<ParamConstraint> constraints;
    KeyValues expects;
    std::vector<Boundary> boundaries;
    std::optional<std::vector<Rational>> base;
};

class FileFormatError : public std::runtime_error {
public:
    FileFormatError(const std::string& msg, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};

AlgebraFile parse_algebra_file(const std::string& text);
// Throws std::runtime_error when the file cannot be read.
AlgebraFile read_algebra_file(const std::string& path);

// Field texts are parsed here; throws ParseError.
LieAlgebra to_algebra(const AlgebraFile& f);
Expected expectations(const AlgebraFile& f);

std::string write_algebra_file(const CatalogEntry& e);
CatalogEntry entry_from_file(const AlgebraFile& f);

}  // namespace lie
