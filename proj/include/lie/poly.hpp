#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace lie {

using Rational = mpq_class;
using Integer = mpz_class;

// Symbols are packed as kind (top two bits) + index. Vars sort before params,
// params before kernels, so graded-lex favours coordinates.
enum class SymKind : std::uint32_t { Var = 0, Param = 1, Kernel = 2 };

using Sym = std::uint32_t;

inline Sym make_sym(SymKind k, std::uint32_t index) {
    return (static_cast<std::uint32_t>(k) << 30) | index;
}
inline SymKind sym_kind(Sym s) { return static_cast<SymKind>(s >> 30); }
inline std::uint32_t sym_index(Sym s) { return s & 0x3fffffffu; }

// Sparse monomial: (symbol, exponent) pairs sorted by symbol, exponents > 0.
struct Monomial {
    std::vector<std::pair<Sym, int>> factors;

    static Monomial from_unsorted(std::vector<std::pair<Sym, int>> fs);
    int degree() const;
    int exponent(Sym s) const;
    bool is_one() const { return factors.empty(); }
    Monomial operator*(const Monomial& o) const;
    // Exact division; nullopt when o does not divide *this.
    std::optional<Monomial> divide(const Monomial& o) const;
    bool operator==(const Monomial& o) const { return factors == o.factors; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

// Graded lexicographic "greater" ordering: higher degree first, then the
// monomial with the larger exponent on the earliest symbol.
struct GradLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
public:
    using Terms = std::map<Monomial, Rational, GradLexGreater>;

    Poly() = default;
    explicit Poly(const Rational& c);
    static Poly symbol(Sym s, int exp = 1);
    static Poly var(std::uint32_t i) { return symbol(make_sym(SymKind::Var, i)); }
    static Poly param(std::uint32_t i) { return symbol(make_sym(SymKind::Param, i)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    // Coefficient of the leading (graded-lex greatest) monomial.
    const Rational& leading_coeff() const { return terms_.begin()->second; }
    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    int degree() const;
    int degree_in(Sym s) const;
    bool has_kind(SymKind k) const;
    bool depends_on(Sym s) const;

    void add_term(const Monomial& m, const Rational& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly pow(int k) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(Sym s) const;
    // Exact division; nullopt if d does not divide *this.
    std::optional<Poly> divide_exact(const Poly& d) const;
    // Make the leading coefficient one; returns the factor divided out.
    Rational make_monic();

    // Replace symbol s by the polynomial v.
    Poly substitute(Sym s, const Poly& v) const;
    // Replace several symbols by rationals in one pass.
    Poly substitute_values(const std::map<Sym, Rational>& vals) const;
    // Apply f to every symbol (used to rename blocks of variables).
    template <class F>
    Poly rename(F f) const;

    std::string to_string(const std::vector<std::string>& var_names,
                          const std::vector<std::string>& param_names,
                          const std::vector<std::string>& kernel_names = {}) const;

private:
    Terms terms_;
};

std::string format_rational(const Rational& q);
std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& vars,
                               const std::vector<std::string>& params,
                               const std::vector<std::string>& kernels);

template <class F>
Poly Poly::rename(F f) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        std::vector<std::pair<Sym, int>> fs;
        for (auto [s, e] : m.factors) fs.emplace_back(f(s), e);
        out.add_term(Monomial::from_unsorted(std::move(fs)), c);
    }
    return out;
}

}  // namespace lie
