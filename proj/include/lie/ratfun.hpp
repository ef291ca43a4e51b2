#pragma once

#include <utility>
#include <vector>

#include "lie/poly.hpp"

namespace lie {

// Quotient num / prod(den_i^e_i). Denominator factors are kept monic and
// unexpanded, so sums over shared denominators stay small. Equality to zero is
// exact: the numerator polynomial is tested, never the value.
class RatFun {
public:
    using Factors = std::vector<std::pair<Poly, int>>;

    RatFun() = default;
    RatFun(const Poly& num) : num_(num) {}
    RatFun(const Rational& c) : num_(c) {}
    RatFun(long c) : num_(Rational(c)) {}
    static RatFun from_parts(Poly num, Factors den);

    const Poly& num() const { return num_; }
    const Factors& den() const { return den_; }
    Poly den_product() const;

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }
    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    bool has_kind(SymKind k) const;
    bool depends_on(Sym s) const;

    RatFun operator+(const RatFun& o) const;
    RatFun operator-(const RatFun& o) const;
    RatFun operator-() const;
    RatFun operator*(const RatFun& o) const;
    RatFun operator/(const RatFun& o) const;
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun inverse() const;
    RatFun pow(int k) const;
    bool operator==(const RatFun& o) const { return (*this - o).is_zero(); }
    bool operator!=(const RatFun& o) const { return !(*this == o); }

    RatFun derivative(Sym s) const;
    RatFun substitute_values(const std::map<Sym, Rational>& vals) const;

    std::string to_string(const std::vector<std::string>& vars,
                          const std::vector<std::string>& params,
                          const std::vector<std::string>& kernels = {}) const;

private:
    void normalize();

    Poly num_;
    Factors den_;
};

inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(const RatFun& f) { return f.is_zero(); }

}  // namespace lie
