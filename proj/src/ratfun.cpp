#include "lie/ratfun.hpp"

#include <stdexcept>

namespace lie {

RatFun RatFun::from_parts(Poly num, Factors den) {
    RatFun r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    r.normalize();
    return r;
}

void RatFun::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    Factors merged;
    for (auto& [f, e] : den_) {
        if (e == 0) continue;
        if (f.is_zero()) throw std::domain_error("RatFun: zero denominator");
        Poly g = f;
        Rational lc = g.make_monic();
        if (e > 0) {
            Rational s = 1;
            for (int i = 0; i < e; ++i) s *= lc;
            num_ = num_ * Rational(1 / s);
        } else {
            Rational s = 1;
            for (int i = 0; i < -e; ++i) s *= lc;
            num_ = num_ * s;
        }
        if (g.is_constant()) continue;
        if (e < 0) {
            num_ = num_ * g.pow(-e);
            continue;
        }
        bool found = false;
        for (auto& m : merged)
            if (m.first == g) {
                m.second += e;
                found = true;
                break;
            }
        if (!found) merged.emplace_back(std::move(g), e);
    }
    // Cancel factors that divide the numerator.
    Factors kept;
    for (auto& [f, e] : merged) {
        int left = e;
        while (left > 0) {
            auto q = num_.divide_exact(f);
            if (!q) break;
            num_ = std::move(*q);
            --left;
        }
        if (left > 0) kept.emplace_back(f, left);
    }
    den_ = std::move(kept);
}

Poly RatFun::den_product() const {
    Poly p(Rational(1));
    for (auto& [f, e] : den_) p = p * f.pow(e);
    return p;
}

bool RatFun::has_kind(SymKind k) const {
    if (num_.has_kind(k)) return true;
    for (auto& [f, e] : den_)
        if (f.has_kind(k)) return true;
    return false;
}

bool RatFun::depends_on(Sym s) const {
    if (num_.depends_on(s)) return true;
    for (auto& [f, e] : den_)
        if (f.depends_on(s)) return true;
    return false;
}

static int exponent_of(const RatFun::Factors& fs, const Poly& f) {
    for (auto& [g, e] : fs)
        if (g == f) return e;
    return 0;
}

RatFun RatFun::operator+(const RatFun& o) const {
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    if (den_.empty() && o.den_.empty()) return RatFun(num_ + o.num_);
    Factors lcm = den_;
    for (auto& [f, e] : o.den_) {
        bool found = false;
        for (auto& l : lcm)
            if (l.first == f) {
                l.second = std::max(l.second, e);
                found = true;
                break;
            }
        if (!found) lcm.emplace_back(f, e);
    }
    Poly a = num_, b = o.num_;
    for (auto& [f, e] : lcm) {
        int ea = e - exponent_of(den_, f);
        int eb = e - exponent_of(o.den_, f);
        if (ea > 0) a = a * f.pow(ea);
        if (eb > 0) b = b * f.pow(eb);
    }
    RatFun r;
    r.num_ = a + b;
    r.den_ = std::move(lcm);
    r.normalize();
    return r;
}

RatFun RatFun::operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFun RatFun::operator-(const RatFun& o) const { return *this + (-o); }

RatFun RatFun::operator*(const RatFun& o) const {
    if (is_zero() || o.is_zero()) return RatFun();
    if (den_.empty() && o.den_.empty()) return RatFun(num_ * o.num_);
    RatFun r;
    r.num_ = num_ * o.num_;
    r.den_ = den_;
    r.den_.insert(r.den_.end(), o.den_.begin(), o.den_.end());
    r.normalize();
    return r;
}

RatFun RatFun::inverse() const {
    if (is_zero()) throw std::domain_error("RatFun: inverse of zero");
    RatFun r;
    r.num_ = den_product();
    if (num_.is_constant()) {
        r.num_ = r.num_ * Rational(1 / num_.constant_term());
    } else {
        r.den_.emplace_back(num_, 1);
    }
    r.normalize();
    return r;
}

RatFun RatFun::operator/(const RatFun& o) const { return *this * o.inverse(); }

RatFun RatFun::pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    RatFun r(Rational(1)), b = *this;
    while (k > 0) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

RatFun RatFun::derivative(Sym s) const {
    // d(N / prod f^e) = (N' - N * sum e f'/f) / prod f^e
    RatFun r(num_.derivative(s));
    for (auto& [f, e] : den_) {
        Poly df = f.derivative(s);
        if (df.is_zero()) continue;
        r = r - RatFun::from_parts(num_ * df * Rational(e), {{f, 1}});
    }
    RatFun d;
    d.num_ = Poly(Rational(1));
    d.den_ = den_;
    return r * d;
}

RatFun RatFun::substitute_values(const std::map<Sym, Rational>& vals) const {
    Factors den;
    for (auto& [f, e] : den_) {
        Poly g = f.substitute_values(vals);
        if (g.is_zero()) throw std::domain_error("RatFun: denominator vanishes after substitution");
        den.emplace_back(std::move(g), e);
    }
    return from_parts(num_.substitute_values(vals), std::move(den));
}

std::string RatFun::to_string(const std::vector<std::string>& vars,
                              const std::vector<std::string>& params,
                              const std::vector<std::string>& kernels) const {
    std::string n = num_.to_string(vars, params, kernels);
    if (den_.empty()) return n;
    if (num_.terms().size() > 1) n = "(" + n + ")";
    std::string d;
    for (auto& [f, e] : den_) {
        if (!d.empty()) d += "*";
        std::string fs = f.to_string(vars, params, kernels);
        bool atom = f.terms().size() == 1 && f.leading_coeff() == 1 && f.leading_monomial().factors.size() == 1 &&
                    f.leading_monomial().factors[0].second == 1;
        if (!atom) fs = "(" + fs + ")";
        if (e != 1) fs += "^" + std::to_string(e);
        d += fs;
    }
    if (den_.size() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace lie
