#include "lie/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace lie {

Monomial Monomial::from_unsorted(std::vector<std::pair<Sym, int>> fs) {
    std::sort(fs.begin(), fs.end());
    Monomial m;
    for (auto [s, e] : fs) {
        if (e == 0) continue;
        if (!m.factors.empty() && m.factors.back().first == s)
            m.factors.back().second += e;
        else
            m.factors.emplace_back(s, e);
    }
    return m;
}

int Monomial::degree() const {
    int d = 0;
    for (auto& f : factors) d += f.second;
    return d;
}

int Monomial::exponent(Sym s) const {
    for (auto& f : factors)
        if (f.first == s) return f.second;
    return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.factors.reserve(factors.size() + o.factors.size());
    size_t i = 0, j = 0;
    while (i < factors.size() || j < o.factors.size()) {
        if (j == o.factors.size() || (i < factors.size() && factors[i].first < o.factors[j].first)) {
            r.factors.push_back(factors[i++]);
        } else if (i == factors.size() || o.factors[j].first < factors[i].first) {
            r.factors.push_back(o.factors[j++]);
        } else {
            r.factors.emplace_back(factors[i].first, factors[i].second + o.factors[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
    Monomial r;
    size_t i = 0;
    for (auto [s, e] : o.factors) {
        while (i < factors.size() && factors[i].first < s) r.factors.push_back(factors[i++]);
        if (i == factors.size() || factors[i].first != s || factors[i].second < e) return std::nullopt;
        if (factors[i].second > e) r.factors.emplace_back(s, factors[i].second - e);
        ++i;
    }
    while (i < factors.size()) r.factors.push_back(factors[i++]);
    return r;
}

bool GradLexGreater::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    size_t n = std::min(a.factors.size(), b.factors.size());
    for (size_t i = 0; i < n; ++i) {
        auto [sa, ea] = a.factors[i];
        auto [sb, eb] = b.factors[i];
        if (sa != sb) return sa < sb;
        if (ea != eb) return ea > eb;
    }
    return a.factors.size() > b.factors.size();
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::symbol(Sym s, int exp) {
    Poly p;
    Monomial m;
    if (exp != 0) m.factors.emplace_back(s, exp);
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Poly::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

int Poly::degree_in(Sym s) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.exponent(s));
    return d;
}

bool Poly::has_kind(SymKind k) const {
    for (auto& [m, c] : terms_)
        for (auto& f : m.factors)
            if (sym_kind(f.first) == k) return true;
    return false;
}

bool Poly::depends_on(Sym s) const {
    for (auto& [m, c] : terms_)
        if (m.exponent(s) != 0) return true;
    return false;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

Poly Poly::operator*(const Rational& c) const {
    if (c == 0) return Poly();
    Poly r = *this;
    for (auto& [m, v] : r.terms_) v *= c;
    return r;
}

Poly Poly::pow(int k) const {
    if (k < 0) throw std::invalid_argument("Poly::pow: negative exponent");
    Poly result(Rational(1)), base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    for (; a != terms_.end(); ++a, ++b)
        if (a->first != b->first || a->second != b->second) return false;
    return true;
}

Poly Poly::derivative(Sym s) const {
    Poly r;
    for (auto& [m, c] : terms_) {
        int e = m.exponent(s);
        if (e == 0) continue;
        Monomial dm;
        for (auto f : m.factors) {
            if (f.first == s) {
                if (f.second > 1) dm.factors.emplace_back(s, f.second - 1);
            } else {
                dm.factors.push_back(f);
            }
        }
        r.add_term(dm, c * e);
    }
    return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly::divide_exact: division by zero");
    Poly rem = *this, quot;
    const Monomial& lm = d.leading_monomial();
    const Rational& lc = d.leading_coeff();
    while (!rem.is_zero()) {
        auto q = rem.leading_monomial().divide(lm);
        if (!q) return std::nullopt;
        Rational c = rem.leading_coeff() / lc;
        Poly t;
        t.add_term(*q, c);
        quot += t;
        rem -= d * t;
    }
    return quot;
}

Rational Poly::make_monic() {
    if (terms_.empty()) return Rational(1);
    Rational lc = leading_coeff();
    if (lc != 1)
        for (auto& [m, c] : terms_) c /= lc;
    return lc;
}

Poly Poly::substitute(Sym s, const Poly& v) const {
    Poly r;
    std::vector<Poly> powers{Poly(Rational(1))};
    for (auto& [m, c] : terms_) {
        int e = m.exponent(s);
        if (e == 0) {
            r.add_term(m, c);
            continue;
        }
        while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * v);
        Monomial rest;
        for (auto f : m.factors)
            if (f.first != s) rest.factors.push_back(f);
        Poly t;
        t.add_term(rest, c);
        r += t * powers[e];
    }
    return r;
}

Poly Poly::substitute_values(const std::map<Sym, Rational>& vals) const {
    Poly r;
    for (auto& [m, c] : terms_) {
        Rational coef = c;
        Monomial rest;
        for (auto f : m.factors) {
            auto it = vals.find(f.first);
            if (it == vals.end()) {
                rest.factors.push_back(f);
            } else {
                Rational p = 1;
                for (int i = 0; i < f.second; ++i) p *= it->second;
                coef *= p;
            }
        }
        r.add_term(rest, coef);
    }
    return r;
}

std::string format_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

static std::string sym_name(Sym s, const std::vector<std::string>& vars,
                            const std::vector<std::string>& params,
                            const std::vector<std::string>& kernels) {
    std::uint32_t i = sym_index(s);
    const std::vector<std::string>* names = nullptr;
    const char* fallback = "?";
    switch (sym_kind(s)) {
        case SymKind::Var: names = &vars; fallback = "v"; break;
        case SymKind::Param: names = &params; fallback = "c"; break;
        default: names = &kernels; fallback = "k"; break;
    }
    if (i < names->size()) return (*names)[i];
    return std::string(fallback) + "_" + std::to_string(i);
}

std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& vars,
                               const std::vector<std::string>& params,
                               const std::vector<std::string>& kernels) {
    std::string out;
    for (auto [s, e] : m.factors) {
        if (!out.empty()) out += "*";
        out += sym_name(s, vars, params, kernels);
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::string Poly::to_string(const std::vector<std::string>& var_names,
                            const std::vector<std::string>& param_names,
                            const std::vector<std::string>& kernel_names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : terms_) {
        bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        if (m.is_one()) {
            out += format_rational(a);
        } else {
            if (a != 1) out += format_rational(a) + "*";
            out += monomial_to_string(m, var_names, param_names, kernel_names);
        }
    }
    return out;
}

}  // namespace lie
