#include "lie/fields.hpp"

#include <cmath>
#include <map>

#include "lie/random.hpp"

namespace lie {

VectorField VectorField::partial(std::size_t n, std::size_t i) {
    VectorField X = zero(n);
    X.coeffs[i] = Expression(1L);
    return X;
}

bool VectorField::is_zero() const {
    for (auto& c : coeffs)
        if (is_identically_zero(c) != ZeroVerdict::Yes) return false;
    return true;
}

bool VectorField::is_polynomial() const {
    for (auto& c : coeffs)
        if (!c.is_poly()) return false;
    return true;
}

static void check_dims(const VectorField& a, const VectorField& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("vector fields of dimension " + std::to_string(a.dim()) + " and " +
                                std::to_string(b.dim()));
}

VectorField VectorField::operator+(const VectorField& o) const {
    check_dims(*this, o);
    VectorField r = *this;
    for (std::size_t i = 0; i < dim(); ++i) r.coeffs[i] = r.coeffs[i] + o.coeffs[i];
    return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
    check_dims(*this, o);
    VectorField r = *this;
    for (std::size_t i = 0; i < dim(); ++i) r.coeffs[i] = r.coeffs[i] - o.coeffs[i];
    return r;
}

VectorField VectorField::operator*(const Expression& f) const {
    VectorField r = *this;
    for (auto& c : r.coeffs) c = c * f;
    return r;
}

std::vector<std::string> basis_tokens(std::size_t dim) {
    if (dim <= 3) {
        std::vector<std::string> t{"p", "q", "r"};
        t.resize(dim);
        return t;
    }
    std::vector<std::string> t;
    for (std::size_t i = 1; i <= dim; ++i) t.push_back("d" + std::to_string(i));
    return t;
}

VectorField parse_field(const std::string& text, const std::vector<std::string>& vars,
                        const std::vector<std::string>& params) {
    std::size_t n = vars.size();
    std::vector<std::string> tokens = basis_tokens(n);
    std::vector<std::string> ext = vars;
    for (auto& t : tokens) {
        for (auto& v : vars)
            if (v == t) throw ParseError("variable name '" + v + "' clashes with a basis token", 0);
        ext.push_back(t);
    }
    // d1..dn are accepted in low dimension too.
    if (n <= 3)
        for (std::size_t i = 1; i <= n; ++i) ext.push_back("d" + std::to_string(i));
    Expression e = parse_expression(text, ext, params);
    VectorField X = VectorField::zero(n);
    Expression rest = e;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> slots{static_cast<std::uint32_t>(n + i)};
        if (n <= 3) slots.push_back(static_cast<std::uint32_t>(2 * n + i));
        for (auto slot : slots) {
            Expression c = differentiate(e, slot);
            for (std::size_t j = n; j < ext.size(); ++j)
                if (c.depends_on_var(static_cast<std::uint32_t>(j)))
                    throw ParseError("field is not linear in the basis tokens: " + text, 0);
            X.coeffs[i] = X.coeffs[i] + c;
            rest = rest - c * Expression::var(slot);
        }
    }
    if (is_identically_zero(rest) != ZeroVerdict::Yes)
        throw ParseError("field has terms without a basis token: " + text, 0);
    return X;
}

std::string to_string(const VectorField& X, const Names& names, const std::vector<std::string>& tokens_in) {
    std::vector<std::string> tokens = tokens_in.empty() ? basis_tokens(X.dim()) : tokens_in;
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < X.dim(); ++i) {
        const Expression& c = X.coeffs[i];
        if (c.is_zero()) continue;
        if (c.is_poly()) {
            for (auto& [m, k] : c.poly().terms()) {
                Poly t;
                t.add_term(m, k);
                std::string s = t.to_string(names.vars, names.params);
                if (m.is_one()) {
                    if (s == "1")
                        s = tokens[i];
                    else if (s == "-1")
                        s = "-" + tokens[i];
                    else
                        s += "*" + tokens[i];
                } else {
                    s += "*" + tokens[i];
                }
                parts.push_back(s);
            }
        } else {
            parts.push_back("(" + c.to_string(names) + ")*" + tokens[i]);
        }
    }
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i][0] == '-')
            out += " - " + parts[i].substr(1);
        else
            out += " + " + parts[i];
    }
    return out;
}

Expression apply_to_function(const VectorField& X, const Expression& f) {
    std::vector<Expression> terms;
    for (std::size_t i = 0; i < X.dim(); ++i) {
        if (X.coeffs[i].is_zero()) continue;
        Expression d = differentiate(f, static_cast<std::uint32_t>(i));
        if (d.is_zero()) continue;
        terms.push_back(X.coeffs[i] * d);
    }
    Expression s = Expression::sum(terms);
    return s.is_poly() ? s : normalize(s);
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
    check_dims(X, Y);
    VectorField Z = VectorField::zero(X.dim());
    for (std::size_t i = 0; i < X.dim(); ++i) {
        Expression v = apply_to_function(X, Y.coeffs[i]) - apply_to_function(Y, X.coeffs[i]);
        Z.coeffs[i] = v.is_poly() ? v : normalize(v);
    }
    return Z;
}

std::vector<double> evaluate_at_point(const VectorField& X, const Point& p) {
    std::vector<double> v;
    for (auto& c : X.coeffs) v.push_back(evaluate_numeric(c, p));
    return v;
}

std::vector<Rational> evaluate_exact(const VectorField& X, const ExactPoint& p) {
    std::vector<Rational> v;
    for (auto& c : X.coeffs) {
        auto q = evaluate_exact(c, p);
        if (!q) throw DomainError("not exactly evaluable", c.to_string());
        v.push_back(*q);
    }
    return v;
}

bool fields_equal(const VectorField& X, const VectorField& Y) {
    if (X.dim() != Y.dim()) return false;
    for (std::size_t i = 0; i < X.dim(); ++i)
        if (is_identically_zero(X.coeffs[i] - Y.coeffs[i]) != ZeroVerdict::Yes) return false;
    return true;
}

ExactPoint random_exact_point(Rng& rng, std::size_t dim, std::size_t params, std::size_t block) {
    for (;;) {
        ExactPoint p;
        for (std::size_t i = 0; i < dim; ++i) p.coords.push_back(rng.rational());
        for (std::size_t i = 0; i < params; ++i) p.params.push_back(rng.generic_parameter());
        if (block == 0 || block >= dim) return p;
        bool ok = true;
        for (std::size_t a = 0; a < dim && ok; ++a)
            for (std::size_t b = a + block; b < dim && ok; b += block)
                if (p.coords[a] == p.coords[b]) ok = false;
        if (ok) return p;
    }
}

static std::size_t param_slots(const std::vector<VectorField>& fields) {
    std::size_t np = 0;
    for (auto& X : fields)
        for (auto& c : X.coeffs) np = std::max<std::size_t>(np, c.param_slots());
    return np;
}

std::optional<std::size_t> rank_at(const std::vector<VectorField>& fields, const ExactPoint& p) {
    bool numeric = false;
    Matrix<Rational> m;
    Matrix<double> md;
    Point pd;
    for (auto& q : p.coords) pd.coords.push_back(q.get_d());
    for (auto& q : p.params) pd.params.push_back(q.get_d());
    for (auto& X : fields) {
        std::vector<Rational> row;
        std::vector<double> rowd;
        for (auto& c : X.coeffs) {
            if (c.contains_fn()) {
                numeric = true;
                try {
                    double v = evaluate_numeric(c, pd);
                    if (!std::isfinite(v)) return std::nullopt;
                    rowd.push_back(v);
                } catch (const DomainError&) {
                    return std::nullopt;
                }
                row.push_back(0);
                continue;
            }
            auto v = evaluate_exact(c, p);
            if (!v) return std::nullopt;
            row.push_back(*v);
            rowd.push_back(v->get_d());
        }
        m.push_back(std::move(row));
        md.push_back(std::move(rowd));
    }
    if (numeric) return numeric_rank(md);
    return rank(m);
}

std::size_t generic_rank(const std::vector<VectorField>& fields, std::uint64_t seed, const Sampling& s) {
    if (fields.empty()) return 0;
    std::size_t n = fields[0].dim();
    for (auto& X : fields)
        if (X.dim() != n) throw DimensionMismatch("generic_rank: mixed dimensions");
    std::size_t np = s.params.empty() ? std::max(s.param_count, param_slots(fields)) : 0;
    Rng rng(seed);
    std::size_t best = 0;
    int found = 0;
    for (int attempt = 0; found < s.points && attempt < s.points * 50; ++attempt) {
        ExactPoint p = random_exact_point(rng, n, np, s.block);
        if (!s.params.empty()) p.params = s.params;
        auto r = rank_at(fields, p);
        if (!r) continue;
        ++found;
        best = std::max(best, *r);
        if (best == std::min(n, fields.size())) break;
    }
    return best;
}

bool linear_independence_over_constants(const std::vector<VectorField>& fields_in, int max_degree,
                                        std::uint64_t seed) {
    if (fields_in.empty()) return true;
    Rng rng(seed);
    std::size_t np = param_slots(fields_in);
    std::vector<Rational> pv;
    for (std::size_t i = 0; i < np; ++i) pv.push_back(rng.generic_parameter());
    std::vector<VectorField> fields;
    for (auto& X : fields_in) {
        VectorField Y = X;
        for (auto& c : Y.coeffs) c = substitute_params(c, pv);
        fields.push_back(Y);
    }
    std::size_t n = fields[0].dim();
    bool all_poly = true;
    for (auto& X : fields) all_poly = all_poly && X.is_polynomial();
    if (all_poly) {
        // A polynomial is its own Taylor series at the origin.
        std::map<std::pair<std::size_t, Monomial>, std::size_t, bool (*)(const std::pair<std::size_t, Monomial>&,
                                                                          const std::pair<std::size_t, Monomial>&)>
            cols([](const std::pair<std::size_t, Monomial>& a, const std::pair<std::size_t, Monomial>& b) {
                if (a.first != b.first) return a.first < b.first;
                return GradLexGreater()(a.second, b.second);
            });
        for (auto& X : fields)
            for (std::size_t i = 0; i < n; ++i)
                for (auto& [m, c] : X.coeffs[i].poly().terms()) cols.emplace(std::make_pair(i, m), cols.size());
        Matrix<Rational> M;
        for (auto& X : fields) {
            std::vector<Rational> row(cols.size(), Rational(0));
            for (std::size_t i = 0; i < n; ++i)
                for (auto& [m, c] : X.coeffs[i].poly().terms()) row[cols.at({i, m})] = c;
            M.push_back(row);
        }
        return rank(M) == fields.size();
    }
    // General case: derivatives up to max_degree at a base point where all are defined.
    std::vector<std::vector<std::uint32_t>> multi{{}};
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<std::vector<std::uint32_t>> next;
        for (auto& a : multi)
            if (static_cast<int>(a.size()) == d - 1)
                for (std::uint32_t v = a.empty() ? 0 : a.back(); v < n; ++v) {
                    auto b = a;
                    b.push_back(v);
                    next.push_back(b);
                }
        multi.insert(multi.end(), next.begin(), next.end());
    }
    Point base{std::vector<double>(n, 0.0), {}};
    for (int attempt = 0; attempt < 50; ++attempt) {
        Matrix<double> M;
        bool ok = true;
        for (auto& X : fields) {
            std::vector<double> row;
            for (std::size_t i = 0; i < n && ok; ++i)
                for (auto& a : multi) {
                    Expression d = X.coeffs[i];
                    for (auto v : a) d = differentiate(d, v);
                    try {
                        double val = evaluate_numeric(d, base);
                        if (!std::isfinite(val)) {
                            ok = false;
                            break;
                        }
                        row.push_back(val);
                    } catch (const DomainError&) {
                        ok = false;
                        break;
                    }
                }
            M.push_back(row);
        }
        if (ok) return numeric_rank(M) == fields.size();
        for (auto& c : base.coords) c = rng.rational().get_d();
    }
    throw DomainError("linear_independence_over_constants: no admissible base point", "");
}

Matrix<RatFun> jacobian_at(const VectorField& X, const std::vector<Rational>& base) {
    std::map<Sym, Rational> at;
    for (std::uint32_t i = 0; i < base.size(); ++i) at[make_sym(SymKind::Var, i)] = base[i];
    Matrix<RatFun> J(X.dim(), std::vector<RatFun>(X.dim()));
    KernelTable kt;
    for (std::size_t i = 0; i < X.dim(); ++i)
        for (std::uint32_t j = 0; j < X.dim(); ++j) {
            Expression d = substitute(differentiate(X.coeffs[i], j), at);
            RatFun r = to_ratfun(d, kt);
            if (r.has_kind(SymKind::Kernel)) throw NonPolynomial("jacobian_at: transcendental coefficient");
            J[i][j] = r;
        }
    return J;
}

VectorField truncate_to_linear(const VectorField& X, const std::vector<Rational>& base) {
    if (!X.is_polynomial()) throw NonPolynomial("truncate_to_linear: non-polynomial coefficient");
    std::map<Sym, Rational> at;
    for (std::uint32_t i = 0; i < base.size(); ++i) at[make_sym(SymKind::Var, i)] = base[i];
    VectorField T = VectorField::zero(X.dim());
    for (std::size_t i = 0; i < X.dim(); ++i) {
        Poly c = X.coeffs[i].poly().substitute_values(at);
        for (std::uint32_t j = 0; j < X.dim(); ++j) {
            Poly d = X.coeffs[i].poly().derivative(make_sym(SymKind::Var, j)).substitute_values(at);
            c += d * Poly::var(j);
        }
        T.coeffs[i] = Expression(c);
    }
    return T;
}

VectorField prolong_jet1(const VectorField& X) {
    if (X.dim() != 2) throw DimensionMismatch("prolong_jet1 needs a planar field");
    const Expression& xi = X.coeffs[0];
    const Expression& eta = X.coeffs[1];
    Expression z = Expression::var(2);
    Expression third = differentiate(eta, 0) + (differentiate(eta, 1) - differentiate(xi, 0)) * z -
                       differentiate(xi, 1) * z * z;
    return VectorField({xi, eta, third.is_poly() ? third : normalize(third)});
}

VectorField prolong_points(const VectorField& X, std::size_t s) {
    if (s < 1) throw std::invalid_argument("prolong_points: s must be >= 1");
    std::size_t n = X.dim();
    VectorField P = VectorField::zero(s * n);
    for (std::size_t b = 0; b < s; ++b) {
        auto shift = [n, b](Sym sym) {
            if (sym_kind(sym) != SymKind::Var) return sym;
            return make_sym(SymKind::Var, static_cast<std::uint32_t>(sym_index(sym) + b * n));
        };
        for (std::size_t i = 0; i < n; ++i) P.coeffs[b * n + i] = rename_symbols(X.coeffs[i], shift);
    }
    return P;
}

VectorField prolong_differentials(const VectorField& X) {
    std::size_t n = X.dim();
    VectorField P = VectorField::zero(2 * n);
    for (std::size_t i = 0; i < n; ++i) P.coeffs[i] = X.coeffs[i];
    for (std::size_t nu = 0; nu < n; ++nu) {
        std::vector<Expression> terms;
        for (std::uint32_t tau = 0; tau < n; ++tau) {
            Expression d = differentiate(X.coeffs[nu], tau);
            if (!d.is_zero()) terms.push_back(d * Expression::var(static_cast<std::uint32_t>(n + tau)));
        }
        P.coeffs[n + nu] = Expression::sum(terms);
    }
    return P;
}

std::vector<std::string> block_names(const std::vector<std::string>& vars, std::size_t s) {
    std::vector<std::string> out;
    for (std::size_t b = 1; b <= s; ++b)
        for (auto& v : vars) out.push_back(v + std::to_string(b));
    return out;
}

std::vector<std::string> differential_names(const std::vector<std::string>& vars) {
    std::vector<std::string> out = vars;
    for (auto& v : vars) out.push_back("d" + v);
    return out;
}

}  // namespace lie
