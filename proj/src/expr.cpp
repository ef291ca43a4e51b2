#include "lie/expr.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lie/random.hpp"

namespace lie {

const char* fn_name(FnKind k) {
    switch (k) {
        case FnKind::Log: return "log";
        case FnKind::Exp: return "exp";
        case FnKind::Atan: return "atan";
        case FnKind::Sqrt: return "sqrt";
    }
    return "?";
}

struct Expression::Node {
    NodeKind tag = NodeKind::Poly;
    Poly poly;
    std::vector<Expression> args;
    int exponent = 0;
    FnKind fn = FnKind::Log;
    std::string key;
};

namespace {

std::shared_ptr<Expression::Node> make_node(NodeKind tag) {
    auto n = std::make_shared<Expression::Node>();
    n->tag = tag;
    return n;
}

std::string join_keys(const std::vector<Expression>& xs) {
    std::string s;
    for (auto& x : xs) {
        if (!s.empty()) s += ",";
        s += x.key();
    }
    return s;
}

bool sqrt_rational(const Rational& q, Rational& root) {
    if (q < 0) return false;
    if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) || !mpz_perfect_square_p(q.get_den().get_mpz_t()))
        return false;
    Integer n = sqrt(q.get_num()), d = sqrt(q.get_den());
    root = Rational(n, d);
    root.canonicalize();
    return true;
}

}  // namespace

Expression::Expression() : Expression(Poly()) {}

Expression::Expression(const Poly& p) {
    auto n = make_node(NodeKind::Poly);
    n->poly = p;
    n->key = "P[" + p.to_string({}, {}) + "]";
    n_ = std::move(n);
}

Expression::Expression(const Rational& c) : Expression(Poly(c)) {}
Expression::Expression(long c) : Expression(Poly(Rational(c))) {}

bool Expression::is_poly() const { return n_->tag == NodeKind::Poly; }
const Poly& Expression::poly() const { return n_->poly; }
const std::vector<Expression>& Expression::args() const { return n_->args; }
int Expression::exponent() const { return n_->exponent; }
FnKind Expression::fn_kind() const { return n_->fn; }
const std::string& Expression::key() const { return n_->key; }

NodeKind Expression::kind() const {
    if (n_->tag != NodeKind::Poly) return n_->tag;
    const Poly& p = n_->poly;
    if (p.is_constant()) return NodeKind::Const;
    if (p.terms().size() == 1 && p.leading_coeff() == 1) {
        const Monomial& m = p.leading_monomial();
        if (m.factors.size() == 1 && m.factors[0].second == 1)
            return sym_kind(m.factors[0].first) == SymKind::Var ? NodeKind::Var : NodeKind::Param;
    }
    return NodeKind::Poly;
}

Expression Expression::sum(std::vector<Expression> terms) {
    Poly acc;
    std::vector<Expression> rest;
    std::vector<Expression> stack(terms.rbegin(), terms.rend());
    while (!stack.empty()) {
        Expression t = stack.back();
        stack.pop_back();
        if (t.is_poly()) {
            acc += t.poly();
        } else if (t.n_->tag == NodeKind::Sum) {
            for (auto it = t.args().rbegin(); it != t.args().rend(); ++it) stack.push_back(*it);
        } else {
            rest.push_back(t);
        }
    }
    // Combine structurally equal terms c1*T + c2*T where the coefficient is constant.
    std::vector<std::pair<Expression, Rational>> combined;
    for (auto& t : rest) {
        Rational c = 1;
        Expression body = t;
        if (t.n_->tag == NodeKind::Product && t.args().front().is_poly() && t.args().front().poly().is_constant()) {
            c = t.args().front().poly().constant_term();
            std::vector<Expression> fs(t.args().begin() + 1, t.args().end());
            body = fs.size() == 1 ? fs[0] : product(fs);
        }
        bool merged = false;
        for (auto& [b, k] : combined)
            if (b.key() == body.key()) {
                k += c;
                merged = true;
                break;
            }
        if (!merged) combined.emplace_back(body, c);
    }
    rest.clear();
    for (auto& [b, k] : combined) {
        if (k == 0) continue;
        rest.push_back(k == 1 ? b : product({Expression(k), b}));
    }
    if (rest.empty()) return Expression(acc);
    std::sort(rest.begin(), rest.end(), [](const Expression& a, const Expression& b) { return a.key() < b.key(); });
    if (!acc.is_zero()) rest.insert(rest.begin(), Expression(acc));
    if (rest.size() == 1) return rest[0];
    auto n = make_node(NodeKind::Sum);
    n->args = std::move(rest);
    n->key = "S(" + join_keys(n->args) + ")";
    return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::product(std::vector<Expression> factors) {
    Poly coef(Rational(1));
    std::vector<std::pair<Expression, int>> bases;
    std::vector<Expression> stack(factors.rbegin(), factors.rend());
    auto add_base = [&](const Expression& b, int e) {
        for (auto& [x, k] : bases)
            if (x.key() == b.key()) {
                k += e;
                return;
            }
        bases.emplace_back(b, e);
    };
    while (!stack.empty()) {
        Expression f = stack.back();
        stack.pop_back();
        if (f.is_poly()) {
            coef = coef * f.poly();
        } else if (f.n_->tag == NodeKind::Product) {
            for (auto it = f.args().rbegin(); it != f.args().rend(); ++it) stack.push_back(*it);
        } else if (f.n_->tag == NodeKind::Pow) {
            add_base(f.args()[0], f.exponent());
        } else {
            add_base(f, 1);
        }
    }
    if (coef.is_zero()) return Expression();
    std::vector<Expression> rest;
    for (auto& [b, k] : bases) {
        if (k == 0) continue;
        if (b.is_poly() && k > 0) {
            coef = coef * b.poly().pow(k);
            continue;
        }
        rest.push_back(k == 1 ? b : pow(b, k));
    }
    if (rest.empty()) return Expression(coef);
    std::sort(rest.begin(), rest.end(), [](const Expression& a, const Expression& b) { return a.key() < b.key(); });
    bool unit = coef.is_constant() && coef.constant_term() == 1;
    if (unit && rest.size() == 1) return rest[0];
    if (!unit) rest.insert(rest.begin(), Expression(coef));
    auto n = make_node(NodeKind::Product);
    n->args = std::move(rest);
    n->key = "M(" + join_keys(n->args) + ")";
    return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::pow(const Expression& base, int k) {
    if (k == 0) return Expression(1L);
    if (k == 1) return base;
    if (base.is_poly()) {
        const Poly& p = base.poly();
        if (k > 0) return Expression(p.pow(k));
        if (p.is_zero()) throw DomainError("division by zero", "0");
        if (p.is_constant()) {
            Rational c = 1 / p.constant_term(), r = 1;
            for (int i = 0; i < -k; ++i) r *= c;
            return Expression(r);
        }
    }
    if (base.n_->tag == NodeKind::Pow) return pow(base.args()[0], base.exponent() * k);
    if (base.n_->tag == NodeKind::Product) {
        std::vector<Expression> fs;
        for (auto& f : base.args()) fs.push_back(pow(f, k));
        return product(fs);
    }
    auto n = make_node(NodeKind::Pow);
    n->args = {base};
    n->exponent = k;
    n->key = "W(" + base.key() + "," + std::to_string(k) + ")";
    return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::fn(FnKind k, const Expression& arg) {
    if (arg.is_poly() && arg.poly().is_constant()) {
        Rational q = arg.poly().constant_term();
        switch (k) {
            case FnKind::Log:
                if (q == 1) return Expression(0L);
                break;
            case FnKind::Exp:
                if (q == 0) return Expression(1L);
                break;
            case FnKind::Atan:
                if (q == 0) return Expression(0L);
                break;
            case FnKind::Sqrt: {
                Rational r;
                if (sqrt_rational(q, r)) return Expression(r);
                break;
            }
        }
    }
    auto n = make_node(NodeKind::Fn);
    n->args = {arg};
    n->fn = k;
    n->key = std::string("F") + fn_name(k) + "(" + arg.key() + ")";
    return Expression(std::shared_ptr<const Node>(std::move(n)));
}

bool Expression::contains_fn() const {
    if (n_->tag == NodeKind::Fn) return true;
    for (auto& a : n_->args)
        if (a.contains_fn()) return true;
    return false;
}

namespace {

void scan_slots(const Expression& e, std::uint32_t& nv, std::uint32_t& np) {
    if (e.is_poly()) {
        for (auto& [m, c] : e.poly().terms())
            for (auto [s, x] : m.factors) {
                if (sym_kind(s) == SymKind::Var) nv = std::max(nv, sym_index(s) + 1);
                if (sym_kind(s) == SymKind::Param) np = std::max(np, sym_index(s) + 1);
            }
        return;
    }
    for (auto& a : e.args()) scan_slots(a, nv, np);
}

}  // namespace

std::uint32_t Expression::var_slots() const {
    std::uint32_t nv = 0, np = 0;
    scan_slots(*this, nv, np);
    return nv;
}

std::uint32_t Expression::param_slots() const {
    std::uint32_t nv = 0, np = 0;
    scan_slots(*this, nv, np);
    return np;
}

bool Expression::depends_on_var(std::uint32_t i) const {
    if (is_poly()) return poly().depends_on(make_sym(SymKind::Var, i));
    for (auto& a : args())
        if (a.depends_on_var(i)) return true;
    return false;
}

Expression Expression::operator+(const Expression& o) const { return sum({*this, o}); }
Expression Expression::operator-(const Expression& o) const { return sum({*this, -o}); }
Expression Expression::operator-() const {
    if (is_poly()) return Expression(-poly());
    return product({Expression(-1L), *this});
}
Expression Expression::operator*(const Expression& o) const { return product({*this, o}); }
Expression Expression::operator/(const Expression& o) const { return product({*this, pow(o, -1)}); }

// ---------------------------------------------------------------- printing

namespace {

std::string print(const Expression& e, const Names& nm);

bool is_atomic_poly(const Poly& p) {
    if (p.terms().size() != 1) return false;
    const auto& [m, c] = *p.terms().begin();
    if (m.is_one()) return c >= 0 && c.get_den() == 1;
    return c == 1 && m.factors.size() == 1 && m.factors[0].second == 1;
}

// Printed form that can be raised to a power or used as a divisor.
std::string print_base(const Expression& b, const Names& nm) {
    if (b.is_poly()) {
        std::string s = b.poly().to_string(nm.vars, nm.params);
        return is_atomic_poly(b.poly()) ? s : "(" + s + ")";
    }
    if (b.kind() == NodeKind::Fn) return print(b, nm);
    return "(" + print(b, nm) + ")";
}

std::string print_factor(const Expression& f, const Names& nm) {
    if (f.is_poly()) {
        std::string s = f.poly().to_string(nm.vars, nm.params);
        return f.poly().terms().size() > 1 ? "(" + s + ")" : s;
    }
    if (f.kind() == NodeKind::Pow) return print_base(f.args()[0], nm) + "^" + std::to_string(f.exponent());
    if (f.kind() == NodeKind::Sum) return "(" + print(f, nm) + ")";
    return print(f, nm);
}

std::string print_product(const std::vector<Expression>& fs, const Names& nm) {
    std::string num, den;
    int nden = 0;
    std::string sign;
    for (size_t i = 0; i < fs.size(); ++i) {
        const Expression& f = fs[i];
        if (f.kind() == NodeKind::Pow && f.exponent() < 0) {
            if (!den.empty()) den += "*";
            den += print_base(f.args()[0], nm);
            if (f.exponent() != -1) den += "^" + std::to_string(-f.exponent());
            ++nden;
            continue;
        }
        if (i == 0 && f.is_poly() && f.poly().is_constant()) {
            Rational c = f.poly().constant_term();
            if (c == -1) {
                sign = "-";
                continue;
            }
            if (c < 0) {
                sign = "-";
                c = -c;
            }
            num += format_rational(c);
            continue;
        }
        if (!num.empty()) num += "*";
        num += print_factor(f, nm);
    }
    if (num.empty()) num = "1";
    std::string out = sign + num;
    if (nden == 0) return out;
    if (nden > 1) den = "(" + den + ")";
    return out + "/" + den;
}

std::string print(const Expression& e, const Names& nm) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::Param:
        case NodeKind::Poly: return e.poly().to_string(nm.vars, nm.params);
        case NodeKind::Sum: {
            std::string out;
            for (auto& a : e.args()) {
                std::string s = print(a, nm);
                if (out.empty())
                    out = s;
                else if (!s.empty() && s[0] == '-')
                    out += " - " + s.substr(1);
                else
                    out += " + " + s;
            }
            return out;
        }
        case NodeKind::Product: return print_product(e.args(), nm);
        case NodeKind::Pow:
            if (e.exponent() < 0) return print_product({e}, nm);
            return print_factor(e, nm);
        case NodeKind::Fn: return std::string(fn_name(e.fn_kind())) + "(" + print(e.args()[0], nm) + ")";
    }
    return "?";
}

}  // namespace

std::string Expression::to_string(const Names& names) const { return print(*this, names); }
std::string Expression::to_string() const { return print(*this, Names{}); }

// ---------------------------------------------------------------- kernels

Sym KernelTable::intern(const Expression& fn_node) {
    auto it = index_.find(fn_node.key());
    if (it != index_.end()) return make_sym(SymKind::Kernel, it->second);
    auto idx = static_cast<std::uint32_t>(exprs_.size());
    exprs_.push_back(fn_node);
    index_.emplace(fn_node.key(), idx);
    return make_sym(SymKind::Kernel, idx);
}

RatFun to_ratfun(const Expression& e, KernelTable& kernels) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::Param:
        case NodeKind::Poly: return RatFun(e.poly());
        case NodeKind::Sum: {
            RatFun r;
            for (auto& a : e.args()) r += to_ratfun(a, kernels);
            return r;
        }
        case NodeKind::Product: {
            RatFun r(Rational(1));
            for (auto& a : e.args()) r *= to_ratfun(a, kernels);
            return r;
        }
        case NodeKind::Pow: {
            RatFun b = to_ratfun(e.args()[0], kernels);
            if (b.is_zero() && e.exponent() < 0) throw DomainError("division by zero", e.to_string());
            return b.pow(e.exponent());
        }
        case NodeKind::Fn: return RatFun(Poly::symbol(kernels.intern(e)));
    }
    return RatFun();
}

namespace {

Expression poly_with_kernels(const Poly& p, const KernelTable& kernels) {
    if (!p.has_kind(SymKind::Kernel)) return Expression(p);
    std::map<Monomial, Poly, GradLexGreater> groups;
    for (auto& [m, c] : p.terms()) {
        Monomial km, rest;
        for (auto f : m.factors) (sym_kind(f.first) == SymKind::Kernel ? km : rest).factors.push_back(f);
        groups[km].add_term(rest, c);
    }
    std::vector<Expression> terms;
    for (auto& [km, coef] : groups) {
        std::vector<Expression> fs{Expression(coef)};
        for (auto [s, x] : km.factors) fs.push_back(Expression::pow(kernels.expr(sym_index(s)), x));
        terms.push_back(Expression::product(fs));
    }
    return Expression::sum(terms);
}

}  // namespace

Expression from_ratfun(const RatFun& r, const KernelTable& kernels) {
    Expression num = poly_with_kernels(r.num(), kernels);
    if (r.den().empty()) return num;
    std::vector<Expression> fs{num};
    for (auto& [f, e] : r.den()) fs.push_back(Expression::pow(poly_with_kernels(f, kernels), -e));
    return Expression::product(fs);
}

Expression normalize(const Expression& e) {
    KernelTable kt;
    return from_ratfun(to_ratfun(e, kt), kt);
}

// ---------------------------------------------------------------- calculus

namespace {

Expression diff_raw(const Expression& e, std::uint32_t v) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::Param:
        case NodeKind::Poly: return Expression(e.poly().derivative(make_sym(SymKind::Var, v)));
        case NodeKind::Sum: {
            std::vector<Expression> ts;
            for (auto& a : e.args()) ts.push_back(diff_raw(a, v));
            return Expression::sum(ts);
        }
        case NodeKind::Product: {
            std::vector<Expression> ts;
            const auto& fs = e.args();
            for (size_t i = 0; i < fs.size(); ++i) {
                Expression d = diff_raw(fs[i], v);
                if (d.is_zero()) continue;
                std::vector<Expression> p = fs;
                p[i] = d;
                ts.push_back(Expression::product(p));
            }
            return Expression::sum(ts);
        }
        case NodeKind::Pow: {
            const Expression& b = e.args()[0];
            Expression db = diff_raw(b, v);
            if (db.is_zero()) return Expression();
            return Expression::product({Expression(static_cast<long>(e.exponent())),
                                        Expression::pow(b, e.exponent() - 1), db});
        }
        case NodeKind::Fn: {
            const Expression& u = e.args()[0];
            Expression du = diff_raw(u, v);
            if (du.is_zero()) return Expression();
            switch (e.fn_kind()) {
                case FnKind::Log: return du / u;
                case FnKind::Exp: return e * du;
                case FnKind::Atan: return du / (Expression(1L) + u * u);
                case FnKind::Sqrt: return du / (Expression(2L) * e);
            }
        }
    }
    return Expression();
}

}  // namespace

Expression differentiate(const Expression& e, std::uint32_t var) {
    Expression d = diff_raw(e, var);
    if (d.is_poly()) return d;
    return normalize(d);
}

// ---------------------------------------------------------------- evaluation

namespace {

double eval_poly(const Poly& p, const double* x, std::size_t nx, const double* c, std::size_t nc) {
    double total = 0;
    for (auto& [m, coef] : p.terms()) {
        double t = coef.get_d();
        for (auto [s, e] : m.factors) {
            std::uint32_t i = sym_index(s);
            double v;
            if (sym_kind(s) == SymKind::Var) {
                if (i >= nx) throw std::invalid_argument("evaluate: missing coordinate");
                v = x[i];
            } else if (sym_kind(s) == SymKind::Param) {
                if (i >= nc) throw std::invalid_argument("evaluate: missing parameter value");
                v = c[i];
            } else {
                throw std::invalid_argument("evaluate: kernel symbol");
            }
            double pw = 1;
            for (int k = 0; k < e; ++k) pw *= v;
            t *= pw;
        }
        total += t;
    }
    return total;
}

double eval_node(const Expression& e, const Point& p) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::Param:
        case NodeKind::Poly:
            return eval_poly(e.poly(), p.coords.data(), p.coords.size(), p.params.data(), p.params.size());
        case NodeKind::Sum: {
            double s = 0;
            for (auto& a : e.args()) s += eval_node(a, p);
            return s;
        }
        case NodeKind::Product: {
            double s = 1;
            for (auto& a : e.args()) s *= eval_node(a, p);
            return s;
        }
        case NodeKind::Pow: {
            double b = eval_node(e.args()[0], p);
            if (e.exponent() < 0 && b == 0) throw DomainError("division by zero", e.to_string());
            return std::pow(b, e.exponent());
        }
        case NodeKind::Fn: {
            double u = eval_node(e.args()[0], p);
            switch (e.fn_kind()) {
                case FnKind::Log:
                    if (!(u > 0)) throw DomainError("log of non-positive argument", e.to_string());
                    return std::log(u);
                case FnKind::Exp: return std::exp(u);
                case FnKind::Atan: return std::atan(u);
                case FnKind::Sqrt:
                    if (u < 0) throw DomainError("sqrt of negative argument", e.to_string());
                    return std::sqrt(u);
            }
        }
    }
    return 0;
}

}  // namespace

double evaluate_numeric(const Expression& e, const Point& p) { return eval_node(e, p); }

std::optional<Rational> evaluate_exact(const Expression& e, const ExactPoint& p) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::Param:
        case NodeKind::Poly: {
            Rational total = 0;
            for (auto& [m, c] : e.poly().terms()) {
                Rational t = c;
                for (auto [s, x] : m.factors) {
                    std::uint32_t i = sym_index(s);
                    const std::vector<Rational>* src =
                        sym_kind(s) == SymKind::Var ? &p.coords : sym_kind(s) == SymKind::Param ? &p.params : nullptr;
                    if (!src || i >= src->size()) throw std::invalid_argument("evaluate_exact: missing value");
                    for (int k = 0; k < x; ++k) t *= (*src)[i];
                }
                total += t;
            }
            return total;
        }
        case NodeKind::Sum: {
            Rational s = 0;
            for (auto& a : e.args()) {
                auto v = evaluate_exact(a, p);
                if (!v) return std::nullopt;
                s += *v;
            }
            return s;
        }
        case NodeKind::Product: {
            Rational s = 1;
            for (auto& a : e.args()) {
                auto v = evaluate_exact(a, p);
                if (!v) return std::nullopt;
                s *= *v;
            }
            return s;
        }
        case NodeKind::Pow: {
            auto b = evaluate_exact(e.args()[0], p);
            if (!b) return std::nullopt;
            int k = e.exponent();
            if (k < 0) {
                if (*b == 0) return std::nullopt;
                *b = 1 / *b;
                k = -k;
            }
            Rational r = 1;
            for (int i = 0; i < k; ++i) r *= *b;
            return r;
        }
        case NodeKind::Fn: {
            auto u = evaluate_exact(e.args()[0], p);
            if (!u) return std::nullopt;
            Expression folded = Expression::fn(e.fn_kind(), Expression(*u));
            if (folded.is_poly()) return folded.poly().constant_term();
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- rewriting

namespace {

template <class PolyMap>
Expression rebuild(const Expression& e, const PolyMap& on_poly) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
        case NodeKind::Param:
        case NodeKind::Poly: return Expression(on_poly(e.poly()));
        case NodeKind::Sum: {
            std::vector<Expression> ts;
            for (auto& a : e.args()) ts.push_back(rebuild(a, on_poly));
            return Expression::sum(ts);
        }
        case NodeKind::Product: {
            std::vector<Expression> ts;
            for (auto& a : e.args()) ts.push_back(rebuild(a, on_poly));
            return Expression::product(ts);
        }
        case NodeKind::Pow: return Expression::pow(rebuild(e.args()[0], on_poly), e.exponent());
        case NodeKind::Fn: return Expression::fn(e.fn_kind(), rebuild(e.args()[0], on_poly));
    }
    return e;
}

}  // namespace

Expression substitute(const Expression& e, const std::map<Sym, Rational>& vals) {
    return rebuild(e, [&](const Poly& p) { return p.substitute_values(vals); });
}

Expression substitute_params(const Expression& e, const std::vector<Rational>& params) {
    std::map<Sym, Rational> vals;
    for (std::uint32_t i = 0; i < params.size(); ++i) vals[make_sym(SymKind::Param, i)] = params[i];
    return substitute(e, vals);
}

Expression rename_symbols(const Expression& e, const std::function<Sym(Sym)>& f) {
    return rebuild(e, [&](const Poly& p) { return p.rename(f); });
}

Expression substitute_var(const Expression& e, std::uint32_t i, const Poly& v) {
    Sym s = make_sym(SymKind::Var, i);
    return rebuild(e, [&](const Poly& p) { return p.substitute(s, v); });
}

// ---------------------------------------------------------------- zero test

const char* to_string(ZeroVerdict v) {
    switch (v) {
        case ZeroVerdict::Yes: return "Yes";
        case ZeroVerdict::No: return "No";
        case ZeroVerdict::Unknown: return "Unknown";
    }
    return "?";
}

ZeroVerdict is_identically_zero(const Expression& e, std::uint64_t seed) {
    if (e.is_poly()) return e.poly().is_zero() ? ZeroVerdict::Yes : ZeroVerdict::No;
    KernelTable kt;
    RatFun r;
    try {
        r = to_ratfun(e, kt);
    } catch (const DomainError&) {
        return ZeroVerdict::No;  // contains an identically vanishing divisor
    }
    if (r.is_zero()) return ZeroVerdict::Yes;
    if (!r.has_kind(SymKind::Kernel)) return ZeroVerdict::No;
    // Transcendental remainder: sample, never promote to Yes.
    Rng rng(seed);
    std::uint32_t nv = e.var_slots(), np = e.param_slots();
    NumericExpr f(e);
    int good = 0;
    for (int attempt = 0; attempt < 64 * 20 && good < 64; ++attempt) {
        std::vector<double> x(nv), c(np);
        for (auto& v : x) v = rng.rational().get_d();
        for (auto& v : c) v = rng.rational().get_d();
        double val;
        try {
            val = f(x.data(), c.data());
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(val)) continue;
        if (std::fabs(val) > 1e-10) return ZeroVerdict::No;
        ++good;
    }
    return ZeroVerdict::Unknown;
}

// ---------------------------------------------------------------- compiled evaluation

struct NumericExpr::Node {
    NodeKind tag = NodeKind::Poly;
    struct Term {
        double c;
        std::vector<std::pair<std::uint32_t, int>> f;  // slot (params offset by 1<<30), exponent
    };
    std::vector<Term> terms;
    std::vector<std::shared_ptr<const Node>> args;
    int exponent = 0;
    FnKind fn = FnKind::Log;
    std::string text;
};

namespace {

std::shared_ptr<const NumericExpr::Node> compile(const Expression& e) {
    auto n = std::make_shared<NumericExpr::Node>();
    NodeKind k = e.kind();
    if (k == NodeKind::Const || k == NodeKind::Var || k == NodeKind::Param) k = NodeKind::Poly;
    n->tag = k;
    if (k == NodeKind::Poly) {
        for (auto& [m, c] : e.poly().terms()) {
            NumericExpr::Node::Term t{c.get_d(), {}};
            for (auto [s, x] : m.factors) {
                if (sym_kind(s) == SymKind::Kernel) throw std::invalid_argument("compile: kernel symbol");
                std::uint32_t slot = sym_index(s) | (sym_kind(s) == SymKind::Param ? (1u << 30) : 0u);
                t.f.emplace_back(slot, x);
            }
            n->terms.push_back(std::move(t));
        }
        return n;
    }
    for (auto& a : e.args()) n->args.push_back(compile(a));
    n->exponent = e.exponent();
    n->fn = e.fn_kind();
    if (k == NodeKind::Fn || k == NodeKind::Pow) n->text = e.to_string();
    return n;
}

double run(const NumericExpr::Node& n, const double* x, const double* c) {
    switch (n.tag) {
        case NodeKind::Sum: {
            double s = 0;
            for (auto& a : n.args) s += run(*a, x, c);
            return s;
        }
        case NodeKind::Product: {
            double s = 1;
            for (auto& a : n.args) s *= run(*a, x, c);
            return s;
        }
        case NodeKind::Pow: {
            double b = run(*n.args[0], x, c);
            if (n.exponent < 0 && b == 0) throw DomainError("division by zero", n.text);
            return std::pow(b, n.exponent);
        }
        case NodeKind::Fn: {
            double u = run(*n.args[0], x, c);
            switch (n.fn) {
                case FnKind::Log:
                    if (!(u > 0)) throw DomainError("log of non-positive argument", n.text);
                    return std::log(u);
                case FnKind::Exp: return std::exp(u);
                case FnKind::Atan: return std::atan(u);
                case FnKind::Sqrt:
                    if (u < 0) throw DomainError("sqrt of negative argument", n.text);
                    return std::sqrt(u);
            }
            return 0;
        }
        default: {
            double total = 0;
            for (auto& t : n.terms) {
                double v = t.c;
                for (auto [slot, e] : t.f) {
                    double b = (slot & (1u << 30)) ? c[slot & ~(1u << 30)] : x[slot];
                    for (int k = 0; k < e; ++k) v *= b;
                }
                total += v;
            }
            return total;
        }
    }
}

}  // namespace

NumericExpr::NumericExpr(const Expression& e) : root_(compile(e)) {}

double NumericExpr::operator()(const double* x, const double* params) const { return run(*root_, x, params); }

}  // namespace lie
