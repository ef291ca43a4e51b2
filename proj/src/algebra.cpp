#include "lie/algebra.hpp"

#include <map>

#include "lie/random.hpp"

namespace lie {

LieAlgebra LieAlgebra::with_params(const std::vector<Rational>& values) const {
    if (values.size() != params.size())
        throw std::invalid_argument("with_params: expected " + std::to_string(params.size()) + " values");
    LieAlgebra out = *this;
    out.params.clear();
    for (auto& X : out.generators)
        for (auto& c : X.coeffs) c = substitute_params(c, values);
    return out;
}

LieAlgebra make_algebra(std::string name, std::vector<std::string> vars, std::vector<std::string> params,
                        const std::vector<std::string>& field_texts) {
    LieAlgebra L{std::move(name), std::move(vars), std::move(params), {}};
    for (auto& t : field_texts) L.generators.push_back(parse_field(t, L.vars, L.params));
    return L;
}

namespace {

struct MonoLess {
    bool operator()(const std::pair<std::size_t, Monomial>& a, const std::pair<std::size_t, Monomial>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return GradLexGreater()(a.second, b.second);
    }
};

// Coefficients of a polynomial field, grouped by (component, monomial in the
// variables), each a polynomial in the parameters.
std::map<std::pair<std::size_t, Monomial>, Poly, MonoLess> split(const VectorField& X) {
    std::map<std::pair<std::size_t, Monomial>, Poly, MonoLess> out;
    for (std::size_t i = 0; i < X.dim(); ++i) {
        if (!X.coeffs[i].is_poly()) throw NonPolynomial("check_closure: non-polynomial coefficient");
        for (auto& [m, c] : X.coeffs[i].poly().terms()) {
            Monomial vm, pm;
            for (auto f : m.factors) (sym_kind(f.first) == SymKind::Var ? vm : pm).factors.push_back(f);
            out[{i, vm}].add_term(pm, c);
        }
    }
    return out;
}

Expression as_expression(const RatFun& r) { return from_ratfun(r, KernelTable{}); }

}  // namespace

ClosureResult check_closure(const LieAlgebra& L) {
    std::size_t r = L.size();
    ClosureResult res;
    res.constants = StructureConstants(r);
    std::vector<std::map<std::pair<std::size_t, Monomial>, Poly, MonoLess>> parts;
    for (auto& X : L.generators) parts.push_back(split(X));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = j + 1; k < r; ++k) {
            VectorField B = bracket(L.generators[j], L.generators[k]);
            auto bp = split(B);
            std::map<std::pair<std::size_t, Monomial>, std::size_t, MonoLess> rows;
            for (auto& p : parts)
                for (auto& [key, v] : p) rows.emplace(key, rows.size());
            for (auto& [key, v] : bp) rows.emplace(key, rows.size());
            Matrix<RatFun> A(rows.size(), std::vector<RatFun>(r + 1));
            for (std::size_t s = 0; s < r; ++s)
                for (auto& [key, v] : parts[s]) A[rows.at(key)][s] = RatFun(v);
            for (auto& [key, v] : bp) A[rows.at(key)][r] = RatFun(v);
            Rref<RatFun> R = rref(A, r);
            std::vector<RatFun> sol(r);
            for (std::size_t i = 0; i < R.pivot_cols.size(); ++i) sol[R.pivot_cols[i]] = R.rows[i][r];
            VectorField residual = B;
            for (std::size_t s = 0; s < r; ++s)
                if (!sol[s].is_zero()) residual = residual - L.generators[s] * as_expression(sol[s]);
            for (auto& c : residual.coeffs) c = normalize(c);
            if (!residual.is_zero()) {
                res.closed = false;
                res.j = j;
                res.k = k;
                res.residual = residual;
                return res;
            }
            for (std::size_t s = 0; s < r; ++s) {
                res.constants.at(j, k, s) = sol[s];
                res.constants.at(k, j, s) = -sol[s];
            }
        }
    res.closed = true;
    return res;
}

bool verify_structure(const StructureConstants& C) {
    std::size_t r = C.r;
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t s = 0; s < r; ++s)
                if (!(C.at(j, k, s) + C.at(k, j, s)).is_zero()) return false;
    // [[Xj,Xk],Xl] + [[Xk,Xl],Xj] + [[Xl,Xj],Xk] = 0
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = j + 1; k < r; ++k)
            for (std::size_t l = k + 1; l < r; ++l)
                for (std::size_t t = 0; t < r; ++t) {
                    RatFun sum;
                    for (std::size_t s = 0; s < r; ++s) {
                        if (!C.at(j, k, s).is_zero()) sum += C.at(j, k, s) * C.at(s, l, t);
                        if (!C.at(k, l, s).is_zero()) sum += C.at(k, l, s) * C.at(s, j, t);
                        if (!C.at(l, j, s).is_zero()) sum += C.at(l, j, s) * C.at(s, k, t);
                    }
                    if (!sum.is_zero()) return false;
                }
    return true;
}

std::string to_string(const StructureConstants& C, const std::vector<std::string>& params) {
    std::string out;
    for (std::size_t j = 0; j < C.r; ++j)
        for (std::size_t k = j + 1; k < C.r; ++k) {
            std::string line;
            for (std::size_t s = 0; s < C.r; ++s) {
                const RatFun& v = C.at(j, k, s);
                if (v.is_zero()) continue;
                std::string coef = v.to_string({}, params);
                std::string term;
                if (coef == "1")
                    term = "X" + std::to_string(s + 1);
                else if (coef == "-1")
                    term = "-X" + std::to_string(s + 1);
                else if (v.num().terms().size() > 1 && v.is_polynomial())
                    term = "(" + coef + ")*X" + std::to_string(s + 1);
                else
                    term = coef + "*X" + std::to_string(s + 1);
                if (line.empty())
                    line = term;
                else if (term[0] == '-')
                    line += " - " + term.substr(1);
                else
                    line += " + " + term;
            }
            if (line.empty()) line = "0";
            out += "[X" + std::to_string(j + 1) + ", X" + std::to_string(k + 1) + "] = " + line + "\n";
        }
    return out;
}

bool is_transitive(const LieAlgebra& L, std::uint64_t seed) {
    Sampling s;
    s.param_count = L.params.size();
    return generic_rank(L.generators, seed, s) == L.dim();
}

namespace {

std::map<Sym, Rational> var_values(const std::vector<Rational>& base) {
    std::map<Sym, Rational> at;
    for (std::uint32_t i = 0; i < base.size(); ++i) at[make_sym(SymKind::Var, i)] = base[i];
    return at;
}

// n x r evaluation matrix at base, parameters symbolic.
Matrix<RatFun> evaluation_matrix(const LieAlgebra& L, const std::vector<Rational>& base) {
    auto at = var_values(base);
    Matrix<RatFun> M(L.dim(), std::vector<RatFun>(L.size()));
    KernelTable kt;
    for (std::size_t s = 0; s < L.size(); ++s)
        for (std::size_t i = 0; i < L.dim(); ++i) {
            RatFun v = to_ratfun(substitute(L.generators[s].coeffs[i], at), kt);
            if (v.has_kind(SymKind::Kernel)) throw NonPolynomial("isotropy: transcendental coefficient");
            M[i][s] = v;
        }
    return M;
}

// Scale a kernel vector so that every entry is a parameter polynomial.
std::vector<RatFun> clear_denominators(std::vector<RatFun> v) {
    RatFun::Factors all;
    for (auto& x : v)
        for (auto& [f, e] : x.den()) {
            bool found = false;
            for (auto& a : all)
                if (a.first == f) {
                    a.second = std::max(a.second, e);
                    found = true;
                }
            if (!found) all.emplace_back(f, e);
        }
    if (all.empty()) return v;
    RatFun scale(Poly(Rational(1)));
    for (auto& [f, e] : all) scale = scale * RatFun(f.pow(e));
    for (auto& x : v) x = x * scale;
    return v;
}

}  // namespace

std::size_t evaluation_rank(const LieAlgebra& L, const std::vector<Rational>& base) {
    return rank(evaluation_matrix(L, base));
}

std::vector<VectorField> isotropy_at_point(const LieAlgebra& L, const std::vector<Rational>& base) {
    Matrix<RatFun> M = evaluation_matrix(L, base);
    Matrix<RatFun> K = kernel(M, L.size());
    std::vector<VectorField> out;
    for (auto& v : K) {
        v = clear_denominators(v);
        VectorField Y = VectorField::zero(L.dim());
        for (std::size_t s = 0; s < L.size(); ++s)
            if (!v[s].is_zero()) Y = Y + L.generators[s] * as_expression(v[s]);
        for (auto& c : Y.coeffs) c = c.is_poly() ? c : normalize(c);
        out.push_back(Y);
    }
    return out;
}

std::vector<Matrix<RatFun>> linear_isotropy_group(const LieAlgebra& L, const std::vector<Rational>& base) {
    std::vector<Matrix<RatFun>> kept;
    Matrix<RatFun> flat;
    std::size_t n = L.dim();
    for (auto& Y : isotropy_at_point(L, base)) {
        Matrix<RatFun> J = jacobian_at(Y, base);
        std::vector<RatFun> row;
        for (auto& r : J) row.insert(row.end(), r.begin(), r.end());
        Matrix<RatFun> trial = flat;
        trial.push_back(row);
        if (rank(trial) > flat.size()) {
            flat.push_back(row);
            kept.push_back(J);
        }
    }
    (void)n;
    return kept;
}

VectorField linear_field(const Matrix<RatFun>& A) {
    std::size_t n = A.size();
    VectorField X = VectorField::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        RatFun s;
        for (std::size_t j = 0; j < n; ++j)
            if (!A[i][j].is_zero()) s += A[i][j] * RatFun(Poly::var(static_cast<std::uint32_t>(j)));
        X.coeffs[i] = as_expression(s);
    }
    return X;
}

LieAlgebra reduced_algebra(const LieAlgebra& L, const std::vector<Rational>& base) {
    if (evaluation_rank(L, base) != L.dim())
        throw NotTransitiveAtBase("reduced_algebra: " + L.name + " is not transitive at the base point");
    LieAlgebra R{L.name + "-reduced", L.vars, L.params, {}};
    for (std::size_t i = 0; i < L.dim(); ++i) R.generators.push_back(VectorField::partial(L.dim(), i));
    for (auto& A : linear_isotropy_group(L, base)) R.generators.push_back(linear_field(A));
    ClosureResult c = check_closure(R);
    if (!c.closed) throw std::logic_error("reduced_algebra: result is not closed");
    return R;
}

std::size_t joint_invariant_count(const LieAlgebra& L, std::size_t s, std::uint64_t seed) {
    std::vector<VectorField> P;
    for (auto& X : L.generators) P.push_back(prolong_points(X, s));
    Sampling sm;
    sm.block = L.dim();
    sm.param_count = L.params.size();
    return s * L.dim() - generic_rank(P, seed, sm);
}

namespace {

RatFun det3(const Matrix<RatFun>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TwoPointCriterion two_point_invariant_criterion(const LieAlgebra& L, std::uint64_t seed) {
    TwoPointCriterion out;
    if (L.dim() != 3) throw DimensionMismatch("two_point_invariant_criterion needs dimension 3");
    Rng rng(seed);
    std::vector<VectorField> iso;
    std::vector<Rational> base;
    for (int attempt = 0; attempt < 20; ++attempt) {
        base = random_exact_point(rng, 3, 0).coords;
        try {
            iso = isotropy_at_point(L, base);
        } catch (const std::domain_error&) {
            continue;
        }
        break;
    }
    if (iso.size() != 3) {
        out.determinant = "isotropy has dimension " + std::to_string(iso.size());
        return out;
    }
    KernelTable kt;
    Matrix<RatFun> m(3, std::vector<RatFun>(3));
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < 3; ++i) m[a][i] = to_ratfun(iso[a].coeffs[i], kt);
    RatFun d = det3(m);
    out.determinant_zero = d.is_zero();
    out.determinant = d.to_string(L.vars, L.params);
    for (std::size_t r0 = 0; r0 < 3 && !out.some_minor_nonzero; ++r0)
        for (std::size_t r1 = r0 + 1; r1 < 3 && !out.some_minor_nonzero; ++r1)
            for (std::size_t c0 = 0; c0 < 3 && !out.some_minor_nonzero; ++c0)
                for (std::size_t c1 = c0 + 1; c1 < 3; ++c1) {
                    RatFun minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
                    if (!minor.is_zero()) {
                        out.some_minor_nonzero = true;
                        break;
                    }
                }
    out.holds = out.determinant_zero && out.some_minor_nonzero;
    return out;
}

bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
    auto rows = [](const std::vector<VectorField>& fs) {
        std::map<std::pair<std::size_t, Monomial>, std::size_t, MonoLess> cols;
        std::vector<std::map<std::pair<std::size_t, Monomial>, Poly, MonoLess>> parts;
        for (auto& X : fs) parts.push_back(split(X));
        return parts;
    };
    auto pa = rows(a), pb = rows(b);
    std::map<std::pair<std::size_t, Monomial>, std::size_t, MonoLess> cols;
    for (auto* ps : {&pa, &pb})
        for (auto& p : *ps)
            for (auto& [key, v] : p) cols.emplace(key, cols.size());
    auto build = [&](const std::vector<std::map<std::pair<std::size_t, Monomial>, Poly, MonoLess>>& ps) {
        Matrix<RatFun> M;
        for (auto& p : ps) {
            std::vector<RatFun> row(cols.size());
            for (auto& [key, v] : p) row[cols.at(key)] = RatFun(v);
            M.push_back(row);
        }
        return M;
    };
    Matrix<RatFun> A = build(pa), B = build(pb), AB = A;
    AB.insert(AB.end(), B.begin(), B.end());
    std::size_t ra = rank(A), rb = rank(B), rab = rank(AB);
    return ra == rab && rb == rab;
}

}  // namespace lie
