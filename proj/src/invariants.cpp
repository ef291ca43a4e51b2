#include "lie/invariants.hpp"

#include <cmath>

#include "lie/random.hpp"

namespace lie {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Proven: return "Proven";
        case Verdict::NumericallySupported: return "NumericallySupported";
        case Verdict::Refuted: return "Refuted";
    }
    return "?";
}

InvariantCandidate parse_invariant(const std::string& text, const LieAlgebra& L, std::size_t s) {
    return InvariantCandidate{s, text, parse_expression(text, block_names(L.vars, s), L.params)};
}

namespace {

// Parameter values for numeric sampling: moderate magnitude, away from 0.
double numeric_param(Rng& rng) {
    double v = rng.uniform(0.3, 2.0);
    return rng.next() % 2 ? v : -v;
}

// Coordinates in [-2, 2]; blocks differ in every coordinate by at least 1e-2.
std::vector<double> numeric_configuration(Rng& rng, std::size_t n, std::size_t s) {
    for (;;) {
        std::vector<double> x(n * s);
        for (auto& v : x) v = rng.uniform(-2.0, 2.0);
        bool ok = true;
        for (std::size_t a = 0; a < n * s && ok; ++a)
            for (std::size_t b = a + n; b < n * s && ok; b += n)
                if (std::abs(x[a] - x[b]) < 1e-2) ok = false;
        if (ok) return x;
    }
}

std::vector<Expression> residuals(const LieAlgebra& L, const InvariantCandidate& J) {
    std::vector<Expression> out;
    for (auto& X : L.generators) out.push_back(apply_to_function(prolong_points(X, J.s), J.body));
    return out;
}

}  // namespace

InvariantVerdict verify_joint_invariant(const LieAlgebra& L, const InvariantCandidate& J, VerifyMode mode,
                                        std::uint64_t seed) {
    InvariantVerdict out;
    std::vector<Expression> res = residuals(L, J);
    Names names{block_names(L.vars, J.s), L.params};
    bool unknown = false;
    if (mode == VerifyMode::Symbolic) {
        for (std::size_t k = 0; k < res.size(); ++k) {
            ZeroVerdict z = is_identically_zero(res[k], seed);
            if (z == ZeroVerdict::No) {
                out.verdict = Verdict::Refuted;
                out.generator = k;
                out.witness = normalize(res[k]).to_string(names);
                return out;
            }
            if (z == ZeroVerdict::Unknown) unknown = true;
        }
        if (!unknown) {
            out.verdict = Verdict::Proven;
            return out;
        }
    }
    std::vector<NumericExpr> compiled;
    for (auto& r : res) compiled.emplace_back(r);
    NumericExpr body(J.body);
    Rng rng(seed);
    std::size_t n = L.dim();
    const int wanted = 32;
    while (out.sampled < wanted) {
        if (out.rejected > 200 * wanted)
            throw DomainExhausted("verify_joint_invariant: no in-domain configurations for " + J.text);
        std::vector<double> x = numeric_configuration(rng, n, J.s);
        std::vector<double> c;
        for (std::size_t i = 0; i < L.params.size(); ++i) c.push_back(numeric_param(rng));
        std::vector<double> vals;
        try {
            double b = body(x.data(), c.data());
            if (!std::isfinite(b)) throw DomainError("non-finite value", J.text);
            for (auto& f : compiled) {
                double v = f(x.data(), c.data());
                if (!std::isfinite(v)) throw DomainError("non-finite value", J.text);
                vals.push_back(v);
            }
        } catch (const DomainError&) {
            ++out.rejected;
            continue;
        }
        ++out.sampled;
        for (std::size_t k = 0; k < vals.size(); ++k)
            if (std::abs(vals[k]) >= 1e-8) {
                out.verdict = Verdict::Refuted;
                out.generator = k;
                std::string at;
                for (std::size_t i = 0; i < x.size(); ++i)
                    at += (i ? ", " : "") + names.vars[i] + "=" + std::to_string(x[i]);
                out.witness = "value " + std::to_string(vals[k]) + " at " + at;
                return out;
            }
    }
    out.verdict = Verdict::NumericallySupported;
    return out;
}

std::vector<Rational> generic_base_point(const LieAlgebra& L, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<Rational> base = random_exact_point(rng, L.dim(), 0).coords;
        try {
            if (evaluation_rank(L, base) == L.dim()) return base;
        } catch (const std::domain_error&) {
        } catch (const DomainError&) {
        }
    }
    throw NotTransitiveAtBase(L.name + ": no base point of full rank found");
}

namespace {

std::vector<VectorField> primed_linear_fields(const LieAlgebra& L, std::uint64_t seed) {
    std::vector<Rational> base = generic_base_point(L, seed);
    std::vector<VectorField> out;
    for (auto& A : linear_isotropy_group(L, base)) out.push_back(linear_field(A));
    return out;
}

}  // namespace

bool infinitesimal_invariant_exists(const LieAlgebra& L, std::uint64_t seed) {
    if (!is_transitive(L, seed)) return true;
    std::vector<VectorField> lin = primed_linear_fields(L, seed);
    if (lin.empty()) return true;
    Sampling s;
    s.param_count = L.params.size();
    return generic_rank(lin, seed, s) < L.dim();
}

std::size_t differential_invariant_count(const LieAlgebra& L, std::uint64_t seed) {
    std::vector<VectorField> P;
    for (auto& X : L.generators) P.push_back(prolong_differentials(X));
    Sampling s;
    s.param_count = L.params.size();
    return 2 * L.dim() - generic_rank(P, seed, s);
}

bool arc_length_invariant_exists(const LieAlgebra& L, std::uint64_t seed) {
    if (!is_transitive(L, seed)) throw NotTransitiveAtBase(L.name + " is not transitive");
    if (!infinitesimal_invariant_exists(L, seed)) return false;
    std::vector<Rational> base = generic_base_point(L, seed);
    Matrix<RatFun> flat;
    std::size_t n = L.dim();
    for (auto& A : linear_isotropy_group(L, base)) {
        std::vector<RatFun> row;
        for (auto& r : A) row.insert(row.end(), r.begin(), r.end());
        flat.push_back(row);
    }
    std::vector<RatFun> id(n * n);
    for (std::size_t i = 0; i < n; ++i) id[i * n + i] = RatFun(1);
    std::size_t r0 = rank(flat);
    flat.push_back(id);
    return rank(flat) > r0;
}

QuadraticForm lie_derivative_quadratic_form(const VectorField& X, const QuadraticForm& g) {
    std::size_t n = X.dim();
    if (g.size() != n) throw DimensionMismatch("lie_derivative_quadratic_form: dimension mismatch");
    Matrix<Expression> dxi(n, std::vector<Expression>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::uint32_t i = 0; i < n; ++i) dxi[k][i] = differentiate(X.coeffs[k], i);
    QuadraticForm out(n, std::vector<Expression>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Expression> terms{apply_to_function(X, g[i][j])};
            for (std::size_t k = 0; k < n; ++k) {
                if (!g[k][j].is_zero() && !dxi[k][i].is_zero()) terms.push_back(g[k][j] * dxi[k][i]);
                if (!g[i][k].is_zero() && !dxi[k][j].is_zero()) terms.push_back(g[i][k] * dxi[k][j]);
            }
            Expression e = Expression::sum(terms);
            out[i][j] = e.is_poly() ? e : normalize(e);
        }
    return out;
}

EssentialCheck essential_invariant_check(const LieAlgebra& L, std::size_t s,
                                         const std::vector<InvariantCandidate>& pair_invariants,
                                         std::uint64_t seed) {
    if (s < 3) throw std::invalid_argument("essential_invariant_check: s must be >= 3");
    EssentialCheck out;
    out.joint_count = joint_invariant_count(L, s, seed);
    std::size_t n = L.dim();
    // Pullbacks of each pair invariant to every pair of the s points.
    std::vector<Expression> pulled;
    for (auto& J : pair_invariants) {
        if (J.s != 2) throw std::invalid_argument("essential_invariant_check: pair invariants must have s = 2");
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = a + 1; b < s; ++b) {
                auto move = [n, a, b](Sym sym) {
                    if (sym_kind(sym) != SymKind::Var) return sym;
                    std::uint32_t i = sym_index(sym);
                    std::size_t block = i < n ? a : b;
                    return make_sym(SymKind::Var, static_cast<std::uint32_t>(block * n + i % n));
                };
                pulled.push_back(rename_symbols(J.body, move));
            }
    }
    if (pulled.empty()) {
        out.essential = out.joint_count > 0;
        return out;
    }
    std::vector<std::vector<NumericExpr>> grads;
    std::vector<std::vector<Expression>> grad_exprs;
    bool transcendental = false;
    for (auto& f : pulled) {
        std::vector<Expression> g;
        for (std::uint32_t v = 0; v < s * n; ++v) g.push_back(differentiate(f, v));
        for (auto& e : g) transcendental = transcendental || e.contains_fn();
        grad_exprs.push_back(g);
    }
    Rng rng(seed);
    std::vector<Rational> pv;
    for (std::size_t i = 0; i < L.params.size(); ++i) pv.push_back(rng.generic_parameter());
    int found = 0;
    for (int attempt = 0; found < 8 && attempt < 400; ++attempt) {
        ExactPoint p = random_exact_point(rng, s * n, 0, n);
        p.params = pv;
        std::optional<std::size_t> r;
        if (!transcendental) {
            Matrix<Rational> M;
            bool ok = true;
            for (auto& g : grad_exprs) {
                std::vector<Rational> row;
                for (auto& e : g) {
                    auto v = evaluate_exact(e, p);
                    if (!v) {
                        ok = false;
                        break;
                    }
                    row.push_back(*v);
                }
                if (!ok) break;
                M.push_back(row);
            }
            if (ok) r = rank(M);
        } else {
            Point pd;
            for (auto& q : p.coords) pd.coords.push_back(q.get_d());
            for (auto& q : p.params) pd.params.push_back(q.get_d());
            Matrix<double> M;
            bool ok = true;
            try {
                for (auto& g : grad_exprs) {
                    std::vector<double> row;
                    for (auto& e : g) {
                        double v = evaluate_numeric(e, pd);
                        if (!std::isfinite(v)) throw DomainError("non-finite", "");
                        row.push_back(v);
                    }
                    M.push_back(row);
                }
            } catch (const DomainError&) {
                ok = false;
            }
            if (ok) r = numeric_rank(M);
        }
        if (!r) continue;
        ++found;
        out.pair_rank = std::max(out.pair_rank, *r);
    }
    if (found == 0) throw DomainExhausted("essential_invariant_check: no in-domain configurations");
    out.essential = out.joint_count > out.pair_rank;
    return out;
}

std::vector<std::vector<double>> sample_pseudosphere(const InvariantCandidate& J, const std::vector<double>& x0,
                                                     const std::vector<double>& params, double level,
                                                     std::size_t count, std::uint64_t seed) {
    if (J.s != 2) throw std::invalid_argument("sample_pseudosphere: pair invariant expected");
    std::size_t n = x0.size();
    NumericExpr f(J.body);
    Rng rng(seed);
    std::vector<double> buf(2 * n);
    std::copy(x0.begin(), x0.end(), buf.begin());
    auto g = [&](const std::vector<double>& d, double t) {
        for (std::size_t i = 0; i < n; ++i) buf[n + i] = x0[i] + t * d[i];
        double v = f(buf.data(), params.data());
        if (!std::isfinite(v)) throw DomainError("non-finite", J.text);
        return v - level;
    };
    std::vector<std::vector<double>> out;
    for (int ray = 0; out.size() < count && ray < static_cast<int>(50 * count); ++ray) {
        std::vector<double> d(n);
        double norm = 0;
        for (auto& v : d) {
            v = rng.uniform(-1.0, 1.0);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-3) continue;
        for (auto& v : d) v /= norm;
        double prev_t = 0.05, prev = 0;
        bool have = false;
        for (double t = 0.05; t <= 10.0; t += 0.05) {
            double v;
            try {
                v = g(d, t);
            } catch (const DomainError&) {
                have = false;
                continue;
            }
            if (have && ((prev < 0) != (v < 0))) {
                double lo = prev_t, hi = t, flo = prev;
                bool ok = true;
                for (int it = 0; it < 60 && ok; ++it) {
                    double mid = 0.5 * (lo + hi);
                    try {
                        double fm = g(d, mid);
                        if ((fm < 0) == (flo < 0)) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    } catch (const DomainError&) {
                        ok = false;
                    }
                }
                if (ok) {
                    std::vector<double> p(n);
                    for (std::size_t i = 0; i < n; ++i) p[i] = x0[i] + 0.5 * (lo + hi) * d[i];
                    out.push_back(p);
                }
                break;
            }
            prev = v;
            prev_t = t;
            have = true;
        }
    }
    return out;
}

}  // namespace lie
