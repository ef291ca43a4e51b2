#include "lie/flows.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lie/random.hpp"

namespace lie {

FieldEvaluator::FieldEvaluator(const VectorField& X, std::vector<double> params) : params_(std::move(params)) {
    for (auto& c : X.coeffs) fs_.emplace_back(c);
}

void FieldEvaluator::operator()(const double* x, double* out) const {
    for (std::size_t i = 0; i < fs_.size(); ++i) {
        out[i] = fs_[i](x, params_.data());
        if (!std::isfinite(out[i])) throw DomainError("non-finite field value", "component " + std::to_string(i));
    }
}

std::vector<double> FieldEvaluator::operator()(const std::vector<double>& x) const {
    std::vector<double> out(fs_.size());
    (*this)(x.data(), out.data());
    return out;
}

namespace {

struct DTerm {
    double coef;
    std::vector<std::pair<std::uint32_t, int>> vars;
};

std::vector<std::vector<DTerm>> numeric_terms(const VectorField& X, const std::vector<double>& params) {
    std::vector<std::vector<DTerm>> out;
    for (auto& c : X.coeffs) {
        if (!c.is_poly()) throw NonPolynomial("lie_series_flow: coefficients must be polynomial");
        std::vector<DTerm> ts;
        for (auto& [m, k] : c.poly().terms()) {
            DTerm t{k.get_d(), {}};
            for (auto [s, e] : m.factors) {
                if (sym_kind(s) == SymKind::Param) {
                    if (sym_index(s) >= params.size()) throw std::invalid_argument("lie_series_flow: missing parameter");
                    t.coef *= std::pow(params[sym_index(s)], e);
                } else {
                    t.vars.emplace_back(sym_index(s), e);
                }
            }
            ts.push_back(t);
        }
        out.push_back(ts);
    }
    return out;
}

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b, std::size_t len) {
    Series c(len, 0.0);
    for (std::size_t i = 0; i < len && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < len && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

// Taylor coefficients a_0..a_order of the solution of x' = X(x), x(0) = x0.
std::vector<Series> taylor_coefficients(const std::vector<std::vector<DTerm>>& f, const std::vector<double>& x0,
                                        int order) {
    std::size_t n = x0.size();
    std::vector<Series> a(n, Series(order + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) a[i][0] = x0[i];
    for (int k = 0; k < order; ++k) {
        std::size_t len = k + 1;
        for (std::size_t i = 0; i < n; ++i) {
            double ck = 0;
            for (auto& t : f[i]) {
                Series prod(len, 0.0);
                prod[0] = t.coef;
                for (auto [v, e] : t.vars)
                    for (int r = 0; r < e; ++r) prod = mul(prod, a[v], len);
                ck += prod[k];
            }
            a[i][k + 1] = ck / (k + 1);
        }
    }
    return a;
}

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

SeriesResult lie_series_flow(const VectorField& X, const std::vector<double>& x0, double t, int order,
                             const std::vector<double>& params) {
    if (order < 1) throw std::invalid_argument("lie_series_flow: order must be >= 1");
    if (x0.size() != X.dim()) throw DimensionMismatch("lie_series_flow: start point dimension");
    auto f = numeric_terms(X, params);
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto a = taylor_coefficients(f, x0, order);
        std::size_t n = x0.size();
        SeriesResult out;
        out.order = order;
        out.point.assign(n, 0.0);
        std::vector<double> first(n), last(n), before_last(n);
        for (std::size_t i = 0; i < n; ++i) {
            double tk = 1;
            for (int k = 0; k <= order; ++k) {
                out.point[i] += a[i][k] * tk;
                if (k == 1) first[i] = a[i][k] * tk;
                if (k == order) last[i] = a[i][k] * tk;
                if (k == order - 1) before_last[i] = a[i][k] * tk;
                tk *= t;
            }
        }
        // Odd or even flows leave every other coefficient zero, so look at two.
        out.estimate = std::max(norm(last), order > 1 ? norm(before_last) : 0.0);
        if (!std::isfinite(out.estimate) || out.estimate > 1e3 * norm(first))
            throw DivergenceSuspected("lie_series_flow: terms grow at t = " + std::to_string(t));
        if (out.estimate <= 1e-10 || attempt == 1) return out;
        order *= 2;
    }
    throw std::logic_error("unreachable");
}

std::string Trajectory::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < t.size(); ++k) {
        os << t[k];
        for (double v : x[k]) os << "," << v;
        os << "\n";
    }
    return os.str();
}

std::vector<double> rk4_step(const FieldEvaluator& f, const std::vector<double>& x, double h) {
    std::size_t n = x.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), y(n);
    f(x.data(), k1.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.5 * h * k1[i];
    f(y.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.5 * h * k2[i];
    f(y.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * k3[i];
    f(y.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return y;
}

std::vector<double> rk4_flow(const FieldEvaluator& f, std::vector<double> x, double t, int steps) {
    if (steps < 1) throw std::invalid_argument("rk4: steps must be >= 1");
    double h = t / steps;
    for (int k = 0; k < steps; ++k) x = rk4_step(f, x, h);
    return x;
}

Trajectory numeric_flow(const VectorField& X, const std::vector<double>& x0, double t, int steps,
                        const std::vector<double>& params) {
    if (steps < 1) throw std::invalid_argument("numeric_flow: steps must be >= 1");
    if (x0.size() != X.dim()) throw DimensionMismatch("numeric_flow: start point dimension");
    FieldEvaluator f(X, params);
    Trajectory tr;
    tr.t.push_back(0);
    tr.x.push_back(x0);
    double h = t / steps;
    std::vector<double> x = x0;
    for (int k = 1; k <= steps; ++k) {
        x = rk4_step(f, x, h);
        tr.t.push_back(k * h);
        tr.x.push_back(x);
    }
    return tr;
}

namespace {
int steps_for(double t) { return std::max(200, static_cast<int>(std::ceil(std::abs(t) * 2000))); }
}  // namespace

double one_param_group_law_check(const VectorField& X, const std::vector<double>& x0, double t1, double t2,
                                 const std::vector<double>& params) {
    FieldEvaluator f(X, params);
    auto a = rk4_flow(f, rk4_flow(f, x0, t1, steps_for(t1)), t2, steps_for(t2));
    auto b = rk4_flow(f, x0, t1 + t2, steps_for(t1 + t2));
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double invariant_drift(const VectorField& X, const Expression& J, const std::vector<double>& x0, double t, int steps,
                       const std::vector<double>& params) {
    FieldEvaluator f(X, params);
    NumericExpr j(J);
    double j0 = j(x0.data(), params.data());
    double worst = 0;
    std::vector<double> x = x0;
    double h = t / steps;
    for (int k = 0; k < steps; ++k) {
        x = rk4_step(f, x, h);
        worst = std::max(worst, std::abs(j(x.data(), params.data()) - j0));
    }
    return worst;
}

namespace {

std::size_t span_rank(const std::vector<VectorField>& fs, std::uint64_t seed, int points) {
    Sampling s;
    s.points = points;
    return generic_rank(fs, seed, s);
}

// Does adding Z raise the rank over functions? 8 points, then 4 more on a tie.
bool raises_rank(const std::vector<VectorField>& base, std::size_t base_rank, const VectorField& Z,
                 std::uint64_t seed) {
    std::vector<VectorField> with = base;
    with.push_back(Z);
    if (span_rank(with, seed, 8) > base_rank) return true;
    return span_rank(with, seed + 7919, 4) > base_rank;
}

}  // namespace

Completion complete_system_complete(const std::vector<VectorField>& fields, std::uint64_t seed) {
    Completion out;
    std::size_t r = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (raises_rank(out.fields, r, fields[k], seed)) {
            out.fields.push_back(fields[k]);
            ++r;
        } else {
            out.log.push_back("pruned X" + std::to_string(k + 1) + " (dependent over functions)");
        }
    }
    std::size_t n = fields.empty() ? 0 : fields[0].dim();
    bool changed = true;
    while (changed && r < n) {
        changed = false;
        for (std::size_t i = 0; i < out.fields.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < out.fields.size() && !changed; ++j) {
                VectorField B = bracket(out.fields[i], out.fields[j]);
                if (B.is_zero()) continue;
                if (raises_rank(out.fields, r, B, seed)) {
                    out.log.push_back("adjoined [Y" + std::to_string(i + 1) + ", Y" + std::to_string(j + 1) + "]");
                    out.fields.push_back(B);
                    ++r;
                    changed = true;
                }
            }
    }
    return out;
}

SingleSolution complete_system_solve_single(const VectorField& X, std::size_t pivot, int order, std::uint64_t seed) {
    std::size_t n = X.dim();
    if (pivot >= n) throw std::invalid_argument("complete_system_solve_single: pivot out of range");
    SingleSolution out;
    out.divisor = X.coeffs[pivot];
    if (is_identically_zero(out.divisor, seed) != ZeroVerdict::No)
        throw NormalizationImpossible("complete_system_solve_single: coefficient of the pivot vanishes");
    VectorField Y = X;
    for (auto& c : Y.coeffs) c = normalize(c / out.divisor);
    Expression xp = Expression::var(static_cast<std::uint32_t>(pivot));
    for (std::size_t k = 0; k < n; ++k) {
        if (k == pivot) continue;
        Expression term = Expression::var(static_cast<std::uint32_t>(k));
        std::vector<Expression> sum{term};
        Rational fact = 1;
        bool ended = false;
        for (int m = 1; m <= order; ++m) {
            term = apply_to_function(Y, term);
            if (is_identically_zero(term, seed) == ZeroVerdict::Yes) {
                ended = true;
                break;
            }
            fact *= m;
            Expression coef = Expression::pow(-xp, m) * Expression(Rational(1) / fact);
            sum.push_back(coef * term);
        }
        if (!ended) out.terminated = false;
        Expression w = Expression::sum(sum);
        out.omegas.push_back(w.is_poly() ? w : normalize(w));
    }
    Rng rng(seed);
    for (auto& w : out.omegas) {
        Expression r = apply_to_function(X, w);
        ZeroVerdict z = is_identically_zero(r, seed);
        if (z == ZeroVerdict::Yes) continue;
        out.exact = false;
        NumericExpr f(r);
        for (int found = 0, attempt = 0; found < 16 && attempt < 1000; ++attempt) {
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform(-0.5, 0.5);
            try {
                double v = f(x.data(), nullptr);
                if (!std::isfinite(v)) continue;
                out.max_residual = std::max(out.max_residual, std::abs(v));
                ++found;
            } catch (const DomainError&) {
            }
        }
    }
    return out;
}

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

double radial_rate(const FieldEvaluator& f, const std::vector<double>& x, const std::vector<double>& x0) {
    auto v = f(x);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - x0[i]) * v[i];
    return s;
}

// First t in (0, t_max] with |x(t) - x0| < tol, located at a local minimum of
// the distance. Also reports the closest approach seen.
std::optional<double> first_return(const FieldEvaluator& f, const std::vector<double>& x0, double t_max, int steps,
                                   double tol, double& closest) {
    double h = t_max / steps;
    std::vector<double> x = x0;
    closest = std::numeric_limits<double>::infinity();
    double prev_rate = 0;
    bool left = false;
    double scale = std::sqrt(dist2(f(x0), std::vector<double>(x0.size(), 0.0)));
    for (int k = 0; k < steps; ++k) {
        std::vector<double> next;
        double rate;
        try {
            next = rk4_step(f, x, h);
            rate = radial_rate(f, next, x0);
        } catch (const DomainError&) {
            return std::nullopt;
        }
        double d = std::sqrt(dist2(next, x0));
        // Leave the start before looking for returns.
        if (!left && d > std::max(1e3 * tol, 1e-3 * scale)) left = true;
        if (left) closest = std::min(closest, d);
        if (left && prev_rate < 0 && rate >= 0) {
            // Minimum of the distance inside [k h, (k+1) h]: bisect on the radial rate.
            double lo = 0, hi = h;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                double r = radial_rate(f, rk4_step(f, x, mid), x0);
                if (r < 0)
                    lo = mid;
                else
                    hi = mid;
            }
            double ts = 0.5 * (lo + hi);
            double dm = std::sqrt(dist2(rk4_step(f, x, ts), x0));
            closest = std::min(closest, dm);
            if (dm < tol) return k * h + ts;
        }
        prev_rate = rate;
        x = std::move(next);
    }
    return std::nullopt;
}

}  // namespace

MonodromyResult monodromy_period(const VectorField& X, const std::vector<double>& x0, double t_max, double tol,
                                 const MonodromyOptions& opt) {
    FieldEvaluator f(X, opt.params);
    MonodromyResult out;
    Rng rng(opt.seed);
    std::vector<std::vector<double>> starts{x0};
    for (int attempt = 0; static_cast<int>(starts.size()) < opt.starts && attempt < 100 * opt.starts; ++attempt) {
        std::vector<double> s = x0;
        for (auto& v : s) v += rng.uniform(-opt.radius, opt.radius);
        starts.push_back(s);
    }
    std::ostringstream diag;
    int moving = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        double speed;
        try {
            speed = std::sqrt(dist2(f(starts[i]), std::vector<double>(X.dim(), 0.0)));
        } catch (const DomainError&) {
            out.returns.push_back(std::numeric_limits<double>::quiet_NaN());
            diag << "start " << i << ": outside the domain\n";
            continue;
        }
        if (speed < 1e-12) {
            // Fixed points return at every time; they carry no information.
            out.returns.push_back(std::numeric_limits<double>::quiet_NaN());
            diag << "start " << i << ": stationary\n";
            continue;
        }
        ++moving;
        double closest;
        auto t = first_return(f, starts[i], t_max, opt.steps, tol, closest);
        if (i == 0) out.min_distance = closest;
        out.returns.push_back(t ? *t : std::numeric_limits<double>::quiet_NaN());
        diag << "start " << i << ": " << (t ? "return at " + std::to_string(*t) : "no return") << ", closest "
             << closest << "\n";
        if (!t) {
            out.diagnostics = diag.str();
            return out;
        }
    }
    out.diagnostics = diag.str();
    if (moving == 0) return out;
    double ref = std::numeric_limits<double>::quiet_NaN();
    for (double t : out.returns)
        if (!std::isnan(t)) {
            if (std::isnan(ref))
                ref = t;
            else if (std::abs(t - ref) > std::max(tol, 1e-6 * ref))
                return out;
        }
    out.period = ref;
    return out;
}

VectorField two_point_stabilizer(const LieAlgebra& L, const std::vector<Rational>& p0,
                                 const std::vector<Rational>& p1) {
    std::vector<VectorField> iso = isotropy_at_point(L, p0);
    // Combinations of the isotropy basis that also vanish at p1.
    std::map<Sym, Rational> at;
    for (std::uint32_t i = 0; i < p1.size(); ++i) at[make_sym(SymKind::Var, i)] = p1[i];
    Matrix<RatFun> M(L.dim(), std::vector<RatFun>(iso.size()));
    KernelTable kt;
    for (std::size_t s = 0; s < iso.size(); ++s)
        for (std::size_t i = 0; i < L.dim(); ++i) M[i][s] = to_ratfun(substitute(iso[s].coeffs[i], at), kt);
    Matrix<RatFun> K = kernel(M, iso.size());
    if (K.size() != 1)
        throw std::invalid_argument("two_point_stabilizer: stabilizer has dimension " + std::to_string(K.size()));
    VectorField W = VectorField::zero(L.dim());
    for (std::size_t s = 0; s < iso.size(); ++s)
        if (!K[0][s].is_zero()) W = W + iso[s] * from_ratfun(K[0][s], kt);
    for (auto& c : W.coeffs) c = c.is_poly() ? c : normalize(c);
    if (!L.params.empty()) throw std::invalid_argument("two_point_stabilizer: substitute parameters first");
    Matrix<RatFun> J = jacobian_at(W, p0);
    Eigen::MatrixXd A(L.dim(), L.dim());
    double max_entry = 0;
    for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t j = 0; j < L.dim(); ++j) {
            A(i, j) = J[i][j].num().constant_term().get_d() /
                      (J[i][j].is_polynomial() ? 1.0 : J[i][j].den_product().constant_term().get_d());
            max_entry = std::max(max_entry, std::abs(A(i, j)));
        }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    double max_imag = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) max_imag = std::max(max_imag, std::abs(es.eigenvalues()(i).imag()));
    double scale = max_imag > 1e-9 ? max_imag : max_entry;
    if (scale == 0) return W;
    // Keep the scale exact when it is a small-height rational.
    Rational q(scale);
    for (long den = 1; den <= 1000; ++den) {
        double num = std::round(scale * den);
        if (std::abs(num / den - scale) < 1e-12) {
            q = Rational(static_cast<long>(num), den);
            q.canonicalize();
            break;
        }
    }
    return W * Expression(Rational(1) / q);
}

}  // namespace lie
