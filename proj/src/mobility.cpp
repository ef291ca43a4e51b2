#include "lie/mobility.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "lie/random.hpp"

namespace lie {

std::string to_string(MotionTag t) {
    switch (t) {
        case MotionTag::Zero: return "Zero";
        case MotionTag::Periodic: return "Periodic";
        case MotionTag::ProjectivelyPeriodic: return "ProjectivelyPeriodic";
        case MotionTag::Spiral: return "Spiral";
        case MotionTag::RealHyperbolic: return "RealHyperbolic";
        case MotionTag::Nilpotent: return "Nilpotent";
        case MotionTag::Degenerate: return "Degenerate";
    }
    return "?";
}

std::string to_string(MobilityStage s) {
    switch (s) {
        case MobilityStage::None: return "none";
        case MobilityStage::FixedLineElement: return "fixed line element";
        case MobilityStage::LineElementStabilizer: return "line element stabilizer";
        case MobilityStage::NoRotationAboutLine: return "no rotation about line element";
        case MobilityStage::SurfaceElementStabilizer: return "surface element stabilizer";
    }
    return "?";
}

namespace {

// Univariate polynomials over Q, coefficients from degree 0 up.
using UPoly = std::vector<Rational>;
using QMatrix = Matrix<Rational>;

void trim(UPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

UPoly derivative(const UPoly& p) {
    UPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    trim(d);
    return d;
}

// Remainder of a by b (b nonzero), and the quotient.
UPoly divmod(UPoly a, const UPoly& b, UPoly* quot = nullptr) {
    trim(a);
    UPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    if (quot) *quot = q;
    return a;
}

UPoly monic(UPoly p) {
    trim(p);
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

UPoly gcd(UPoly a, UPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPoly r = divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

QMatrix identity(std::size_t n) {
    QMatrix I(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

QMatrix mul(const QMatrix& a, const QMatrix& b) {
    std::size_t n = a.size(), m = b[0].size(), k = b.size();
    QMatrix c(n, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

bool is_zero_matrix(const QMatrix& a) {
    for (auto& r : a)
        for (auto& x : r)
            if (x != 0) return false;
    return true;
}

// Faddeev-LeVerrier; monic of degree n.
UPoly charpoly(const QMatrix& M) {
    std::size_t n = M.size();
    UPoly c(n + 1);
    c[n] = 1;
    QMatrix N = identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        QMatrix AN = mul(M, N);
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += AN[i][i];
        c[n - k] = -tr / Rational(static_cast<long>(k));
        N = AN;
        for (std::size_t i = 0; i < n; ++i) N[i][i] += c[n - k];
    }
    return c;
}

QMatrix eval_at(const UPoly& p, const QMatrix& M) {
    std::size_t n = M.size();
    QMatrix R(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = p.size(); i-- > 0;) {
        R = mul(R, M);
        for (std::size_t j = 0; j < n; ++j) R[j][j] += p[i];
    }
    return R;
}

std::vector<std::complex<double>> roots(const UPoly& p) {
    UPoly m = monic(p);
    std::size_t d = m.empty() ? 0 : m.size() - 1;
    if (d == 0) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 1; i < d; ++i) C(i, i - 1) = 1;
    for (std::size_t i = 0; i < d; ++i) C(i, d - 1) = -m[i].get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

std::vector<std::complex<double>> eigenvalues(const QMatrix& M) {
    std::size_t n = M.size();
    Eigen::MatrixXd A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = M[i][j].get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

bool diagonalizable(const QMatrix& M, const UPoly& P) {
    UPoly sq;
    divmod(P, gcd(P, derivative(P)), &sq);
    return is_zero_matrix(eval_at(sq, M));
}

// a/b with b <= max_den when r is that close to it.
std::optional<std::pair<long, long>> small_fraction(double r, long max_den) {
    for (long b = 1; b <= max_den; ++b) {
        double a = std::round(r * b);
        if (a != 0 && std::abs(a / b - r) <= 1e-9 * std::abs(r)) return std::make_pair(static_cast<long>(a), b);
    }
    return std::nullopt;
}

struct PeriodicShape {
    double omega;
    double projective_period;
    double sign;
};

// Nonzero eigenvalues are conjugate pure imaginary pairs with commensurable
// frequencies and M is diagonalizable.
std::optional<PeriodicShape> periodic_shape(const QMatrix& M) {
    UPoly P = charpoly(M);
    std::size_t k = 0;
    while (k < P.size() && P[k] == 0) ++k;
    UPoly q(P.begin() + static_cast<long>(k), P.end());
    if (q.size() <= 1) return std::nullopt;
    for (std::size_t i = 1; i < q.size(); i += 2)
        if (q[i] != 0) return std::nullopt;
    UPoly Q;
    for (std::size_t i = 0; i < q.size(); i += 2) Q.push_back(q[i]);
    std::vector<double> omegas;
    if (Q.size() == 2) {
        Rational mu = -Q[0] / Q[1];
        if (mu >= 0) return std::nullopt;
        omegas.push_back(std::sqrt(-mu.get_d()));
    } else if (Q.size() == 3) {
        Rational disc = Q[1] * Q[1] - 4 * Q[0] * Q[2];
        if (disc < 0 || Q[1] / Q[2] <= 0 || Q[0] / Q[2] <= 0) return std::nullopt;
        // omega^2 = -mu = (Q1 -+ sqrt(disc)) / (2 Q2)
        double s = std::sqrt(disc.get_d()), q1 = Q[1].get_d(), q2 = Q[2].get_d();
        omegas.push_back(std::sqrt((q1 + s) / (2 * q2)));
        omegas.push_back(std::sqrt((q1 - s) / (2 * q2)));
    } else {
        return std::nullopt;
    }
    if (!diagonalizable(M, P)) return std::nullopt;
    double omega = omegas[0];
    std::vector<long> mult{1};
    if (omegas.size() == 2 && std::abs(omegas[0] - omegas[1]) > 1e-12 * omegas[0]) {
        auto f = small_fraction(omegas[0] / omegas[1], 64);
        if (!f) return std::nullopt;
        omega = omegas[1] / static_cast<double>(f->second);
        mult = {f->first, f->second};
    }
    // exp(pi M / omega) = -I when no eigenvalue vanishes and every frequency is
    // an odd multiple of omega.
    bool flips = k == 0;
    for (long m : mult) flips = flips && (m % 2 != 0);
    double T = 2 * std::numbers::pi / omega;
    return flips ? PeriodicShape{omega, T / 2, -1.0} : PeriodicShape{omega, T, 1.0};
}

LinearMotionClass classify(const QMatrix& M, bool projective) {
    std::size_t n = M.size();
    if (n == 0 || n > 4) throw std::invalid_argument("classify_linear_one_param: size must be 1..4");
    for (auto& r : M)
        if (r.size() != n) throw std::invalid_argument("classify_linear_one_param: matrix is not square");
    LinearMotionClass out;
    out.exact = true;
    out.eigenvalues = eigenvalues(M);
    if (is_zero_matrix(M)) {
        out.tag = MotionTag::Zero;
        return out;
    }
    if (auto s = periodic_shape(M)) {
        out.tag = MotionTag::Periodic;
        out.omega = s->omega;
        out.projective_period = s->projective_period;
        out.factor = s->sign;
        return out;
    }
    UPoly P = charpoly(M);
    if (projective) {
        Rational a = 0;
        for (std::size_t i = 0; i < n; ++i) a += M[i][i];
        a /= Rational(static_cast<long>(n));
        if (a != 0) {
            QMatrix S = M;
            for (std::size_t i = 0; i < n; ++i) S[i][i] -= a;
            if (auto s = periodic_shape(S)) {
                out.tag = MotionTag::ProjectivelyPeriodic;
                out.omega = s->omega;
                out.shift = a.get_d();
                out.projective_period = s->projective_period;
                out.factor = s->sign * std::exp(out.shift * s->projective_period);
                return out;
            }
        }
    }
    UPoly sq;
    divmod(P, gcd(P, derivative(P)), &sq);
    bool all_real = true, spiral = false;
    for (auto z : roots(sq)) {
        double scale = std::max(1.0, std::abs(z));
        bool complex = std::abs(z.imag()) > 1e-9 * scale;
        if (complex) all_real = false;
        if (complex && std::abs(z.real()) > 1e-9 * scale) spiral = true;
    }
    bool nilpotent = true;
    for (std::size_t i = 0; i < n; ++i) nilpotent = nilpotent && P[i] == 0;
    if (spiral)
        out.tag = MotionTag::Spiral;
    else if (nilpotent)
        out.tag = MotionTag::Nilpotent;
    else if (all_real && is_zero_matrix(eval_at(sq, M)))
        out.tag = MotionTag::RealHyperbolic;
    else
        out.tag = MotionTag::Degenerate;
    return out;
}

Rational snap(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("classify_linear_one_param: non-finite entry");
    for (long b = 1; b <= 1000; ++b) {
        double a = std::round(x * b);
        if (std::abs(a / b - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
            Rational q(static_cast<long>(a), b);
            q.canonicalize();
            return q;
        }
    }
    return Rational(x);
}

Rational constant_value(const RatFun& f) {
    if (!f.is_constant() && !(f.num().is_constant() && f.den_product().is_constant()))
        throw std::invalid_argument("expected a constant");
    Rational v = f.num().constant_term();
    if (!f.is_polynomial()) v /= f.den_product().constant_term();
    return v;
}

QMatrix to_rational(const Matrix<RatFun>& A) {
    QMatrix out(A.size(), std::vector<Rational>(A.empty() ? 0 : A[0].size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[i].size(); ++j) out[i][j] = constant_value(A[i][j]);
    return out;
}

std::string line_text(const std::vector<Rational>& l) {
    if (l[0] == 0 && l[1] == 0) return "line at infinity";
    if (l[0] == 0 && l[2] == 0) return "{eta = 0}";
    if (l[1] == 0 && l[2] == 0) return "{xi = 0}";
    std::ostringstream s;
    s << "{" << format_rational(l[0]) << "*xi + " << format_rational(l[1]) << "*eta + " << format_rational(l[2])
      << " = 0}";
    return s.str();
}

// Invariant real line of the projective plane whose points move while at
// least one stays at rest.
std::optional<std::string> fixed_line(const QMatrix& M) {
    QMatrix Mt = transpose(M);
    std::vector<std::vector<Rational>> candidates{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
    UPoly P = charpoly(Mt);
    // Rational eigenvalues: roots of P among +-(divisors); use the numeric
    // roots and keep those that are exact.
    for (auto z : roots(P)) {
        if (std::abs(z.imag()) > 1e-9) continue;
        Rational lam = snap(z.real());
        QMatrix S = Mt;
        for (std::size_t i = 0; i < 3; ++i) S[i][i] -= lam;
        for (auto& v : kernel(S, 3)) candidates.push_back(v);
    }
    for (auto& l : candidates) {
        std::vector<Rational> image(3, Rational(0));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) image[i] += Mt[i][j] * l[j];
        // image parallel to l
        bool parallel = true;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j) parallel = parallel && image[i] * l[j] == image[j] * l[i];
        if (!parallel) continue;
        QMatrix basis = kernel(QMatrix{l}, 3);
        // Restriction to the plane ker(l): coordinates of M v_i in the basis.
        QMatrix coords;
        for (auto& v : basis) {
            std::vector<Rational> Mv(3, Rational(0));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) Mv[i] += M[i][j] * v[j];
            QMatrix sys(3, std::vector<Rational>(3));
            for (std::size_t i = 0; i < 3; ++i) sys[i] = {basis[0][i], basis[1][i], Mv[i]};
            Rref<Rational> R = rref(sys);
            coords.push_back({R.rows[0][2], R.rows[1][2]});
        }
        // coords[j] is column j of the restriction.
        Rational a = coords[0][0], b = coords[1][0], c = coords[0][1], d = coords[1][1];
        bool scalar = b == 0 && c == 0 && a == d;
        Rational disc = (a - d) * (a - d) + 4 * b * c;
        if (!scalar && disc >= 0) return line_text(l);
    }
    return std::nullopt;
}

}  // namespace

LinearMotionClass classify_linear_one_param(const Matrix<Rational>& M) { return classify(M, false); }
LinearMotionClass classify_projective_one_param(const Matrix<Rational>& M) { return classify(M, true); }

LinearMotionClass classify_linear_one_param(const Matrix<double>& M) {
    QMatrix q(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
        for (double x : M[i]) q[i].push_back(snap(x));
    return classify(q, false);
}

std::vector<ProjectiveForm> classify_seven_forms(const Rational& c5, const Rational& c6) {
    std::string s5 = format_rational(c5), s6 = format_rational(c6);
    std::vector<std::string> texts{"p + eta*q",
                                   "p + xi*q",
                                   "eta*q",
                                   "q",
                                   "xi*p + (" + s5 + ")*eta*q",
                                   "eta*p - xi*q + (" + s6 + ")*(xi*p + eta*q)",
                                   "eta*p - xi*q"};
    std::vector<std::string> vars{"xi", "eta"};
    std::vector<Rational> origin{0, 0};
    std::vector<ProjectiveForm> out;
    for (auto& t : texts) {
        ProjectiveForm f;
        VectorField X = parse_field(t, vars, {});
        f.field = to_string(X, Names{vars, {}});
        QMatrix J = to_rational(jacobian_at(X, origin));
        std::vector<Rational> b = evaluate_exact(X, ExactPoint{origin, {}});
        f.matrix = QMatrix(3, std::vector<Rational>(3, Rational(0)));
        for (std::size_t i = 0; i < 2; ++i) {
            f.matrix[i] = {J[i][0], J[i][1], b[i]};
        }
        f.motion = classify(f.matrix, true);
        f.fixed_line = fixed_line(f.matrix);
        f.accepted = f.motion.tag == MotionTag::Periodic && !f.fixed_line;
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

using DMatrix = Eigen::MatrixXd;

DMatrix to_eigen(const QMatrix& a) {
    DMatrix m(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j].get_d();
    return m;
}

bool fixes(const DMatrix& A, const Eigen::VectorXd& v) {
    Eigen::VectorXd Av = A * v;
    double scale = std::max(1.0, A.norm()) * v.squaredNorm();
    Eigen::VectorXd perp = Av - v * (v.dot(Av) / v.squaredNorm());
    return perp.norm() <= 1e-8 * scale;
}

std::string format_vector(const Eigen::VectorXd& v) {
    Eigen::VectorXd u = v / v.cwiseAbs().maxCoeff();
    std::ostringstream s;
    s << "(";
    for (int i = 0; i < u.size(); ++i) s << (i ? ", " : "") << (std::abs(u(i)) < 1e-12 ? 0.0 : u(i));
    s << ")";
    return s.str();
}

// Directions v = e1 + t e2 (or e2) of a plane that can be fixed by every
// matrix: real roots of the first nonvanishing wedge component of v and A v,
// a quadratic in t. None when every component vanishes identically.
std::optional<std::vector<Eigen::VectorXd>> pencil_candidates(const std::vector<DMatrix>& A,
                                                              const Eigen::VectorXd& e1, const Eigen::VectorXd& e2,
                                                              std::size_t n, double scale) {
    std::vector<Eigen::VectorXd> cand{e2};
    for (auto& a : A) {
        Eigen::VectorXd a1 = a * e1, a2 = a * e2;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                auto w = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) { return u(p) * v(q) - u(q) * v(p); };
                double c0 = w(e1, a1), c1 = w(e1, a2) + w(e2, a1), c2 = w(e2, a2);
                double m = std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
                if (m < 1e-9 * scale) continue;
                if (std::abs(c2) < 1e-12 * m) {
                    if (std::abs(c1) > 1e-12 * m) cand.push_back(e1 - (c0 / c1) * e2);
                } else {
                    double d = c1 * c1 - 4 * c2 * c0;
                    if (d >= -1e-12 * m * m) {
                        d = std::sqrt(std::max(0.0, d));
                        cand.push_back(e1 + ((-c1 + d) / (2 * c2)) * e2);
                        cand.push_back(e1 + ((-c1 - d) / (2 * c2)) * e2);
                    }
                }
                return cand;
            }
    }
    return std::nullopt;
}

// A real direction fixed by every matrix, if any.
std::optional<Eigen::VectorXd> common_real_eigenvector(const std::vector<QMatrix>& mats, std::size_t n, Rng& rng) {
    std::vector<DMatrix> A;
    for (auto& m : mats) A.push_back(to_eigen(m));
    bool all_scalar = true;
    for (auto& a : A) all_scalar = all_scalar && (a - DMatrix::Identity(n, n) * a(0, 0)).norm() < 1e-12;
    if (all_scalar) return Eigen::VectorXd::Unit(n, 0);
    DMatrix B = DMatrix::Zero(n, n);
    for (auto& a : A) B += rng.uniform(0.5, 1.5) * a;
    double scale = std::max(1.0, B.norm());
    Eigen::EigenSolver<DMatrix> es(B, false);
    std::vector<double> seen;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        auto z = es.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-7 * scale) continue;
        bool dup = false;
        for (double s : seen) dup = dup || std::abs(s - z.real()) < 1e-7 * scale;
        if (dup) continue;
        seen.push_back(z.real());
        DMatrix S = B - z.real() * DMatrix::Identity(n, n);
        Eigen::JacobiSVD<DMatrix> svd(S, Eigen::ComputeFullV);
        std::vector<Eigen::VectorXd> E;
        for (int j = 0; j < static_cast<int>(n); ++j)
            if (svd.singularValues()(j) < 1e-7 * scale) E.push_back(svd.matrixV().col(j));
        if (E.size() == 1) {
            bool ok = true;
            for (auto& a : A) ok = ok && fixes(a, E[0]);
            if (ok) return E[0];
        } else if (E.size() >= 2) {
            auto cand = pencil_candidates(A, E[0], E[1], n, scale);
            if (!cand) return E[0];  // every direction of E is fixed
            for (auto& v : *cand) {
                bool ok = true;
                for (auto& a : A) ok = ok && fixes(a, v);
                if (ok) return v;
            }
        }
    }
    return std::nullopt;
}

Rational wedge(const std::vector<Rational>& u, const std::vector<Rational>& v, std::size_t p, std::size_t q) {
    return u[p] * v[q] - u[q] * v[p];
}

std::vector<Rational> mat_vec(const QMatrix& A, const std::vector<Rational>& v) {
    std::vector<Rational> out(v.size(), Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += A[i][j] * v[j];
    return out;
}

// Combinations of mats that map v into span(v); returned as matrices.
std::vector<QMatrix> direction_stabilizer(const std::vector<QMatrix>& mats, const std::vector<Rational>& v) {
    std::size_t n = v.size();
    QMatrix cons;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
            std::vector<Rational> row;
            for (auto& A : mats) row.push_back(wedge(v, mat_vec(A, v), p, q));
            cons.push_back(row);
        }
    std::vector<QMatrix> out;
    for (auto& k : kernel(cons, mats.size())) {
        QMatrix S(n, std::vector<Rational>(n, Rational(0)));
        for (std::size_t m = 0; m < mats.size(); ++m)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) S[i][j] += k[m] * mats[m][i][j];
        out.push_back(S);
    }
    return out;
}

std::vector<Rational> random_vector(Rng& rng, std::size_t n) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rng.generic_parameter());
    return v;
}

std::string format_vector(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_rational(v[i]);
    return s + ")";
}

// Stages after the fixed-direction test, for the direction v and, in
// dimension 3, the plane spanned by v and w.
std::optional<std::pair<MobilityStage, std::string>> flag_failure(const std::vector<QMatrix>& h,
                                                                  const std::vector<Rational>& v,
                                                                  const std::vector<Rational>& w, Rng& rng) {
    std::size_t n = v.size();
    std::vector<QMatrix> Sv = direction_stabilizer(h, v);
    if (n == 2) {
        if (Sv.empty()) return std::nullopt;
        return std::pair{MobilityStage::LineElementStabilizer,
                         std::to_string(Sv.size()) + "-dimensional stabilizer of direction " + format_vector(v)};
    }
    if (Sv.empty())
        return std::pair{MobilityStage::NoRotationAboutLine, "fixing direction " + format_vector(v) + " stops all motion"};
    // Action on planes through v: quotient by v, in the basis (v, e_a, e_b).
    std::size_t a = 0, b = 1;
    for (std::size_t i = 0; i < 3; ++i)
        if (v[i] != 0) {
            a = (i + 1) % 3;
            b = (i + 2) % 3;
            break;
        }
    QMatrix P(3, std::vector<Rational>(3, Rational(0)));
    for (std::size_t i = 0; i < 3; ++i) P[i][0] = v[i];
    P[a][1] = 1;
    P[b][2] = 1;
    // Inverse of P by elimination on [P | I].
    QMatrix aug(3);
    for (std::size_t i = 0; i < 3; ++i) {
        aug[i] = P[i];
        for (std::size_t j = 0; j < 3; ++j) aug[i].push_back(Rational(i == j ? 1 : 0));
    }
    Rref<Rational> R = rref(aug, 3);
    QMatrix Pinv(3);
    for (std::size_t i = 0; i < 3; ++i) Pinv[i] = std::vector<Rational>(R.rows[i].begin() + 3, R.rows[i].end());
    std::vector<QMatrix> quotients;
    for (auto& S : Sv) {
        QMatrix B = mul(Pinv, mul(S, P));
        quotients.push_back({{B[1][1], B[1][2]}, {B[2][1], B[2][2]}});
    }
    if (common_real_eigenvector(quotients, 2, rng))
        return std::pair{MobilityStage::NoRotationAboutLine,
                         "a plane through direction " + format_vector(v) + " stays fixed"};
    std::vector<Rational> normal{v[1] * w[2] - v[2] * w[1], v[2] * w[0] - v[0] * w[2], v[0] * w[1] - v[1] * w[0]};
    QMatrix cons(1);
    for (auto& S : Sv) {
        auto Sw = mat_vec(S, w);
        cons[0].push_back(normal[0] * Sw[0] + normal[1] * Sw[1] + normal[2] * Sw[2]);
    }
    std::size_t left = Sv.size() - rank(cons);
    if (left == 0) return std::nullopt;
    return std::pair{MobilityStage::SurfaceElementStabilizer,
                     std::to_string(left) + "-dimensional stabilizer of the flag through " + format_vector(v)};
}

}  // namespace

MobilityVerdict free_mobility_infinitesimal(const LieAlgebra& L, const std::vector<Rational>& base, std::uint64_t seed) {
    std::size_t n = L.dim();
    if (n != 2 && n != 3) throw UnsupportedDimension("free_mobility_infinitesimal: dimension must be 2 or 3");
    Rng rng(seed);
    LieAlgebra G = L;
    if (!L.params.empty()) {
        std::vector<Rational> vals;
        for (std::size_t i = 0; i < L.params.size(); ++i) vals.push_back(rng.generic_parameter());
        G = L.with_params(vals);
    }
    if (evaluation_rank(G, base) != n)
        throw NotTransitiveAtBase("free_mobility_infinitesimal: " + L.name + " is not transitive at the base point");
    std::vector<QMatrix> h;
    for (auto& A : linear_isotropy_group(G, base)) h.push_back(to_rational(A));
    MobilityVerdict out;
    out.isotropy_dim = h.size();
    auto fail = [&](MobilityStage s, std::string w) {
        out.free_mobility = false;
        out.failing_stage = s;
        out.witness = std::move(w);
        return out;
    };
    if (auto v = common_real_eigenvector(h, n, rng))
        return fail(MobilityStage::FixedLineElement, "direction " + format_vector(*v) + " is fixed");

    // Real "generic" directions can fail on an open set, so several are tried.
    for (int sample = 0; sample < 8; ++sample) {
        std::vector<Rational> v = random_vector(rng, n), w = random_vector(rng, n);
        if (auto f = flag_failure(h, v, w, rng)) return fail(f->first, f->second);
    }
    out.free_mobility = true;
    return out;
}

Matrix<Rational> killing_form(const StructureConstants& C, const std::vector<Rational>& params) {
    std::map<Sym, Rational> at;
    for (std::uint32_t i = 0; i < params.size(); ++i) at[make_sym(SymKind::Param, i)] = params[i];
    std::size_t r = C.r;
    std::vector<Rational> c(C.c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        RatFun f = at.empty() ? C.c[i] : C.c[i].substitute_values(at);
        if (f.has_kind(SymKind::Param))
            throw std::invalid_argument("killing_form: structure constants depend on parameters without values");
        c[i] = constant_value(f);
    }
    auto at3 = [&](std::size_t j, std::size_t k, std::size_t s) { return c[(j * r + k) * r + s]; };
    QMatrix K(r, std::vector<Rational>(r, Rational(0)));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = j; k < r; ++k) {
            Rational sum = 0;
            for (std::size_t s = 0; s < r; ++s)
                for (std::size_t t = 0; t < r; ++t) sum += at3(j, s, t) * at3(k, t, s);
            K[j][k] = K[k][j] = sum;
        }
    return K;
}

Signature killing_form_signature(const StructureConstants& C, const std::vector<Rational>& params) {
    QMatrix K = killing_form(C, params);
    std::size_t r = K.size();
    Signature sig;
    // Symmetric elimination; a zero diagonal with a nonzero off-diagonal entry
    // is repaired by adding a row and column.
    for (std::size_t i = 0; i < r; ++i) {
        if (K[i][i] == 0) {
            std::size_t j = i + 1;
            while (j < r && K[j][i] == 0) ++j;
            if (j == r) {
                ++sig.zero;
                continue;
            }
            if (K[j][j] != 0) {
                std::swap(K[i], K[j]);
                for (auto& row : K) std::swap(row[i], row[j]);
            } else {
                for (std::size_t l = 0; l < r; ++l) K[i][l] += K[j][l];
                for (std::size_t l = 0; l < r; ++l) K[l][i] += K[l][j];
            }
        }
        Rational d = K[i][i];
        if (d > 0)
            ++sig.pos;
        else
            ++sig.neg;
        for (std::size_t j = i + 1; j < r; ++j)
            for (std::size_t l = i + 1; l < r; ++l) K[j][l] -= K[j][i] * K[i][l] / d;
        for (std::size_t j = i + 1; j < r; ++j) K[j][i] = K[i][j] = 0;
    }
    return sig;
}

}  // namespace lie
