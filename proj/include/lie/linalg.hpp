#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lie/ratfun.hpp"

namespace lie {

template <class F>
using Matrix = std::vector<std::vector<F>>;

namespace detail {
inline int pivot_cost(const Rational&) { return 0; }
inline int pivot_cost(const RatFun& f) {
    if (f.is_constant()) return 0;
    return 1 + static_cast<int>(f.num().terms().size()) + static_cast<int>(f.den().size());
}
}  // namespace detail

// Reduced row echelon form over an exact field (Rational or RatFun).
template <class F>
struct Rref {
    Matrix<F> rows;
    std::vector<std::size_t> pivot_cols;
};

template <class F>
Rref<F> rref(Matrix<F> m, std::size_t pivot_limit = static_cast<std::size_t>(-1)) {
    Rref<F> out;
    if (m.empty()) return out;
    std::size_t ncols = m[0].size();
    std::size_t limit = std::min(ncols, pivot_limit);
    std::size_t r = 0;
    for (std::size_t c = 0; c < limit && r < m.size(); ++c) {
        std::size_t best = m.size();
        int best_cost = 0;
        for (std::size_t i = r; i < m.size(); ++i) {
            if (is_zero(m[i][c])) continue;
            int cost = detail::pivot_cost(m[i][c]);
            if (best == m.size() || cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        if (best == m.size()) continue;
        std::swap(m[r], m[best]);
        F inv = F(1) / m[r][c];
        for (std::size_t j = c; j < ncols; ++j)
            if (!is_zero(m[r][j])) m[r][j] = m[r][j] * inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || is_zero(m[i][c])) continue;
            F f = m[i][c];
            for (std::size_t j = c; j < ncols; ++j)
                if (!is_zero(m[r][j])) m[i][j] = m[i][j] - f * m[r][j];
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).pivot_cols.size();
}

// Basis of {v : m v = 0}; one vector per free column, with a 1 in that slot.
template <class F>
Matrix<F> kernel(const Matrix<F>& m, std::size_t ncols) {
    Matrix<F> basis;
    if (m.empty()) {
        for (std::size_t j = 0; j < ncols; ++j) {
            std::vector<F> v(ncols, F(0));
            v[j] = F(1);
            basis.push_back(v);
        }
        return basis;
    }
    Rref<F> R = rref(m);
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : R.pivot_cols) is_pivot[c] = true;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(ncols, F(0));
        v[free] = F(1);
        for (std::size_t i = 0; i < R.pivot_cols.size(); ++i) v[R.pivot_cols[i]] = -R.rows[i][free];
        basis.push_back(v);
    }
    return basis;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& m) {
    if (m.empty()) return {};
    Matrix<F> t(m[0].size(), std::vector<F>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

// Numeric rank with singular values above tol * max(1, largest).
inline std::size_t numeric_rank(const Matrix<double>& m, double tol = 1e-8) {
    if (m.empty() || m[0].empty()) return 0;
    Eigen::MatrixXd a(m.size(), m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) a(i, j) = m[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    double scale = std::max(1.0, s.size() ? s(0) : 0.0);
    std::size_t r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale) ++r;
    return r;
}

}  // namespace lie
