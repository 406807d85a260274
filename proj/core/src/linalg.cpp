#include "arbkit/linalg.hpp"

#include <stdexcept>

namespace arbkit {

Rat dot(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::logic_error("dot: size mismatch");
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

QVec add(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::logic_error("add: size mismatch");
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec sub(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::logic_error("sub: size mismatch");
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec scale(const QVec& a, const Rat& s) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

bool is_zero(const QVec& a) {
    for (const Rat& x : a)
        if (x != 0) return false;
    return true;
}

QVec zeros(size_t n) { return QVec(n, Rat(0)); }

std::vector<int> rref(QMat& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        const Rat inv = Rat(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rat f = m[i][c];
            for (size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

int rank(QMat m) { return static_cast<int>(rref(m).size()); }

QMat nullspace(const QMat& m) {
    if (m.empty()) return {};
    const size_t cols = m[0].size();
    QMat a = m;
    std::vector<int> pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    QMat basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        QVec v = zeros(cols);
        v[fc] = 1;
        for (size_t pr = 0; pr < pivots.size(); ++pr)
            v[static_cast<size_t>(pivots[pr])] = -a[pr][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

QMat row_basis(const QMat& rows) {
    QMat a = rows;
    std::vector<int> pivots = rref(a);
    a.resize(pivots.size());
    return a;
}

QMat orthogonal_complement(const QMat& rows, size_t n) {
    if (rows.empty()) {
        QMat id;
        for (size_t i = 0; i < n; ++i) {
            QVec e = zeros(n);
            e[i] = 1;
            id.push_back(std::move(e));
        }
        return id;
    }
    return nullspace(rows);
}

bool in_span(const QMat& basis, const QVec& x) {
    if (is_zero(x)) return true;
    QMat a = basis;
    a.push_back(x);
    return rank(std::move(a)) == rank(basis);
}

std::optional<QVec> solve(const QMat& m, const QVec& rhs) {
    if (m.size() != rhs.size()) throw std::logic_error("solve: size mismatch");
    if (m.empty()) return QVec{};
    const size_t cols = m[0].size();
    QMat aug = m;
    for (size_t i = 0; i < m.size(); ++i) aug[i].push_back(rhs[i]);
    std::vector<int> pivots = rref(aug);
    // A pivot in the appended column means the system is inconsistent.
    if (!pivots.empty() && pivots.back() == static_cast<int>(cols))
        return std::nullopt;
    QVec x = zeros(cols);
    for (size_t pr = 0; pr < pivots.size(); ++pr)
        x[static_cast<size_t>(pivots[pr])] = aug[pr][cols];
    return x;
}

QVec canonical_ray(const QVec& v, bool orient) {
    if (is_zero(v)) return v;
    // Common denominator, then divide by the gcd of the numerators.
    Int den = 1;
    for (const Rat& x : v)
        if (x != 0) den = boost::multiprecision::lcm(den, Int(denominator(x)));
    std::vector<Int> num(v.size());
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        num[i] = Int(numerator(v[i])) * (den / Int(denominator(v[i])));
        g = boost::multiprecision::gcd(g, num[i]);
    }
    int sign = 1;
    if (orient) {
        for (const Int& x : num) {
            if (x != 0) {
                sign = x > 0 ? 1 : -1;
                break;
            }
        }
    }
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(num[i] * sign) / Rat(g);
    return r;
}

} // namespace arbkit
