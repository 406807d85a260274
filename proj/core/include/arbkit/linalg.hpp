#pragma once
// Small dense exact linear algebra: row reduction, rank, null spaces,
// linear solves. Everything is over Rat; pivoting is exact so there is no
// notion of tolerance anywhere.

#include "arbkit/rational.hpp"

namespace arbkit {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

Rat dot(const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const QVec& a, const Rat& s);
bool is_zero(const QVec& a);
QVec zeros(size_t n);

// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rref(QMat& m);

int rank(QMat m);

// Basis of {x : m x = 0} (rows of the result).
QMat nullspace(const QMat& m);

// Basis of the span of the given rows (subset reduction; rows of result are
// in reduced echelon form so two equal spans produce identical bases).
QMat row_basis(const QMat& rows);

// Orthogonal complement of span(rows) inside R^n (n = row width).
QMat orthogonal_complement(const QMat& rows, size_t n);

// Is x in span(basis rows)?
bool in_span(const QMat& basis, const QVec& x);

// One solution of m x = rhs, or nullopt if inconsistent.
std::optional<QVec> solve(const QMat& m, const QVec& rhs);

// Scale a rational ray to coprime integers with the first nonzero entry
// positive when `orient` is set (used for sign-free objects like lineality
// directions; cone rays keep their inherent orientation and only get the
// positive-multiple normalization).
QVec canonical_ray(const QVec& v, bool orient = false);

} // namespace arbkit
