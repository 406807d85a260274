#include <arbkit/linalg.hpp>

#include <doctest.h>

#include <random>

using namespace arbkit;

namespace {

QMat random_mat(std::mt19937_64& rng, size_t r, size_t c) {
    QMat m(r, QVec(c));
    for (auto& row : m)
        for (auto& v : row)
            v = Rat(static_cast<long>(rng() % 11) - 5);
    return m;
}

} // namespace

TEST_CASE("rank and rref on hand matrices") {
    QMat a = {{1, 2}, {2, 4}};
    CHECK(rank(a) == 1);
    QMat b = {{1, 0, 2}, {0, 1, 3}, {1, 1, 5}}; // row3 = row1 + row2
    CHECK(rank(b) == 2);
    QMat id = {{1, 0}, {0, 1}};
    CHECK(rank(id) == 2);

    QMat c = {{0, 2, 4}, {1, 1, 1}};
    auto piv = rref(c);
    CHECK(piv.size() == 2);
    // Leading entries are 1 and pivot columns are cleared.
    for (size_t i = 0; i < piv.size(); ++i) {
        CHECK(c[i][static_cast<size_t>(piv[i])] == 1);
        for (size_t r = 0; r < c.size(); ++r)
            if (r != i) CHECK(c[r][static_cast<size_t>(piv[i])] == 0);
    }
}

TEST_CASE("nullspace rows annihilate and have the right dimension") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 60; ++k) {
        QMat a = random_mat(rng, 3, 5);
        QMat ns = nullspace(a);
        CHECK(ns.size() == 5 - static_cast<size_t>(rank(a)));
        for (const QVec& v : ns)
            for (const QVec& row : a) CHECK(dot(row, v) == 0);
        // Null space rows are linearly independent.
        CHECK(rank(ns) == static_cast<int>(ns.size()));
    }
}

TEST_CASE("solve returns a witness or detects inconsistency") {
    QMat a = {{2, 1}, {1, -1}};
    auto x = solve(a, {Rat(5), Rat(1)});
    REQUIRE(x);
    CHECK(dot(a[0], *x) == 5);
    CHECK(dot(a[1], *x) == 1);

    QMat s = {{1, 1}, {2, 2}};
    CHECK(!solve(s, {Rat(1), Rat(3)})); // parallel rows, different rhs
    auto ok = solve(s, {Rat(1), Rat(2)});
    REQUIRE(ok);
    CHECK(dot(s[0], *ok) == 1);

    std::mt19937_64 rng(13);
    for (int k = 0; k < 60; ++k) {
        QMat m = random_mat(rng, 4, 4);
        QVec target(4);
        for (auto& v : target) v = Rat(static_cast<long>(rng() % 9) - 4);
        auto sol = solve(m, target);
        if (sol) {
            for (size_t i = 0; i < 4; ++i) CHECK(dot(m[i], *sol) == target[i]);
        } else {
            // Inconsistent: rank must grow when the target is appended.
            QMat aug = m;
            for (size_t i = 0; i < 4; ++i) aug[i].push_back(target[i]);
            CHECK(rank(aug) == rank(m) + 1);
        }
    }
}

TEST_CASE("row_basis is canonical: equal spans give identical bases") {
    QMat a = {{1, 2, 3}, {0, 1, 1}};
    QMat b = {{1, 3, 4}, {2, 5, 7}, {1, 2, 3}}; // same span, redundancy
    CHECK(row_basis(a) == row_basis(b));
}

TEST_CASE("orthogonal_complement is orthogonal and fills the dimension") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 40; ++k) {
        QMat a = random_mat(rng, 2, 4);
        QMat oc = orthogonal_complement(a, 4);
        CHECK(oc.size() == 4 - static_cast<size_t>(rank(a)));
        for (const QVec& u : oc)
            for (const QVec& v : a) CHECK(dot(u, v) == 0);
    }
}

TEST_CASE("in_span") {
    QMat basis = {{1, 0, 1}, {0, 1, 1}};
    CHECK(in_span(basis, {Rat(2), Rat(3), Rat(5)}));
    CHECK(!in_span(basis, {Rat(0), Rat(0), Rat(1)}));
    CHECK(in_span(basis, zeros(3)));
}

TEST_CASE("canonical_ray: coprime integers, optional orientation") {
    QVec v = {Rat(2, 3), Rat(-4, 3)};
    QVec c = canonical_ray(v);
    CHECK(c == QVec{Rat(1), Rat(-2)}); // positive multiple only
    // Sign-free orientation: first nonzero entry made positive.
    CHECK(canonical_ray(v, true) == QVec{Rat(1), Rat(-2)});
    CHECK(canonical_ray(QVec{Rat(-1), Rat(2)}, true) == QVec{Rat(1), Rat(-2)});
    CHECK(canonical_ray(zeros(2)) == zeros(2));
}
