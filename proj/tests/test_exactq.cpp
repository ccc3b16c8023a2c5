#include <doctest.h>

#include "kwm/exactq.hpp"
#include "support/instances.hpp"

using namespace kwm;

namespace {

// Fraction-free Bareiss elimination on integer matrices.
std::size_t bareiss_rank(const QMatrix& m) {
    std::vector<std::vector<Integer>> a(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            REQUIRE(m(r, c).get_den() == 1);
            a[r][c] = m(r, c).get_num();
        }
    std::size_t rank = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t p = rank;
        while (p < m.rows() && a[p][c] == 0) ++p;
        if (p == m.rows()) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = rank + 1; r < m.rows(); ++r) {
            for (std::size_t k = c + 1; k < m.cols(); ++k)
                a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
            a[r][c] = 0;
        }
        prev = a[rank][c];
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4") == -4);
    CHECK(to_string(Rational(-3, 4)) == "-3/4");
    CHECK(to_string(Rational(5)) == "5");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("rref of small matrices") {
    const auto id = rref(QMatrix::identity(2));
    CHECK(id.matrix == QMatrix::identity(2));
    CHECK(id.pivots == std::vector<std::size_t>{0, 1});

    const auto r = rref(QMatrix{{1, 2}, {2, 4}});
    CHECK(r.matrix == QMatrix{{1, 2}, {0, 0}});
    CHECK(r.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rref of a fixed 5x7 matrix matches an independent computation") {
    const QMatrix a{{1, -2, 3, 0, 1, -1, 2},
                    {2, -4, 6, 0, 2, -2, 4},
                    {0, 1, -1, 3, 2, 0, -3},
                    {1, -1, 2, 3, 3, -1, -1},
                    {3, 0, -3, 1, -2, 2, 1}};
    const auto r = rref(a);
    const Rational z = 0;
    const QMatrix expected{{1, 0, 0, Rational(19, 6), Rational(13, 6), Rational(-1, 6), Rational(-11, 6)},
                           {0, 1, 0, Rational(35, 6), Rational(29, 6), Rational(-5, 6), Rational(-31, 6)},
                           {0, 0, 1, Rational(17, 6), Rational(17, 6), Rational(-5, 6), Rational(-13, 6)},
                           {z, z, z, z, z, z, z},
                           {z, z, z, z, z, z, z}};
    CHECK(r.matrix == expected);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});
    CHECK(rank(a) == 3);
}

TEST_CASE("rank agrees with fraction-free elimination on random matrices") {
    testing::Instances g(11);
    for (int i = 0; i < 40; ++i) {
        const QMatrix m = g.matrix(5, 7);
        CHECK(rank(m) == bareiss_rank(m));
    }
}

TEST_CASE("rref is idempotent") {
    testing::Instances g(12);
    for (int i = 0; i < 20; ++i) {
        const auto r = rref(g.matrix(4, 6));
        CHECK(rref(r.matrix).matrix == r.matrix);
    }
}

TEST_CASE("kernel basis") {
    CHECK(kernel_basis(QMatrix(2, 3)) == QMatrix::identity(3));
    CHECK(kernel_basis(QMatrix{{1, 1}}) == QMatrix{{-1}, {1}});

    testing::Instances g(13);
    for (int i = 0; i < 30; ++i) {
        const QMatrix m = g.matrix(static_cast<std::size_t>(g.uniform(1, 5)), static_cast<std::size_t>(g.uniform(1, 6)));
        const QMatrix k = kernel_basis(m);
        CHECK((m * k).is_zero());
        CHECK(rank(k) == k.cols());
        CHECK(rank(m) + k.cols() == m.cols());
    }
}

TEST_CASE("solve") {
    const QMatrix b{{3}, {-1}};
    CHECK(*solve(QMatrix::identity(2), b) == b);
    CHECK(*solve(QMatrix{{1, 1}}, QMatrix{{2}}) == QMatrix{{2}, {0}});
    CHECK_FALSE(solve(QMatrix{{1, 1}, {1, 1}}, QMatrix{{1}, {2}}).has_value());
    CHECK_THROWS_AS(solve(QMatrix{{1, 1}}, QMatrix{{1}, {2}}), DimensionError);

    testing::Instances g(14);
    for (int i = 0; i < 30; ++i) {
        const QMatrix m = g.matrix(4, 5);
        const QMatrix x = g.matrix(5, 1);
        auto sol = solve(m, m * x);
        REQUIRE(sol.has_value());
        CHECK(m * *sol == m * x);
    }
}

TEST_CASE("inverse and block helpers") {
    const QMatrix m{{2, 1}, {1, 1}};
    CHECK(*inverse(m) == QMatrix{{1, -1}, {-1, 2}});
    CHECK_FALSE(inverse(QMatrix{{1, 2}, {2, 4}}).has_value());
    CHECK(hstack(QMatrix{{1}}, QMatrix{{2}}) == QMatrix{{1, 2}});
    CHECK(vstack(QMatrix{{1}}, QMatrix{{2}}) == QMatrix{{1}, {2}});
    CHECK(block_diagonal({QMatrix{{1}}, QMatrix{{2}}}) == QMatrix{{1, 0}, {0, 2}});
    const QMatrix row{{1, 2}};
    CHECK_THROWS_AS(row * row, DimensionError);
}

TEST_CASE("modular rank") {
    testing::Instances g(15);
    for (int i = 0; i < 30; ++i) {
        const auto r = static_cast<std::size_t>(g.uniform(1, 7));
        const auto c = static_cast<std::size_t>(g.uniform(1, 7));
        QMatrix m = g.matrix(r, c);
        if (g.coin()) m = m * g.matrix(c, c, 1);
        for (auto k : {std::size_t{0}, r - 1}) m(k, 0) = m(k, 0) / Rational(g.uniform(1, 9));
        CHECK(rank_mod_p(m) == rank(m));
    }
    // 2^61 - 1 divides the denominator.
    const Rational bad(1, mpz_class("2305843009213693951"));
    CHECK_FALSE(rank_mod_p(QMatrix{{bad}}).has_value());
    CHECK(rank_mod_p(QMatrix(0, 3)) == std::size_t{0});
}
