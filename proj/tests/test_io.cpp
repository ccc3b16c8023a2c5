#include <doctest.h>

#include "kwm/io.hpp"
#include "support/instances.hpp"

using namespace kwm;

namespace {

Poly s(int n, int slot) { return Poly::variable(n, slot); }
Poly c(int n, const Rational& v) { return Poly::constant(n, v); }

template <class F>
ParseError parse_error(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error");
    return ParseError(0, 0, "");
}

}  // namespace

TEST_CASE("polynomial expressions") {
    CHECK(parse_poly("s1^2*s2 + 3", 2) == s(2, 1) * s(2, 1) * s(2, 2) + c(2, 3));
    CHECK(parse_poly("-(s1 - 1/2)*2", 1) == c(1, -2) * s(1, 1) + c(1, 1));
    CHECK(parse_poly("t1*t2", 2) == s(2, 1) * s(2, 2));
    CHECK(parse_poly("s0^3", 1) == s(1, 0).pow(3));
    CHECK(parse_poly("0", 1).is_zero());
    CHECK(parse_poly("(s1+1)^3", 1) == (s(1, 1) + c(1, 1)).pow(3));

    const ParseError bad = parse_error([] { parse_poly("s1 +* 2", 1); });
    CHECK(bad.line() == 1);
    CHECK(bad.column() == 5);
    CHECK_THROWS_AS(parse_poly("s3", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("s1/s2", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("1/0", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("s1^99", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("(s1", 2), ParseError);
}

TEST_CASE("matrix files") {
    const ARModel r = parse_matrix("n=1\ns1, -1\n");
    CHECK(r.p() == 1);
    CHECK(r.q() == 2);
    CHECK(r.row_degrees() == std::vector<int>{1});

    CHECK(parse_matrix("n=2\ns1^2*s2 + 3, s2").row_degrees() == std::vector<int>{3});
    CHECK(parse_matrix("# comment\nn=2\nvars=s1,s2\n1, s1; s2, 0 # trailing\n").p() == 2);

    const ParseError bad = parse_error([] { parse_matrix("n=1\ns1 +* 2"); });
    CHECK(bad.line() == 2);
    CHECK(bad.column() == 5);
    CHECK_THROWS_AS(parse_matrix("n=1\n0, 0"), ParseError);
    CHECK_THROWS_AS(parse_matrix("n=1\ns0, 1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("n=1\ns1, 1\n1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("n=1\ns2"), ParseError);
    CHECK_THROWS_AS(parse_matrix("s1, 1"), ParseError);
    CHECK_THROWS_AS(parse_matrix("n=1\n"), ParseError);
    CHECK(parse_matrix("n=1\nq=2\n").is_free());
}

TEST_CASE("matrix files round trip") {
    testing::Instances g(81);
    for (int i = 0; i < 30; ++i) {
        const ARModel r = g.random_ar_model();
        CHECK(parse_matrix(print_matrix(r)) == r);
    }
    const ARModel f = ARModel::free_behavior(2, 3);
    const ARModel back = parse_matrix(print_matrix(f));
    CHECK(back.is_free());
    CHECK(back.q() == 3);
}

TEST_CASE("rational matrices") {
    CHECK(parse_qmatrix("[1, -2/3; 0, 4]", 2, 2) == QMatrix{{1, Rational(-2, 3)}, {0, 4}});
    CHECK(parse_qmatrix("[]", 0, 3).rows() == 0);
    CHECK_THROWS_AS(parse_qmatrix("[1, 2]", 2, 1), ParseError);
    CHECK_THROWS_AS(parse_qmatrix("[1, x]", 1, 2), ParseError);
    const QMatrix m{{Rational(1, 2), 0}, {3, -1}};
    CHECK(parse_qmatrix(print_qmatrix(m), 2, 2) == m);
}

TEST_CASE("model files round trip") {
    testing::Instances g(82);
    for (int i = 0; i < 15; ++i) {
        const KWModel k = kw_of_ar(g.random_ar_model());
        CHECK(parse_model(print_model(k)) == k);
    }
    const KWModel moved = [&] {
        const KWModel k = kw_of_ar(g.random_ar_model(2, 2, 2, 2));
        const QMatrix u = g.invertible(k.dim_y()), v = g.invertible(k.dim_x());
        return KWModel(k.pencil().conjugate(u, v), u * k.m(), k.blocks());
    }();
    CHECK(parse_model(print_model(moved)) == moved);
}

TEST_CASE("model files without indices") {
    const std::string text =
        "n = 1\nq = 2\ndimX = 1\ndimY = 2\nK1 = [1; 0]\nL = [0; 1]\nM = [0, -1; 1, 0]\n";
    const KWModel k = parse_model(text);
    CHECK(k.indices() == KroneckerIndices({1}));
    CHECK(k == kw_of_ar(parse_matrix("n=1\ns1, -1")));

    CHECK_THROWS_AS(parse_model(text + "L = [0; 1]\n"), ParseError);
    CHECK_THROWS_AS(parse_model(text + "foo = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_model("n = 1\nq = 2\ndimX = 1\ndimY = 2\nK1 = [1; 0]\nL = [0; 1]\nM = [0, -1]\n"),
                    ParseError);
    CHECK_THROWS(parse_model("n = 1\nq = 1\nindices = 2\ndimX = 1\ndimY = 2\nK1 = [1; 0]\nL = [0; 1]\nM = [1; 0]\n"));
}

TEST_CASE("reading files") {
    CHECK_THROWS_AS(read_file("/nonexistent/file.mat"), std::runtime_error);
}
