#include <doctest.h>

#include "kwm/oracle.hpp"
#include "support/instances.hpp"

using namespace kwm;

namespace {

Poly s(int n, int slot) { return Poly::variable(n, slot); }
Poly c(int n, const Rational& v) { return Poly::constant(n, v); }

}  // namespace

TEST_CASE("truncated span coordinates") {
    const int n = 1;
    const oracle::TruncatedSpan span = oracle::truncated_span({{s(n, 1), c(n, 1)}}, Ring::S, n, 2, 2);
    // Multiples of (s1, 1) by 1 and s1 fit in degree 2.
    CHECK(span.basis.cols() == 2);
    CHECK(span.basis.rows() == 2 * 3);
    CHECK(rank(span.basis) == 2);
    const QMatrix v = span.coordinates({s(n, 1) * s(n, 1), s(n, 1)});
    CHECK(solve(span.basis, v).has_value());
    CHECK_FALSE(solve(span.basis, span.coordinates({c(n, 1), Poly(n)})).has_value());
}

TEST_CASE("truncated membership small cases") {
    const int n = 2;
    const std::vector<ModuleVector> gens = {{s(n, 1), s(n, 2)}, {c(n, 1), s(n, 1) * s(n, 2)}};
    CHECK(oracle::truncated_membership(gens[0], gens, Ring::S, n, 3));
    CHECK(oracle::truncated_membership(gens[0] + s(n, 2) * gens[1], gens, Ring::S, n, 4));
    // The certificate needs degree 4 multiples, out of reach at D = 2.
    CHECK_FALSE(oracle::truncated_membership(s(n, 2) * s(n, 2) * gens[1], gens, Ring::S, n, 2));
    CHECK(oracle::truncated_membership(zero_vector(n, 2), gens, Ring::S, n, 0));
}

TEST_CASE("truncated membership agrees with Groebner membership") {
    testing::Instances g(71);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = g.uniform(1, 2);
        std::vector<ModuleVector> gens;
        for (int i = 0; i < 2; ++i) gens.push_back(g.module_vector(n, 2, 2));
        ModuleVector v = g.coin() ? testing::combination({g.poly(n, 1), g.poly(n, 1)}, gens) : g.module_vector(n, 2, 2);
        const int deg = std::max(0, std::max(v[0].degree(), v[1].degree()));
        const bool truncated = oracle::truncated_membership(v, gens, Ring::S, n, deg + 3);
        const bool exact = membership(v, module_gb(gens, GradedFreeModule::free(Ring::S, n, 2)), false).member;
        if (truncated) CHECK(exact);
        if (!exact) CHECK_FALSE(truncated);
        agree += truncated == exact;
    }
    CHECK(agree >= 90);
}

TEST_CASE("degreewise regularity") {
    const int n = 1;
    const auto zd = oracle::truncated_s0_regularity({{s(n, 0)}}, {0}, n, 4);
    CHECK(zd.verdict == oracle::RegularityVerdict::ZeroDivisorFound);
    CHECK(zd.degree == 0);
    for (int D = 0; D <= 5; ++D)
        CHECK(oracle::truncated_s0_regularity({{s(n, 1)}}, {0}, n, D).verdict ==
              oracle::RegularityVerdict::RegularUpToD);
}

TEST_CASE("degreewise regularity agrees with the colon test") {
    testing::Instances g(72);
    for (int trial = 0; trial < 30; ++trial) {
        const ARModel r = g.random_ar_model();
        const PolyMatrix h = homogenize(r.matrix(), r.row_degrees());
        std::vector<ModuleVector> gens;
        for (std::size_t i = 0; i < h.rows(); ++i) gens.push_back(h.row(i));
        const auto rep = oracle::truncated_s0_regularity(gens, std::vector<int>(r.q(), 0), r.n(), 6);
        const bool regular = is_proper_ar(r);
        if (rep.verdict == oracle::RegularityVerdict::ZeroDivisorFound) CHECK_FALSE(regular);
        if (regular) CHECK(rep.verdict == oracle::RegularityVerdict::RegularUpToD);
    }
}

TEST_CASE("dense differential kernel") {
    CHECK(oracle::dense_diff_kernel(ARModel(PolyMatrix::from_qmatrix(2, QMatrix::identity(2))), 3).empty());
    const ARModel d(PolyMatrix::from_rows(1, {{s(1, 1), c(1, -1)}}));
    CHECK(oracle::dense_diff_kernel(d, 1).size() == 2);
    for (int D = 0; D <= 4; ++D) CHECK(oracle::dense_diff_kernel(d, D).size() == static_cast<std::size_t>(D + 1));
}

TEST_CASE("span comparison") {
    const int n = 1;
    const Trajectory a{n, {c(n, 1), Poly(n)}}, b{n, {s(n, 1), c(n, 1)}};
    const Trajectory sum{n, {c(n, 1) + s(n, 1), c(n, 1)}};
    CHECK(oracle::same_span({a, b}, {sum, a}, n, 2));
    CHECK_FALSE(oracle::same_span({a, b}, {a}, n, 2));
    CHECK(oracle::same_span({}, {}, n, 2));
    CHECK(oracle::same_span({a, a}, {a}, n, 2));
}
