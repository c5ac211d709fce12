#include <catch2/catch_amalgamated.hpp>

#include "seqtube/seqvec.hpp"

using namespace seqtube;

TEST_CASE("basis vectors and coefficients") {
    const SparseVec e = SparseVec::basis(-7);
    CHECK(e.coeff(-7) == 1.0);
    CHECK(e.coeff(0) == 0.0);
    CHECK(e.support_size() == 1);
    CHECK(norm(e) == 1.0);
}

TEST_CASE("zero vector has empty support") {
    const SparseVec z;
    CHECK(z.is_zero());
    CHECK(z.encode().empty());
    CHECK(norm(z) == 0.0);
    CHECK(z.dominant_index() == 0);
}

TEST_CASE("from_entries sorts, merges duplicates and drops dust") {
    SparseVec::Storage s;
    s.push_back({3, 0.5});
    s.push_back({-1, 2.0});
    s.push_back({3, -0.5});
    s.push_back({0, 1e-20});
    const SparseVec v = SparseVec::from_entries(std::move(s), 1e-15);
    REQUIRE(v.support_size() == 1);
    CHECK(v.coeff(-1) == 2.0);
    CHECK(v.coeff(3) == 0.0);
}

TEST_CASE("inner product matches a dense computation") {
    const SparseVec x{{-2, 1.5}, {0, -2.0}, {5, 0.25}};
    const SparseVec y{{0, 4.0}, {5, 8.0}, {6, 100.0}};
    CHECK(inner(x, y) == Catch::Approx(-8.0 + 2.0).epsilon(1e-15));
    CHECK(inner(x, SparseVec{}) == 0.0);
}

TEST_CASE("axpy and combine agree and cancel exactly") {
    const SparseVec x{{0, 1.0}, {1, 2.0}};
    const SparseVec y{{1, -2.0}, {2, 3.0}};
    const SparseVec s = axpy(1.0, x, y);
    CHECK(s.coeff(0) == 1.0);
    CHECK(s.coeff(1) == 0.0);  // exact cancellation is pruned
    CHECK(s.coeff(2) == 3.0);
    CHECK(s.support_size() == 2);

    const double cs[3] = {2.0, -1.0, 0.0};
    const SparseVec* vs[3] = {&x, &y, &s};
    const SparseVec c = combine(cs, vs);
    CHECK(c.coeff(0) == 2.0);
    CHECK(c.coeff(1) == 6.0);
    CHECK(c.coeff(2) == -3.0);
}

TEST_CASE("scaled by zero is the zero vector") {
    const SparseVec x{{0, 1.0}, {4, -2.0}};
    CHECK(scaled(0.0, x).is_zero());
    CHECK(norm(scaled(-2.0, x)) == Catch::Approx(2.0 * norm(x)).epsilon(1e-15));
}

TEST_CASE("shift relabels indices") {
    const SparseVec x{{-1, 1.0}, {2, -3.0}};
    const SparseVec y = shift(5, x);
    CHECK(y.coeff(4) == 1.0);
    CHECK(y.coeff(7) == -3.0);
    CHECK(norm(y) == norm(x));
    CHECK(y.min_index() == 4);
    CHECK(y.max_index() == 7);
}

TEST_CASE("dominant index picks the largest magnitude") {
    const SparseVec x{{-3, 0.5}, {0, -2.5}, {9, 2.0}};
    CHECK(x.dominant_index() == 0);
}

TEST_CASE("encode/parse round trip is bit exact") {
    const SparseVec x{{-12, 0.1}, {0, -3.0000000000000004}, {77, 1e-300}};
    const SparseVec y = SparseVec::parse(x.encode());
    REQUIRE(y.support_size() == x.support_size());
    for (const Entry& e : x.entries()) CHECK(y.coeff(e.index) == e.value);
    CHECK(SparseVec::parse("").is_zero());
}

TEST_CASE("parse accepts the documented format") {
    const SparseVec v = SparseVec::parse("-2:1.5;0:-0.25;3:2");
    CHECK(v.coeff(-2) == 1.5);
    CHECK(v.coeff(0) == -0.25);
    CHECK(v.coeff(3) == 2.0);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(SparseVec::parse("1:2;bad"), std::invalid_argument);
    CHECK_THROWS_AS(SparseVec::parse("1=2"), std::invalid_argument);
    CHECK_THROWS_AS(SparseVec::parse("x:2"), std::invalid_argument);
    CHECK_THROWS_AS(SparseVec::parse("1:"), std::invalid_argument);
}
