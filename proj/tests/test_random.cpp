#include <doctest.h>

#include "oracles.hpp"
#include "rrgen/random.hpp"

using namespace rrgen;

TEST_SUITE("random") {

TEST_CASE("same seed reproduces the same stream") {
    RngStream a(42);
    RngStream b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42);
    RngStream d(42);
    const Vector va = gauss_draw(c, 33, 1.5);
    const Vector vb = gauss_draw(d, 33, 1.5);
    CHECK((va - vb).norm() == 0.0);
    CHECK(c.position() == d.position());
}

TEST_CASE("different seeds and derived streams differ") {
    RngStream a(1);
    RngStream b(2);
    CHECK(a.next_u64() != b.next_u64());

    RngStream base(7);
    RngStream d1 = base.derive(0, 0);
    RngStream d2 = base.derive(0, 1);
    RngStream d3 = base.derive(1, 0);
    const auto x1 = d1.next_u64();
    const auto x2 = d2.next_u64();
    const auto x3 = d3.next_u64();
    CHECK(x1 != x2);
    CHECK(x1 != x3);
    CHECK(x2 != x3);
}

TEST_CASE("position advances deterministically") {
    RngStream a(5);
    CHECK(a.position() == 0);
    (void)a.next_u64();
    CHECK(a.position() == 1);
    (void)gauss_draw(a, 4, 1.0);  // two uniform pairs
    CHECK(a.position() == 5);
}

TEST_CASE("gauss_draw sample mean within the 4/sqrt(n) band") {
    RngStream rng(1234);
    const Index n = 100000;
    const Vector v = gauss_draw(rng, n, 1.0);
    const double mean = v.mean();
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gauss_draw sample variance near one") {
    RngStream rng(4321);
    const Index n = 100000;
    const Vector v = gauss_draw(rng, n, 1.0);
    const double mean = v.mean();
    const double var = (v.array() - mean).square().sum() / static_cast<double>(n - 1);
    CHECK(var >= 0.98);
    CHECK(var <= 1.02);
}

TEST_CASE("gauss_draw rejects non-positive sigma") {
    RngStream rng(9);
    CHECK_THROWS_AS(gauss_draw(rng, 3, 0.0), std::invalid_argument);
}

} // TEST_SUITE
