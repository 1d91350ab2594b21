#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "evagan/matrix.hpp"
#include "evagan/rng.hpp"

using namespace evagan;

TEST_CASE("matrix shape checks throw with both shapes in the message") {
    Matrix a(2, 3), b(3, 2);
    CHECK_NOTHROW(require_same_shape(a, a, "here"));
    try {
        require_same_shape(a, b, "here");
        FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("[2x3]") != std::string::npos);
        CHECK(msg.find("[3x2]") != std::string::npos);
    }
    CHECK_THROWS_AS(require_shape(a, 4, 4, "here"), std::invalid_argument);
}

TEST_CASE("matrix basics") {
    Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m(1, 2) == 6.0);
    CHECK(m.row(1)[0] == 4.0);
    CHECK(m.all_finite());
    m(0, 0) = std::nan("");
    CHECK_FALSE(m.all_finite());
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("rng streams are deterministic per seed") {
    Rng a(123), b(123), c(124);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        all_equal = all_equal && (x == b.next_u64());
        any_diff = any_diff || (x != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform stays in [0,1) and looks uniform") {
    Rng rng(5);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_index covers the full range") {
    Rng rng(9);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_index(7)];
    for (int c : counts) CHECK(c > 8000);  // expectation 10000 each
}

TEST_CASE("normal moments are plausible") {
    Rng rng(31);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rng state round-trips through streams") {
    Rng rng(77);
    for (int i = 0; i < 13; ++i) rng.next_u64();
    std::stringstream buf;
    rng.save(buf);
    const auto expect = rng.next_u64();
    Rng restored;
    restored.load(buf);
    CHECK(restored.next_u64() == expect);
}
