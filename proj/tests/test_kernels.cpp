#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "evagan/kernels.hpp"
#include "evagan/rng.hpp"

using namespace evagan;
namespace k = evagan::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Naive triple loops the fast kernels must agree with.
std::vector<double> oracle_gemm_nn(const std::vector<double>& a, const std::vector<double>& b,
                                   std::size_t m, std::size_t kk, std::size_t n) {
    std::vector<double> c(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < kk; ++p)
            for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * kk + p] * b[p * n + j];
    return c;
}

std::vector<double> oracle_gemm_tn_acc(std::vector<double> c, const std::vector<double>& a,
                                       const std::vector<double>& b, std::size_t m,
                                       std::size_t kk, std::size_t n) {
    for (std::size_t p = 0; p < kk; ++p)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[p * m + i] * b[p * n + j];
    return c;
}

std::vector<double> oracle_gemm_nt(const std::vector<double>& a, const std::vector<double>& b,
                                   std::size_t m, std::size_t kk, std::size_t n) {
    std::vector<double> c(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < kk; ++p) s += a[i * kk + p] * b[j * kk + p];
            c[i * n + j] = s;
        }
    return c;
}

void check_close(const std::vector<double>& got, const std::vector<double>& want,
                 double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double scale = std::max(1.0, std::abs(want[i]));
        CHECK(std::abs(got[i] - want[i]) <= tol * scale);
    }
}

const std::size_t kShapes[][3] = {
    {1, 1, 1}, {2, 3, 4}, {5, 7, 3}, {8, 8, 8}, {13, 17, 11}, {32, 64, 128}, {3, 100, 1},
};

} // namespace

TEST_CASE("gemm kernels match the loop oracles on both backends") {
    Rng rng(42);
    const k::KernelTable* tables[] = {&k::scalar_table,
                                      k::avx2_supported() ? &k::avx2_table : nullptr};
    for (const auto* table : tables) {
        if (!table) continue;
        for (const auto& s : kShapes) {
            const std::size_t m = s[0], kk = s[1], n = s[2];
            const auto a = random_vec(m * kk, rng);
            const auto b = random_vec(kk * n, rng);
            std::vector<double> c(m * n, 0.0);
            table->gemm_nn(c.data(), a.data(), b.data(), m, kk, n);
            check_close(c, oracle_gemm_nn(a, b, m, kk, n));

            const auto at = random_vec(kk * m, rng);
            auto acc = random_vec(m * n, rng);
            const auto want_tn = oracle_gemm_tn_acc(acc, at, b, m, kk, n);
            table->gemm_tn_acc(acc.data(), at.data(), b.data(), m, kk, n);
            check_close(acc, want_tn);

            const auto bt = random_vec(n * kk, rng);
            std::vector<double> cnt(m * n, 0.0);
            table->gemm_nt(cnt.data(), a.data(), bt.data(), m, kk, n);
            check_close(cnt, oracle_gemm_nt(a, bt, m, kk, n));
        }
    }
}

TEST_CASE("scalar and avx2 elementwise kernels agree") {
    if (!k::avx2_supported()) {
        MESSAGE("avx2 not available; scalar-only machine");
        return;
    }
    Rng rng(7);
    for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 63u, 64u, 1000u}) {
        const auto x = random_vec(n, rng);
        std::vector<double> ys(n), yv(n);
        k::scalar_table.relu(ys.data(), x.data(), n);
        k::avx2_table.relu(yv.data(), x.data(), n);
        check_close(yv, ys, 0.0);

        k::scalar_table.leaky_relu(ys.data(), x.data(), 0.2, n);
        k::avx2_table.leaky_relu(yv.data(), x.data(), 0.2, n);
        check_close(yv, ys, 0.0);

        const auto dy = random_vec(n, rng);
        k::scalar_table.leaky_relu_grad(ys.data(), dy.data(), x.data(), 0.2, n);
        k::avx2_table.leaky_relu_grad(yv.data(), dy.data(), x.data(), 0.2, n);
        check_close(yv, ys, 0.0);

        auto as = random_vec(n, rng);
        auto av = as;
        k::scalar_table.add(as.data(), x.data(), n);
        k::avx2_table.add(av.data(), x.data(), n);
        check_close(av, as, 0.0);

        auto ss = random_vec(n, rng);
        auto sv = ss;
        k::scalar_table.scale_add(ss.data(), 0.99, 0.01, n);
        k::avx2_table.scale_add(sv.data(), 0.99, 0.01, n);
        check_close(sv, ss, 1e-15);
    }
}

TEST_CASE("adam kernel matches the textbook update on both backends") {
    Rng rng(11);
    const std::size_t n = 37;
    const double lr = 5e-4, b1 = 0.5, b2 = 0.999, eps = 1e-8;
    for (std::uint64_t t : {1u, 2u, 10u}) {
        const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t));
        const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t));
        const auto p0 = random_vec(n, rng);
        const auto m0 = random_vec(n, rng, -0.1, 0.1);
        const auto v0 = random_vec(n, rng, 0.0, 0.1);
        const auto g = random_vec(n, rng);

        std::vector<double> want_p(n), want_m(n), want_v(n);
        for (std::size_t i = 0; i < n; ++i) {
            want_m[i] = b1 * m0[i] + (1.0 - b1) * g[i];
            want_v[i] = b2 * v0[i] + (1.0 - b2) * g[i] * g[i];
            const double mhat = want_m[i] / corr1;
            const double vhat = want_v[i] / corr2;
            want_p[i] = p0[i] - lr * mhat / (std::sqrt(vhat) + eps);
        }
        const k::KernelTable* tables[] = {&k::scalar_table,
                                          k::avx2_supported() ? &k::avx2_table : nullptr};
        for (const auto* table : tables) {
            if (!table) continue;
            auto p = p0;
            auto m = m0;
            auto v = v0;
            table->adam_update(p.data(), m.data(), v.data(), g.data(), n, lr, b1, b2, eps,
                               corr1, corr2);
            check_close(m, want_m, 1e-15);
            check_close(v, want_v, 1e-15);
            check_close(p, want_p, 1e-14);
        }
    }
}

TEST_CASE("backend dispatch override works") {
    const k::Backend best = k::avx2_supported() ? k::Backend::avx2 : k::Backend::scalar;
    k::autoselect_backend();
    CHECK(k::active_backend() == best);
    k::force_backend(k::Backend::scalar);
    CHECK(k::active_backend() == k::Backend::scalar);
    CHECK(k::active().gemm_nn == k::scalar_table.gemm_nn);
    k::autoselect_backend();
    CHECK(k::active_backend() == best);
}
