#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "evagan/kernels.hpp"
#include "evagan/network.hpp"

using namespace evagan;

namespace {

// Scalar objective L = sum_ij coeff_ij * out_ij for a random fixed coeff
// matrix; its output-gradient is just coeff, which exercises every path of
// the chain rule without involving a loss function.
Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (auto& v : m.vec()) v = rng.uniform(lo, hi);
    return m;
}

double weighted_sum(const Matrix& out, const Matrix& coeff) {
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out.vec()[i] * coeff.vec()[i];
    return s;
}

struct GradCheck {
    double max_rel_err = 0.0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    std::size_t checked = 0;
};

// Central finite differences over every parameter and every input entry.
template <typename ForwardFn>
GradCheck check_gradients(Network& net, const Matrix& input, ForwardFn run, Rng& rng) {
    const Matrix probe = run(net, input, Mode::train);
    const Matrix coeff = random_matrix(probe.rows(), probe.cols(), rng);

    net.zero_grad();
    run(net, input, Mode::train);
    const Matrix dinput = net.backward(coeff);

    // Small enough that batchnorm-centred pre-activations rarely straddle a
    // rectifier kink within the probe interval, large enough to stay clear of
    // rounding noise in the difference quotient.
    const double h = 1e-6;
    GradCheck result;
    auto rel = [&](double analytic, double numeric) {
        // The difference quotient bottoms out near 1e-10 from cancellation in
        // L(w+h) - L(w-h); below that, agreement in absolute terms is all a
        // finite-difference probe can certify.
        if (std::abs(analytic - numeric) <= 1e-8) {
            ++result.checked;
            return;
        }
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        const double err = std::abs(analytic - numeric) / denom;
        if (err > result.max_rel_err) {
            result.max_rel_err = err;
            result.worst_analytic = analytic;
            result.worst_numeric = numeric;
        }
        ++result.checked;
    };

    for (auto& p : net.params()) {
        for (std::size_t i = 0; i < p.value->size(); ++i) {
            const double orig = p.value->vec()[i];
            p.value->vec()[i] = orig + h;
            const double lp = weighted_sum(run(net, input, Mode::train), coeff);
            p.value->vec()[i] = orig - h;
            const double lm = weighted_sum(run(net, input, Mode::train), coeff);
            p.value->vec()[i] = orig;
            rel(p.grad->vec()[i], (lp - lm) / (2.0 * h));
        }
    }
    Matrix x = input;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x.vec()[i];
        x.vec()[i] = orig + h;
        const double lp = weighted_sum(run(net, x, Mode::train), coeff);
        x.vec()[i] = orig - h;
        const double lm = weighted_sum(run(net, x, Mode::train), coeff);
        x.vec()[i] = orig;
        rel(dinput.vec()[i], (lp - lm) / (2.0 * h));
    }
    return result;
}

Matrix plain_forward(Network& net, const Matrix& x, Mode m) { return net.forward(x, m); }

} // namespace

TEST_CASE("dense layers of every activation pass finite-difference checks") {
    kernels::force_backend(kernels::Backend::scalar);
    Rng rng(2024);
    const Activation acts[] = {Activation::identity, Activation::relu, Activation::leaky_relu,
                               Activation::sigmoid, Activation::tanh};
    std::size_t configs = 0;
    for (Activation act : acts) {
        for (auto [n_in, n_out, batch] :
             {std::tuple<std::size_t, std::size_t, std::size_t>{3, 5, 4},
              {7, 2, 6},
              {1, 9, 3}}) {
            Network net;
            net.dense(n_in, n_out, act);
            net.init(rng);
            // Keep inputs away from the relu kink so the difference quotient
            // is valid.
            const Matrix x = random_matrix(batch, n_in, rng, 0.1, 1.5);
            const auto r = check_gradients(net, x, plain_forward, rng);
            CHECK(r.max_rel_err <= 1e-4);
            ++configs;
        }
    }
    CHECK(configs == 15);
}

TEST_CASE("two-layer stacks with batchnorm pass finite-difference checks") {
    kernels::force_backend(kernels::Backend::scalar);
    Rng rng(99);
    std::size_t configs = 0;
    for (auto [w0, w1, batch] : {std::tuple<std::size_t, std::size_t, std::size_t>{4, 6, 8},
                                 {6, 3, 5},
                                 {2, 2, 4},
                                 {10, 4, 16}}) {
        for (Activation act : {Activation::relu, Activation::leaky_relu}) {
            Network net;
            net.dense(w0, w1, act);
            // Train-mode batchnorm normalizes with batch stats only, so the
            // running-stat drift across repeated forwards does not disturb
            // the difference quotients.
            net.batchnorm(w1);
            net.dense(w1, 1, Activation::sigmoid);
            net.init(rng);
            const Matrix x = random_matrix(batch, w0, rng, 0.05, 1.0);
            const auto r = check_gradients(net, x, plain_forward, rng);
            CAPTURE(r.worst_analytic);
            CAPTURE(r.worst_numeric);
            CHECK(r.max_rel_err <= 1e-4);
            ++configs;
        }
    }
    CHECK(configs == 8);
}

TEST_CASE("batchnorm train-mode forward matches a hand computation") {
    BatchNormLayer bn(2, 0.99);
    Matrix x(2, 2, {1.0, 10.0, 3.0, 30.0});
    const Matrix y = bn.forward(x, Mode::train);
    // mean (2,20), biased var (1,100) -> xhat = +/- 1/sqrt(1+eps)
    CHECK(y(0, 0) == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(y(1, 0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(y(0, 1) == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(bn.running_mean()(0, 0) == doctest::Approx(0.99 * 0.0 + 0.01 * 2.0));
    CHECK(bn.running_var()(0, 1) == doctest::Approx(0.99 * 1.0 + 0.01 * 100.0));
}

TEST_CASE("batchnorm infer mode uses running stats and single rows work") {
    BatchNormLayer bn(1, 0.5);
    Matrix batch(4, 1, {1.0, 2.0, 3.0, 4.0});
    bn.forward(batch, Mode::train);
    Matrix one(1, 1, {2.5});
    const Matrix y = bn.forward(one, Mode::infer);
    const double rm = bn.running_mean()(0, 0);
    const double rv = bn.running_var()(0, 0);
    CHECK(y(0, 0) == doctest::Approx((2.5 - rm) / std::sqrt(rv + bn.epsilon())));
    CHECK_THROWS_AS(bn.forward(one, Mode::train), std::invalid_argument);
}

TEST_CASE("label embedding routes gradients to looked-up rows only") {
    Rng rng(5);
    LabelEmbedding emb(2, 3);
    emb.init(rng);
    const std::vector<int> labels{0, 0, 1};
    const Matrix out = emb.lookup(labels);
    CHECK(out.rows() == 3);
    CHECK(out(0, 1) == emb.table()(0, 1));
    CHECK(out(2, 2) == emb.table()(1, 2));

    emb.zero_grad();
    Matrix up(3, 3, {1, 1, 1, 2, 2, 2, 5, 5, 5});
    emb.accumulate_grad(labels, up);
    const auto params = emb.params();
    REQUIRE(params.size() == 1);
    CHECK((*params[0].grad)(0, 0) == 3.0);  // rows 0 and 1 of upstream
    CHECK((*params[0].grad)(1, 0) == 5.0);

    CHECK_THROWS_AS(emb.lookup({0, 2}), std::invalid_argument);
}

TEST_CASE("embedding finite differences through an elementwise product") {
    kernels::force_backend(kernels::Backend::scalar);
    // Mirrors the generator input path: x = noise (*) embed(label), then a
    // dense stack; checks the gradient landing in the embedding table.
    Rng rng(17);
    const std::size_t latent = 4, batch = 5;
    LabelEmbedding emb(1, latent);
    emb.init(rng);
    Network net;
    net.dense(latent, 3, Activation::tanh).dense(3, 2, Activation::sigmoid);
    net.init(rng);
    Matrix noise(batch, latent);
    for (auto& v : noise.vec()) v = rng.normal();
    const std::vector<int> labels(batch, 0);

    auto run = [&](double* slot, double h) {
        const double orig = *slot;
        *slot = orig + h;
        Matrix x(batch, latent);
        const Matrix e = emb.lookup(labels);
        for (std::size_t i = 0; i < x.size(); ++i) x.vec()[i] = noise.vec()[i] * e.vec()[i];
        const Matrix out = net.forward(x, Mode::train);
        *slot = orig;
        double s = 0.0;
        for (double v : out.vec()) s += v;
        return s;
    };

    // Analytic pass.
    Matrix x(batch, latent);
    const Matrix e = emb.lookup(labels);
    for (std::size_t i = 0; i < x.size(); ++i) x.vec()[i] = noise.vec()[i] * e.vec()[i];
    const Matrix out = net.forward(x, Mode::train);
    net.zero_grad();
    emb.zero_grad();
    const Matrix dx = net.backward(Matrix(out.rows(), out.cols(), 1.0));
    Matrix demb(batch, latent);
    for (std::size_t i = 0; i < dx.size(); ++i) demb.vec()[i] = dx.vec()[i] * noise.vec()[i];
    emb.accumulate_grad(labels, demb);

    const double h = 1e-5;
    auto& table = emb.table();
    const auto grads = emb.params();
    for (std::size_t j = 0; j < latent; ++j) {
        double* slot = &table(0, j);
        const double numeric = (run(slot, h) - run(slot, -h)) / (2.0 * h);
        const double analytic = (*grads[0].grad)(0, j);
        const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
        CHECK(std::abs(numeric - analytic) / denom <= 1e-4);
    }
}
