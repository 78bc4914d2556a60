#include <doctest.h>

#include <cmath>

#include "tabclust/errors.hpp"
#include "tabclust/numkit/adam.hpp"
#include "tabclust/numkit/conv1d.hpp"
#include "tabclust/numkit/format.hpp"
#include "tabclust/numkit/gradcheck.hpp"
#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/mlp.hpp"
#include "tabclust/numkit/rng.hpp"
#include "test_util.hpp"

using namespace tabclust;
using namespace tabclust::numkit;
using testutil::random_matrix;

namespace {

DenseLayer layer(DenseMatrix w, Activation a) {
    DenseLayer l;
    l.bias.assign(w.cols(), 0.0);
    l.weight = std::move(w);
    l.activation = a;
    return l;
}

// sum of squared differences between the net output and a fixed target
double sq_loss(const DenseMatrix& out, const DenseMatrix& target) {
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = out.data()[i] - target.data()[i];
        s += d * d;
    }
    return s;
}

DenseMatrix sq_loss_grad(const DenseMatrix& out, const DenseMatrix& target) {
    DenseMatrix g(out.rows(), out.cols());
    for (std::size_t i = 0; i < out.size(); ++i) g.data()[i] = 2.0 * (out.data()[i] - target.data()[i]);
    return g;
}

double mlp_grad_error(MlpParams params, const DenseMatrix& x, const DenseMatrix& target) {
    const auto tape = mlp_forward(params, x);
    auto grads = mlp_backward(params, tape, sq_loss_grad(tape.output(), target), false);
    std::vector<std::span<const double>> gv;
    append_views(std::as_const(grads.params), gv);
    const auto analytic = testutil::flatten(gv);

    std::vector<std::span<double>> pv;
    append_views(params, pv);
    const auto p0 = testutil::flatten(pv);
    const auto numeric = finite_diff_grad(
        [&](std::span<const double> p) {
            testutil::assign(pv, p);
            return sq_loss(mlp_forward(params, x).output(), target);
        },
        p0);
    return max_relative_error(analytic, numeric);
}

}  // namespace

TEST_SUITE("numkit") {
    TEST_CASE("matmul variants agree with a naive triple loop") {
        Rng rng(5);
        const auto a = random_matrix(7, 5, rng);
        const auto b = random_matrix(5, 3, rng);
        const auto c = matmul(a, b);
        for (std::size_t i = 0; i < 7; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 5; ++k) s += a(i, k) * b(k, j);
                CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-12));
            }
        }
        const auto at = random_matrix(5, 7, rng);
        const auto c2 = matmul_at_b(at, random_matrix(5, 2, rng));
        CHECK(c2.rows() == 7);
        CHECK(c2.cols() == 2);
        const auto bt = random_matrix(4, 5, rng);
        const auto c3 = matmul_a_bt(a, bt);
        double s = 0.0;
        for (std::size_t k = 0; k < 5; ++k) s += a(2, k) * bt(3, k);
        CHECK(c3(2, 3) == doctest::Approx(s).epsilon(1e-12));
        CHECK_THROWS_AS(matmul(a, a), DimensionMismatch);
    }

    TEST_CASE("squared distances and padding") {
        const auto a = DenseMatrix::from_rows({{0, 0}, {1, 2}});
        const auto b = DenseMatrix::from_rows({{3, 4}});
        const auto d = squared_distances(a, b);
        CHECK(d(0, 0) == 25.0);
        CHECK(d(1, 0) == 8.0);
        const auto p = pad_columns(a, 4);
        CHECK(p.cols() == 4);
        CHECK(p(1, 1) == 2.0);
        CHECK(p(1, 3) == 0.0);
    }

    TEST_CASE("xoshiro256** stream matches the reference algorithm") {
        Rng r0(0);
        CHECK(r0.next_u64() == 0x99ec5f36cb75f2b4ULL);
        CHECK(r0.next_u64() == 0xbf6e1f784956452aULL);
        CHECK(r0.next_u64() == 0x1a5f849d4933e6e0ULL);
        Rng r42(42);
        CHECK(r42.next_u64() == 0x15780b2e0c2ec716ULL);
        CHECK(r42.next_u64() == 0x6104d9866d113a7eULL);
        CHECK(r42.next_u64() == 0xae17533239e499a1ULL);
    }

    TEST_CASE("same seed gives the same 10000 draws") {
        Rng a(123456789), b(123456789), c(123456790);
        bool same = true, differs = false;
        for (int i = 0; i < 10000; ++i) {
            const auto x = a.next_u64();
            same = same && x == b.next_u64();
            differs = differs || x != c.next_u64();
        }
        CHECK(same);
        CHECK(differs);
    }

    TEST_CASE("uniform, bounded and normal draws") {
        Rng rng(9);
        double sum = 0.0, sq = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            const double z = rng.normal();
            sum += z;
            sq += z * z;
            REQUIRE(rng.uniform_index(7) < 7);
        }
        CHECK(std::abs(sum / n) < 0.05);
        CHECK(std::abs(sq / n - 1.0) < 0.05);
        std::vector<int> v{0, 1, 2, 3, 4, 5};
        rng.shuffle(std::span<int>(v));
        std::vector<int> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});
        CHECK(Rng::derive(1, 0) != Rng::derive(1, 1));
        CHECK(Rng::derive(1, 0) == Rng::derive(1, 0));
    }

    TEST_CASE("mlp_forward: zero sigmoid layer gives 0.5") {
        const auto out = mlp_forward(MlpParams{{layer(DenseMatrix(3, 2), Activation::sigmoid)}},
                                     DenseMatrix::from_rows({{1, -2, 3}, {0.5, 7, -1}}))
                             .output();
        for (double v : out.values()) CHECK(v == 0.5);
    }

    TEST_CASE("mlp_forward: linear identity layer") {
        const auto x = DenseMatrix::from_rows({{1, 2}, {-3, 4}});
        const auto out = mlp_forward(MlpParams{{layer(DenseMatrix::from_rows({{1, 0}, {0, 1}}), Activation::linear)}}, x);
        CHECK(out.output() == x);
    }

    TEST_CASE("mlp_forward: sigmoid of [1, 2]") {
        const auto out = mlp_forward(MlpParams{{layer(DenseMatrix::from_rows({{1, 0}, {0, 1}}), Activation::sigmoid)}},
                                     DenseMatrix::from_rows({{1, 2}}))
                             .output();
        CHECK(out(0, 0) == doctest::Approx(0.7310586).epsilon(1e-7));
        CHECK(out(0, 1) == doctest::Approx(0.8807971).epsilon(1e-7));
        CHECK(out(0, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
    }

    TEST_CASE("mlp_forward rejects a wrong input width") {
        const MlpParams p{{layer(DenseMatrix(3, 2), Activation::linear)}};
        CHECK_THROWS_AS(mlp_forward(p, DenseMatrix(2, 4)), DimensionMismatch);
    }

    TEST_CASE("mlp_backward: zero upstream gives zero gradients") {
        Rng rng(1);
        const std::vector<std::size_t> w{4, 6, 3};
        const std::vector<Activation> act{Activation::sigmoid, Activation::linear};
        const auto p = make_mlp(w, act, rng);
        const auto x = random_matrix(5, 4, rng);
        const auto tape = mlp_forward(p, x);
        const auto g = mlp_backward(p, tape, DenseMatrix(5, 3));
        for (const auto& l : g.params.layers) {
            for (double v : l.weight.values()) CHECK(v == 0.0);
            for (double v : l.bias) CHECK(v == 0.0);
        }
        for (double v : g.input_grad.values()) CHECK(v == 0.0);
    }

    TEST_CASE("mlp_backward: sum of a linear layer's outputs") {
        Rng rng(2);
        const std::vector<std::size_t> w{3, 2};
        const std::vector<Activation> act{Activation::linear};
        const auto p = make_mlp(w, act, rng);
        const auto x = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
        const auto g = mlp_backward(p, mlp_forward(p, x), DenseMatrix(2, 2, 1.0));
        const std::vector<double> colsum{5, 7, 9};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 2; ++j) CHECK(g.params.layers[0].weight(i, j) == colsum[i]);
        }
        CHECK(g.params.layers[0].bias == std::vector<double>{2.0, 2.0});
    }

    TEST_CASE("mlp_backward mismatched upstream throws") {
        Rng rng(2);
        const std::vector<std::size_t> w{3, 2};
        const std::vector<Activation> act{Activation::linear};
        const auto p = make_mlp(w, act, rng);
        const auto x = DenseMatrix(2, 3, 1.0);
        CHECK_THROWS_AS(mlp_backward(p, mlp_forward(p, x), DenseMatrix(2, 3)), DimensionMismatch);
    }

    TEST_CASE("mlp_backward: 8-8-8-4 network matches finite differences") {
        Rng rng(3);
        const std::vector<std::size_t> w{8, 8, 8, 4};
        const std::vector<Activation> act{Activation::sigmoid, Activation::sigmoid, Activation::linear};
        const auto p = make_mlp(w, act, rng);
        const auto x = random_matrix(6, 8, rng);
        const auto t = random_matrix(6, 4, rng);
        CHECK(mlp_grad_error(p, x, t) < 1e-4);
    }

    TEST_CASE("mlp input gradient matches finite differences") {
        Rng rng(4);
        const std::vector<std::size_t> w{5, 7, 3};
        const std::vector<Activation> act{Activation::sigmoid, Activation::linear};
        const auto p = make_mlp(w, act, rng);
        const auto x = random_matrix(4, 5, rng);
        const auto t = random_matrix(4, 3, rng);
        const auto tape = mlp_forward(p, x);
        const auto g = mlp_backward(p, tape, sq_loss_grad(tape.output(), t));
        const auto numeric = finite_diff_grad(
            [&](std::span<const double> v) {
                DenseMatrix xx(4, 5, std::vector<double>(v.begin(), v.end()));
                return sq_loss(mlp_forward(p, xx).output(), t);
            },
            x.values());
        CHECK(max_relative_error(g.input_grad.values(), numeric) < 1e-4);
    }

    TEST_CASE("conv1d_forward hand examples") {
        Conv1dLayer l;
        l.kernel = {1.0};
        l.bias = {0.0};
        const auto x = DenseMatrix::from_rows({{1, 2, 3, 4}});
        CHECK(conv1d_forward(Conv1dParams{{l}}, x).output() == x);

        l.kernel_width = 2;
        l.kernel = {1.0, 1.0};
        CHECK(conv1d_forward(Conv1dParams{{l}}, x).output() == DenseMatrix::from_rows({{3, 5, 7}}));

        l.kernel = {1.0, 0.0};
        l.stride = 2;
        CHECK(conv1d_forward(Conv1dParams{{l}}, x).output() == DenseMatrix::from_rows({{1, 3}}));
    }

    TEST_CASE("conv1d output length formula and degenerate geometry") {
        Rng rng(1);
        const auto l = make_conv_layer(1, 2, 5, 2, Activation::sigmoid, rng);
        CHECK(l.output_length(32) == 14);
        CHECK(l.output_length(5) == 1);
        CHECK_THROWS_AS(l.output_length(4), DegenerateGeometry);
        CHECK_THROWS_AS(conv1d_forward(Conv1dParams{{l}}, DenseMatrix(1, 3)), DegenerateGeometry);
    }

    TEST_CASE("conv1d stack gradients match finite differences") {
        Rng rng(11);
        Conv1dParams p;
        p.layers.push_back(make_conv_layer(1, 2, 3, 2, Activation::sigmoid, rng));
        p.layers.push_back(make_conv_layer(2, 3, 2, 1, Activation::linear, rng));
        auto t1 = make_conv_layer(3, 2, 2, 1, Activation::sigmoid, rng);
        t1.transposed = true;
        p.layers.push_back(t1);
        for (auto& l : p.layers) {
            for (double& b : l.bias) b = rng.normal() * 0.1;
        }
        const auto x = random_matrix(3, 9, rng);
        const auto tape = conv1d_forward(p, x);
        const auto target = random_matrix(tape.output().rows(), tape.output().cols(), rng);
        const auto g = conv1d_backward(p, tape, sq_loss_grad(tape.output(), target));
        std::vector<std::span<const double>> gv;
        append_views(std::as_const(g.params), gv);
        const auto analytic = testutil::flatten(gv);
        auto q = p;
        std::vector<std::span<double>> pv;
        append_views(q, pv);
        const auto numeric = finite_diff_grad(
            [&](std::span<const double> v) {
                testutil::assign(pv, v);
                return sq_loss(conv1d_forward(q, x).output(), target);
            },
            testutil::flatten(pv));
        CHECK(max_relative_error(analytic, numeric) < 1e-4);

        const auto numeric_x = finite_diff_grad(
            [&](std::span<const double> v) {
                DenseMatrix xx(3, 9, std::vector<double>(v.begin(), v.end()));
                return sq_loss(conv1d_forward(p, xx).output(), target);
            },
            x.values());
        CHECK(max_relative_error(g.input_grad.values(), numeric_x) < 1e-4);
    }

    TEST_CASE("adam: zero gradient leaves parameters unchanged") {
        std::vector<double> p{1.0, -2.0};
        const std::vector<double> g{0.0, 0.0};
        OptimizerState st;
        const std::vector<std::span<double>> pv{p};
        const std::vector<std::span<const double>> gv{g};
        adam_step(pv, gv, st, {});
        CHECK(p == std::vector<double>{1.0, -2.0});
        CHECK(st.step_count == 1);
    }

    TEST_CASE("adam: first step moves by lr * sign(g)") {
        std::vector<double> p{1.0, 1.0, 1.0};
        const std::vector<double> g{0.3, -5.0, 1e-3};
        OptimizerState st;
        AdamConfig cfg;
        const std::vector<std::span<double>> pv{p};
        const std::vector<std::span<const double>> gv{g};
        adam_step(pv, gv, st, cfg);
        for (std::size_t i = 0; i < 3; ++i) {
            const double expected = 1.0 - cfg.lr * std::abs(g[i]) / (std::abs(g[i]) + cfg.eps) * (g[i] > 0 ? 1 : -1);
            CHECK(p[i] == doctest::Approx(expected).epsilon(1e-14));
            CHECK(std::abs(std::abs(p[i] - 1.0) - cfg.lr) < 1e-7);
        }
    }

    TEST_CASE("adam: constant gradient moves monotonically") {
        std::vector<double> p{0.0};
        const std::vector<double> g{2.0};
        OptimizerState st;
        const std::vector<std::span<double>> pv{p};
        const std::vector<std::span<const double>> gv{g};
        adam_step(pv, gv, st, {});
        const double after1 = p[0];
        adam_step(pv, gv, st, {});
        CHECK(after1 < 0.0);
        CHECK(p[0] < after1);
        CHECK(st.step_count == 2);
    }

    TEST_CASE("finite_diff_grad examples") {
        const std::vector<double> p{3.0, -1.0, 0.5};
        for (double v : finite_diff_grad([](std::span<const double>) { return 4.2; }, p)) CHECK(v == 0.0);
        const std::vector<double> s{3.0};
        const auto d = finite_diff_grad([](std::span<const double> q) { return q[0] * q[0]; }, s, 1e-5);
        CHECK(std::abs(d[0] - 6.0) < 1e-6);
        for (double v : finite_diff_grad(
                 [](std::span<const double> q) {
                     double t = 0.0;
                     for (double x : q) t += x;
                     return t;
                 },
                 p)) {
            CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    TEST_CASE("number formatting") {
        CHECK(format_fixed1(90.157) == "90.2");
        CHECK(format_fixed1(4.25) == "4.3");
        CHECK(format_fixed1(2.142857) == "2.1");
        CHECK(format_fixed1(0.0) == "0.0");
        CHECK(format_double(0.1) == "0.1");
        CHECK(format_double(100.0) == "100");
    }
}
