#include <doctest.h>

#include <cmath>
#include <fstream>

#include "tabclust/autoenc/autoencoder.hpp"
#include "tabclust/autoenc/checkpoint.hpp"
#include "tabclust/autoenc/pretrain.hpp"
#include "tabclust/autoenc/training.hpp"
#include "tabclust/embedcluster/history.hpp"
#include "tabclust/errors.hpp"
#include "tabclust/numkit/gradcheck.hpp"
#include "test_util.hpp"

using namespace tabclust;
using namespace tabclust::autoenc;
using testutil::random_matrix;

namespace {

void zero_all(numkit::MlpParams& p) {
    for (auto& l : p.layers) {
        l.weight.fill(0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
}

void set_identity(numkit::MlpParams& p) {
    for (auto& l : p.layers) {
        l.weight.fill(0.0);
        for (std::size_t i = 0; i < l.weight.rows(); ++i) l.weight(i, i) = 1.0;
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
}

double recon_grad_error(Autoencoder ae, const DenseMatrix& x) {
    const auto pass = forward_pass(ae, x, true);
    DenseMatrix g(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) g.data()[i] = 2.0 * (pass.reconstruction().data()[i] - x.data()[i]);
    const auto grads = backward_pass(ae, pass, &g, nullptr);
    numkit::GradViews gv;
    collect_grads(ae, grads, ParamScope::all, gv);
    const auto analytic = testutil::flatten(gv);
    numkit::ParamViews pv;
    collect_params(ae, ParamScope::all, pv);
    const auto numeric = numkit::finite_diff_grad(
        [&](std::span<const double> v) {
            testutil::assign(pv, v);
            return recon_loss(x, reconstruct(ae, x));
        },
        testutil::flatten(pv));
    return numkit::max_relative_error(analytic, numeric);
}

}  // namespace

TEST_SUITE("autoenc") {
    TEST_CASE("architecture factories") {
        const auto dec = AutoencoderSpec::dec(30);
        CHECK(dec.encoder_widths == std::vector<std::size_t>{500, 500, 2000});
        CHECK(dec.decoder_widths == std::vector<std::size_t>{2000, 500, 500});
        CHECK(dec.embedding_dim == 10);
        CHECK(AutoencoderSpec::dkm(30, 4).embedding_dim == 4);
        const auto dep = AutoencoderSpec::depict(32);
        CHECK(dep.encoder_widths == std::vector<std::size_t>{50, 50});
        CHECK(dep.flattened_dim() == 64);
        CHECK_THROWS_AS(AutoencoderSpec::depict(10).validate(), DegenerateGeometry);
        numkit::Rng rng(1);
        const auto ae = build_autoencoder(AutoencoderSpec::dec(7), rng);
        CHECK(ae.encoder.out_dim() == 10);
        CHECK(ae.decoder.out_dim() == 7);
        CHECK(ae.encoder.layers.back().activation == numkit::Activation::linear);
        CHECK(ae.encoder.layers.front().activation == numkit::Activation::sigmoid);
        CHECK(ae.decoder.layers.back().activation == numkit::Activation::linear);
    }

    TEST_CASE("encode: zero encoder with a linear embedding gives zeros") {
        numkit::Rng rng(2);
        auto ae = build_autoencoder(AutoencoderSpec::symmetric(4, {6}, 3), rng);
        zero_all(ae.encoder);
        const auto z = encode(ae, random_matrix(5, 4, rng));
        for (double v : z.values()) CHECK(v == 0.0);
    }

    TEST_CASE("encode: single linear identity layer") {
        numkit::Rng rng(3);
        auto ae = build_autoencoder(AutoencoderSpec::symmetric(3, {}, 3), rng);
        set_identity(ae.encoder);
        const auto x = random_matrix(4, 3, rng);
        CHECK(encode(ae, x) == x);
        set_identity(ae.decoder);
        CHECK(reconstruct(ae, x) == x);
        zero_all(ae.decoder);
        const auto xhat = reconstruct(ae, x);
        for (double v : xhat.values()) CHECK(v == 0.0);
        CHECK_THROWS_AS(encode(ae, DenseMatrix(2, 5)), DimensionMismatch);
    }

    TEST_CASE("encode and reconstruct match a hand computation") {
        numkit::Rng rng(4);
        const auto ae = build_autoencoder(AutoencoderSpec::symmetric(2, {3}, 2), rng);
        const std::vector<double> x{0.7, -1.3};
        // layer by layer with scalar arithmetic
        auto dense = [](const numkit::DenseLayer& l, const std::vector<double>& in) {
            std::vector<double> out(l.out_dim());
            for (std::size_t j = 0; j < l.out_dim(); ++j) {
                double s = l.bias[j];
                for (std::size_t i = 0; i < l.in_dim(); ++i) s += in[i] * l.weight(i, j);
                out[j] = l.activation == numkit::Activation::sigmoid ? 1.0 / (1.0 + std::exp(-s)) : s;
            }
            return out;
        };
        auto h = x;
        for (const auto& l : ae.encoder.layers) h = dense(l, h);
        const auto z = encode(ae, DenseMatrix(1, 2, x));
        CHECK(z(0, 0) == doctest::Approx(h[0]).epsilon(1e-14));
        CHECK(z(0, 1) == doctest::Approx(h[1]).epsilon(1e-14));
        for (const auto& l : ae.decoder.layers) h = dense(l, h);
        const auto xh = reconstruct(ae, DenseMatrix(1, 2, x));
        CHECK(xh(0, 0) == doctest::Approx(h[0]).epsilon(1e-14));
        CHECK(xh(0, 1) == doctest::Approx(h[1]).epsilon(1e-14));
    }

    TEST_CASE("recon_loss examples") {
        const auto x = DenseMatrix::from_rows({{1, 2}});
        CHECK(recon_loss(x, x) == 0.0);
        CHECK(recon_loss(x, DenseMatrix(1, 2)) == 5.0);
        const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
        const auto b = DenseMatrix::from_rows({{0.5, 2.5}, {2, 4}});
        const auto b2 = DenseMatrix::from_rows({{0, 3}, {1, 4}});
        CHECK(recon_loss(a, b2) == 4.0 * recon_loss(a, b));
        CHECK(recon_loss_mean(a, b) == recon_loss(a, b) / 2.0);
        CHECK_THROWS_AS(recon_loss(a, x), DimensionMismatch);
    }

    TEST_CASE("reconstruction gradient matches finite differences") {
        numkit::Rng rng(5);
        for (int trial = 0; trial < 5; ++trial) {
            const auto ae = build_autoencoder(AutoencoderSpec::symmetric(5, {7, 4}, 3), rng);
            CHECK(recon_grad_error(ae, random_matrix(6, 5, rng)) < 1e-4);
        }
    }

    TEST_CASE("conv-front reconstruction gradient matches finite differences") {
        numkit::Rng rng(6);
        ConvPlan plan;
        plan.layers = {{2, 3, 2, numkit::Activation::sigmoid}, {3, 2, 1, numkit::Activation::sigmoid}};
        auto spec = AutoencoderSpec::depict(9, plan);
        spec.encoder_widths = {5};
        spec.decoder_widths = {5};
        spec.embedding_dim = 2;
        auto ae = build_autoencoder(spec, rng);
        for (auto* c : {&*ae.conv_encoder, &*ae.conv_decoder}) {
            for (auto& l : c->layers) {
                for (double& b : l.bias) b = 0.1 * rng.normal();
            }
        }
        const auto x = random_matrix(3, 9, rng);
        CHECK(reconstruct(ae, x).cols() == 9);
        CHECK(recon_grad_error(ae, x) < 1e-4);
    }

    TEST_CASE("default DEPICT-1D geometry reconstructs the input width") {
        numkit::Rng rng(7);
        const auto ae = build_autoencoder(AutoencoderSpec::depict(32), rng);
        const auto x = random_matrix(3, 32, rng);
        CHECK(encode(ae, x).cols() == 10);
        CHECK(reconstruct(ae, x).cols() == 32);
        const auto ae33 = build_autoencoder(AutoencoderSpec::depict(33), rng);
        CHECK(reconstruct(ae33, random_matrix(2, 33, rng)).cols() == 33);
    }

    TEST_CASE("identity conv front encodes like the mlp variant") {
        numkit::Rng r1(8), r2(8);
        const auto conv = build_autoencoder(AutoencoderSpec::depict(12, ConvPlan::identity()), r1);
        const auto mlp = build_autoencoder(AutoencoderSpec::depict_mlp(12), r2);
        numkit::Rng rng(9);
        const auto x = random_matrix(4, 12, rng);
        CHECK(encode(conv, x) == encode(mlp, x));
        CHECK(reconstruct(conv, x) == reconstruct(mlp, x));
    }

    TEST_CASE("pretrain: identical rows are learnable") {
        numkit::Rng rng(10);
        DenseMatrix x(32, 4);
        for (std::size_t i = 0; i < 32; ++i) {
            for (std::size_t c = 0; c < 4; ++c) x(i, c) = 0.5 * static_cast<double>(c) - 1.0;
        }
        PretrainOptions o;
        o.epochs = 100;
        const auto r = pretrain(AutoencoderSpec::symmetric(4, {8}, 2), x, o, rng);
        CHECK(r.history.back().recon < r.history.front().recon);
    }

    TEST_CASE("pretrain: linear 2-2 autoencoder reaches near-zero loss") {
        numkit::Rng rng(11);
        const auto x = random_matrix(64, 2, rng);
        PretrainOptions o;
        o.epochs = 3000;
        o.adam.lr = 1e-2;
        const auto r = pretrain(AutoencoderSpec::symmetric(2, {}, 2), x, o, rng);
        CHECK(r.history.back().recon / 64.0 < 1e-3);
    }

    TEST_CASE("pretrain is deterministic and its loss trend settles") {
        numkit::Rng data_rng(12);
        const auto x = random_matrix(100, 6, data_rng);
        PretrainOptions o;
        o.epochs = 120;
        o.batch_size = 32;
        numkit::Rng a(3), b(3);
        const auto r1 = pretrain(AutoencoderSpec::symmetric(6, {16, 8}, 3), x, o, a);
        const auto r2 = pretrain(AutoencoderSpec::symmetric(6, {16, 8}, 3), x, o, b);
        CHECK(r1.autoencoder == r2.autoencoder);
        const auto ma = embed::moving_average(r1.history, 10);
        for (std::size_t t = ma.size() / 2 + 1; t < ma.size(); ++t) CHECK(ma[t] <= ma[t - 1]);
        for (const auto& l : r1.autoencoder.encoder.layers) CHECK(l.weight.all_finite());
    }

    TEST_CASE("pretrain rejects non-finite input") {
        numkit::Rng rng(13);
        auto x = random_matrix(5, 2, rng);
        x(2, 1) = std::nan("");
        CHECK_THROWS_AS(pretrain(AutoencoderSpec::symmetric(2, {3}, 1), x, {}, rng), InvalidArgument);
    }

    TEST_CASE("pretrain cache computes each key once") {
        numkit::Rng rng(14);
        const auto x = random_matrix(20, 3, rng);
        PretrainCache cache;
        PretrainOptions o;
        o.epochs = 3;
        const auto spec = AutoencoderSpec::symmetric(3, {4}, 2);
        const auto a = pretrain_seeded(&cache, spec, x, o, 77);
        const auto b = pretrain_seeded(&cache, spec, x, o, 77);
        const auto c = pretrain_seeded(nullptr, spec, x, o, 77);
        CHECK(a.get() == b.get());
        CHECK(a->autoencoder == c->autoencoder);
        CHECK(cache.size() == 1);
        pretrain_seeded(&cache, spec, x, o, 78);
        CHECK(cache.size() == 2);
    }

    TEST_CASE("divergence guard halves the learning rate, then gives up") {
        std::vector<double> p{1.0};
        const numkit::ParamViews pv{p};
        std::vector<double> g{0.5};
        TrainLoopOptions o;
        o.epochs = 3;
        int calls = 0;
        numkit::Rng rng(1);
        const auto hist = run_minibatch_training(pv, 4, o, rng, nullptr,
                                                 [&](std::span<const std::size_t>, numkit::GradViews& out) {
                                                     ++calls;
                                                     out = {g};
                                                     const double l = calls == 2 ? std::nan("") : p[0] * p[0];
                                                     return EpochLoss{l, 0.0, l};
                                                 });
        CHECK(hist.size() == 3);
        CHECK(std::isfinite(p[0]));

        numkit::Rng rng2(1);
        CHECK_THROWS_AS(run_minibatch_training(pv, 4, o, rng2, nullptr,
                                               [&](std::span<const std::size_t>, numkit::GradViews& out) {
                                                   out = {g};
                                                   const double l = std::nan("");
                                                   return EpochLoss{l, 0.0, l};
                                               }),
                        TrainingDiverged);
    }

    TEST_CASE("checkpoint round trip is bit exact") {
        numkit::Rng rng(15);
        const auto dir = testutil::scratch_dir("ckpt");
        for (const auto& spec : {AutoencoderSpec::symmetric(5, {7}, 2), AutoencoderSpec::depict(32)}) {
            const auto ae = build_autoencoder(spec, rng);
            save_checkpoint(ae, dir / "ae.json");
            CHECK(load_checkpoint(dir / "ae.json") == ae);
        }
        std::ofstream(dir / "bad.json") << R"({"format": "other", "version": 1})";
        CHECK_THROWS_AS(load_checkpoint(dir / "bad.json"), DataError);
        std::filesystem::remove_all(dir);
    }
}
