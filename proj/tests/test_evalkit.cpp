#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "tabclust/dataio/synth.hpp"
#include "tabclust/errors.hpp"
#include "tabclust/evalkit/accuracy.hpp"
#include "tabclust/evalkit/folds.hpp"
#include "tabclust/evalkit/hungarian.hpp"
#include "tabclust/evalkit/protocol.hpp"
#include "tabclust/evalkit/ranking.hpp"
#include "test_util.hpp"

using namespace tabclust;
using namespace tabclust::eval;
using numkit::DenseMatrix;

namespace {

double brute_force_best(const DenseMatrix& m) {
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = -1e300;
    do {
        best = std::max(best, assignment_total(m, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<std::size_t> random_labels(std::size_t n, std::size_t k, numkit::Rng& rng) {
    std::vector<std::size_t> y(n);
    for (auto& v : y) v = rng.uniform_index(k);
    return y;
}

std::vector<std::optional<AccuracyCell>> row_of(const std::vector<double>& means) {
    std::vector<std::optional<AccuracyCell>> row;
    for (double m : means) row.push_back(AccuracyCell{m, 1.0});
    return row;
}

}  // namespace

TEST_SUITE("evalkit") {
    TEST_CASE("contingency examples") {
        const std::vector<std::size_t> a{0, 1}, b{0, 0, 1, 1}, c{1, 1, 0, 0};
        CHECK(contingency(a, a, 2) == CountMatrix{{1, 0}, {0, 1}});
        CHECK(contingency(b, c, 2) == CountMatrix{{0, 2}, {2, 0}});
        numkit::Rng rng(1);
        const auto yt = random_labels(100, 4, rng), yp = random_labels(100, 4, rng);
        const auto m = contingency(yt, yp, 4);
        std::size_t total = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto hist = static_cast<std::size_t>(std::count(yp.begin(), yp.end(), k));
            CHECK(std::accumulate(m[k].begin(), m[k].end(), std::size_t{0}) == hist);
            total += hist;
        }
        CHECK(total == 100);
        const std::vector<std::size_t> bad{0, 2};
        CHECK_THROWS_AS(contingency(a, bad, 2), InvalidArgument);
        CHECK_THROWS_AS(contingency(a, b, 2), InvalidArgument);
    }

    TEST_CASE("hungarian_match examples") {
        const auto id = DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
        CHECK(hungarian_match(id, true) == std::vector<std::size_t>{0, 1, 2});
        const auto swap = DenseMatrix::from_rows({{0, 2}, {2, 0}});
        const auto p = hungarian_match(swap, true);
        CHECK(p == std::vector<std::size_t>{1, 0});
        CHECK(assignment_total(swap, p) == 4.0);
        CHECK(hungarian_match(swap, false) == std::vector<std::size_t>{0, 1});
        CHECK_THROWS_AS(hungarian_match(DenseMatrix(2, 3), true), DimensionMismatch);
        CHECK(hungarian_match(DenseMatrix(), true).empty());
    }

    TEST_CASE("hungarian_match equals brute force on random 6x6 matrices") {
        numkit::Rng rng(2);
        for (int trial = 0; trial < 200; ++trial) {
            const auto m = testutil::random_matrix(6, 6, rng);
            const auto p = hungarian_match(m, true);
            CHECK(assignment_total(m, p) == doctest::Approx(brute_force_best(m)).epsilon(1e-12));
            DenseMatrix neg(6, 6);
            for (std::size_t i = 0; i < 36; ++i) neg.data()[i] = -m.data()[i];
            CHECK(-assignment_total(neg, hungarian_match(neg, false)) ==
                  doctest::Approx(brute_force_best(m)).epsilon(1e-12));
        }
    }

    TEST_CASE("cluster_accuracy examples") {
        const std::vector<std::size_t> y{0, 0, 1, 1};
        const std::vector<std::size_t> swapped{1, 1, 0, 0};
        CHECK(cluster_accuracy(y, y, 2) == 100.0);
        CHECK(cluster_accuracy(y, swapped, 2) == 100.0);
        const std::vector<std::size_t> t3{0, 0, 1, 1, 2, 2}, p3{0, 1, 1, 2, 2, 2};
        CHECK(cluster_accuracy(t3, p3, 3) == doctest::Approx(66.667).epsilon(1e-5));
        CHECK(cluster_accuracy(t3, p3, 3) == 100.0 * 4.0 / 6.0);
    }

    TEST_CASE("cluster_accuracy is invariant under label permutations") {
        numkit::Rng rng(3);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t k = 2 + rng.uniform_index(4);
            const auto yt = random_labels(40, k, rng), yp = random_labels(40, k, rng);
            std::vector<std::size_t> perm(k);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            rng.shuffle(std::span<std::size_t>(perm));
            auto yt2 = yt, yp2 = yp;
            for (auto& v : yt2) v = perm[v];
            for (auto& v : yp2) v = perm[(v + 1) % k];
            const double base = cluster_accuracy(yt, yp, k);
            CHECK(cluster_accuracy(yt2, yp, k) == base);
            CHECK(cluster_accuracy(yt, yp2, k) == base);
            CHECK(cluster_accuracy(yt, yt, k) == 100.0);
        }
    }

    TEST_CASE("make_folds sizes and determinism") {
        numkit::Rng r1(4), r2(4);
        const auto p10 = make_folds(10, r1);
        for (const auto& f : p10.folds) CHECK(f.size() == 2);
        p10.validate(10);
        const auto p11 = make_folds(11, r1);
        std::vector<std::size_t> sizes;
        for (const auto& f : p11.folds) sizes.push_back(f.size());
        CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
        p11.validate(11);
        const auto again = make_folds(10, r2);
        CHECK(again.folds == p10.folds);
        CHECK_THROWS_AS(make_folds(4, r1), InvalidArgument);
        CHECK(p11.train_indices(0).size() == 8);
    }

    TEST_CASE("stratified folds balance every class") {
        numkit::Rng rng(5);
        std::vector<std::size_t> y;
        for (std::size_t i = 0; i < 53; ++i) y.push_back(i % 3 == 0 ? 0 : (i % 3 == 1 ? 1 : 2));
        const auto plan = make_stratified_folds(y, rng);
        plan.validate(53);
        for (std::size_t k = 0; k < 3; ++k) {
            std::vector<std::size_t> per_fold;
            for (const auto& f : plan.folds) {
                per_fold.push_back(static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [&](std::size_t i) { return y[i] == k; })));
            }
            CHECK(*std::max_element(per_fold.begin(), per_fold.end()) - *std::min_element(per_fold.begin(), per_fold.end()) <= 1);
        }
    }

    TEST_CASE("run_protocol with the k-means baseline on separated blobs") {
        numkit::Rng data_rng(6);
        auto ds = data::synth_blobs(300, 5, 3, 20.0, 1.0, data_rng);
        ds.name = "blobs";
        const std::vector<embed::MethodConfig> grid{embed::MethodConfig{}};
        numkit::Rng r1(7), r2(7);
        const auto res = run_protocol(MethodId::kmeans, ds, grid, r1);
        CHECK(res.complete());
        CHECK(res.mean >= 95.0);
        CHECK(res.fold_accuracies.size() == 5);
        const auto agg = mean_and_std(res.fold_accuracies);
        CHECK(std::abs(agg.mean - res.mean) < 1e-9);
        CHECK(std::abs(agg.std - res.std) < 1e-9);
        for (const auto& f : res.folds) {
            CHECK(f.chosen_candidate == 0);
            CHECK(!f.chosen_gamma);
        }
        const auto res2 = run_protocol(MethodId::kmeans, ds, grid, r2);
        CHECK(res2.fold_accuracies == res.fold_accuracies);

        auto relabelled = ds;
        for (auto& y : relabelled.y) y = (y + 2) % 3;
        numkit::Rng r3(7);
        CHECK(run_protocol(MethodId::kmeans, relabelled, grid, r3).fold_accuracies == res.fold_accuracies);

        numkit::Rng r4(7);
        CHECK(run_protocol(MethodId::gmm, ds, grid, r4).mean >= 95.0);
    }

    TEST_CASE("grid handling and candidate selection") {
        std::vector<embed::MethodConfig> grid(3);
        grid[1].gamma = 1.0;
        CHECK(effective_grid(MethodId::dec, grid).size() == 1);
        CHECK(effective_grid(MethodId::kmeans, grid).size() == 1);
        CHECK(effective_grid(MethodId::idec, grid).size() == 3);
        CHECK_THROWS_AS(effective_grid(MethodId::idec, {}), InvalidArgument);
        CHECK(select_candidate({0.5, 0.9, 0.9}) == std::optional<std::size_t>{1});
        CHECK(select_candidate({std::nullopt, 0.1}) == std::optional<std::size_t>{1});
        CHECK(!select_candidate({std::nullopt}));
        CHECK(parse_method("depict1d") == MethodId::depict1d);
        CHECK(!parse_method("aecm"));
    }

    TEST_CASE("a fold whose candidates all fail is recorded") {
        numkit::Rng data_rng(8);
        auto ds = data::synth_blobs(50, 3, 2, 20.0, 1.0, data_rng);
        for (std::size_t i = 0; i < ds.n(); ++i) ds.x(i, 2) = 1.0;  // constant column breaks GMM
        numkit::Rng rng(1);
        const auto res = run_protocol(MethodId::gmm, ds, {embed::MethodConfig{}}, rng);
        CHECK(!res.complete());
        CHECK(res.folds.size() == 5);
        CHECK(!res.folds[0].ok);
        CHECK(!res.folds[0].error.empty());
    }

    TEST_CASE("rank_methods: breast cancer row") {
        const std::vector<std::string> methods{"GMM", "K-means", "DEC", "IDEC", "AE-CM", "DynAE", "DEPICT", "DKM"};
        const auto t = rank_methods({"Breast"}, methods, {row_of({89.8, 90.2, 68.3, 83.6, 77.7, 92.1, 91.2, 64.2})});
        CHECK(t.ranks[0] == std::vector<std::size_t>{4, 3, 7, 5, 6, 1, 2, 8});
    }

    TEST_CASE("rank_methods: averages use the population std") {
        const std::vector<double> ranks{5, 1, 3, 1, 3, 1, 1};
        const auto agg = mean_and_std(ranks);
        CHECK(agg.mean == doctest::Approx(15.0 / 7.0));
        CHECK(agg.std == doctest::Approx(1.4569).epsilon(1e-4));
    }

    TEST_CASE("rank_methods: ties, single method, missing cells") {
        const std::vector<std::string> three{"a", "b", "c"};
        const auto tie = rank_methods({"d1", "d2"}, three, {row_of({50, 50, 50}), row_of({50, 50, 50})});
        CHECK(tie.ranks[0] == std::vector<std::size_t>{1, 2, 3});
        CHECK(tie.overall_rank == std::vector<std::size_t>{1, 2, 3});

        std::vector<std::optional<AccuracyCell>> by_std{AccuracyCell{37.2, 1.7}, AccuracyCell{37.2, 1.2},
                                                        AccuracyCell{37.2, 0.6}};
        CHECK(rank_methods({"v"}, three, {by_std}).ranks[0] == std::vector<std::size_t>{3, 2, 1});
        CHECK(rank_methods({"v"}, three, {by_std}, TieBreak::registration_order).ranks[0] ==
              std::vector<std::size_t>{1, 2, 3});

        const auto single = rank_methods({"d1", "d2"}, {"only"}, {row_of({10}), row_of({90})});
        CHECK(single.ranks[0][0] == 1);
        CHECK(single.overall_rank[0] == 1);

        std::vector<std::optional<AccuracyCell>> gap{AccuracyCell{1, 0}, std::nullopt, AccuracyCell{2, 0}};
        try {
            rank_methods({"d1"}, three, {gap});
            FAIL("expected an exception");
        } catch (const InvalidArgument& e) {
            CHECK(std::string(e.what()).find("d1/b") != std::string::npos);
        }
    }
}
