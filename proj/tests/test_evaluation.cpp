#include <doctest.h>

#include <algorithm>
#include <random>

#include "adt/evaluation.hpp"
#include "oracles.hpp"

using namespace adt;

TEST_CASE("metric special cases") {
    const auto perfect = metrics({1, 0, 0, 0});
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    const auto empty = metrics({0, 5, 0, 0});
    CHECK(empty.precision == 1.0);
    CHECK(empty.recall == 1.0);
    CHECK(empty.f1 == 1.0);
    const auto none = metrics({0, 0, 3, 0});
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);
    CHECK(metrics({0, 0, 0, 2}).f1 == 0.0);
}

TEST_CASE("f1 is the harmonic mean outside the special cases") {
    for (std::size_t tp = 1; tp < 6; ++tp) {
        for (std::size_t fp = 0; fp < 6; ++fp) {
            for (std::size_t fn = 0; fn < 6; ++fn) {
                const auto m = metrics({tp, 3, fp, fn});
                const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
                const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
                CHECK(m.precision == p);
                CHECK(m.recall == r);
                CHECK(m.f1 == 2.0 * p * r / (p + r));
            }
        }
    }
}

TEST_CASE("evaluate run examples") {
    CHECK(evaluate_run(std::vector<Label>{0, 1, 0, 1}, std::vector<Label>{0, 1, 0, 1}).metrics.f1 == 1.0);
    const auto missed = evaluate_run(std::vector<Label>{0, 0, 0}, std::vector<Label>{0, 1, 0});
    CHECK(missed.counts.tp == 0);
    CHECK(missed.counts.fn == 1);
    CHECK(missed.metrics.f1 == 0.0);
    const auto r = evaluate_run(std::vector<Label>{1, 1, 0}, std::vector<Label>{1, 0, 0});
    CHECK(r.counts == ConfusionCounts{1, 1, 1, 0});
    CHECK(r.metrics.precision == 0.5);
    CHECK(r.metrics.recall == 1.0);
    CHECK(r.metrics.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(evaluate_run(std::vector<Label>{1}, std::vector<Label>{1, 0}), std::invalid_argument);
}

TEST_CASE("evaluate run is invariant to a common permutation") {
    std::mt19937_64 rng(4);
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<Label, Label>> pairs(40);
        for (auto& [p, t] : pairs) {
            p = coin(rng);
            t = coin(rng);
        }
        auto split = [](const auto& v) {
            std::vector<Label> a, b;
            for (const auto& [p, t] : v) {
                a.push_back(p);
                b.push_back(t);
            }
            return std::pair{a, b};
        };
        const auto [p1, t1] = split(pairs);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        const auto [p2, t2] = split(pairs);
        CHECK(evaluate_run(p1, t1).counts == evaluate_run(p2, t2).counts);
    }
}

TEST_CASE("subset robustness") {
    const std::vector<Label> ones(100, 1);
    const auto perfect = subset_robustness(ones, ones);
    CHECK(perfect.subsets.size() == 10);
    CHECK(perfect.mean.f1 == 1.0);
    CHECK(perfect.stddev.f1 == 0.0);

    const std::vector<Label> zeros(25, 0);
    const auto split = subset_robustness(zeros, zeros);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(split.subsets[i].end - split.subsets[i].begin == 2);
    }
    CHECK(split.subsets[9].end - split.subsets[9].begin == 7);

    std::vector<Label> truth(100, 1), pred(100, 1);
    std::fill(truth.begin(), truth.begin() + 10, 0);
    std::fill(pred.begin(), pred.begin() + 10, 0);
    pred[50] = 0;
    const auto mixed = subset_robustness(pred, truth);
    CHECK(mixed.subsets[0].metrics.f1 == 1.0);
    CHECK(mixed.subsets[0].counts.tn == 10);

    CHECK_THROWS_AS(subset_robustness(std::vector<Label>(5, 0), std::vector<Label>(5, 0)),
                    std::invalid_argument);
}

TEST_CASE("subsets tile the sequence") {
    for (std::size_t n = 10; n < 60; n += 7) {
        const std::vector<Label> v(n, 0);
        const auto rep = subset_robustness(v, v);
        CHECK(rep.subsets.front().begin == 0);
        CHECK(rep.subsets.back().end == n);
        for (std::size_t i = 1; i < rep.subsets.size(); ++i) {
            CHECK(rep.subsets[i].begin == rep.subsets[i - 1].end);
        }
    }
}

TEST_CASE("population standard deviation") {
    std::vector<Label> truth(20, 1), pred(20, 1);
    // Subsets of two: make subset 0 score F1 = 0, the rest 1.
    pred[0] = pred[1] = 0;
    const auto rep = subset_robustness(pred, truth);
    CHECK(rep.mean.f1 == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(rep.stddev.f1 == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("wilcoxon examples") {
    const std::vector<double> a{0.1, 0.2, 0.3, 0.4, 0.5};
    CHECK_THROWS_AS(wilcoxon_two_tailed(a, a), std::invalid_argument);

    std::vector<double> x(10), y(10, 0.0);
    for (int i = 0; i < 10; ++i) {
        x[i] = 0.1 * (i + 1);
    }
    const auto r = wilcoxon_two_tailed(x, y);
    CHECK(r.w_minus == 0.0);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 2.0 / 1024.0);

    const auto tied = wilcoxon_two_tailed(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0});
    CHECK(tied.p_value == 1.0);
    CHECK(tied.n == 2);
}

TEST_CASE("wilcoxon p-values equal exhaustive enumeration") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> grid(0, 6); // coarse values produce ties
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 10;
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = 0.1 * grid(rng);
            b[i] = 0.1 * grid(rng);
        }
        if (a == b) {
            continue;
        }
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            any = any || a[i] != b[i];
        }
        if (!any) {
            continue;
        }
        CHECK(wilcoxon_two_tailed(a, b).p_value == oracle::wilcoxon_enumerated_p(a, b));
    }
}
