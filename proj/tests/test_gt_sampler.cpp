#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "rys/fock.hpp"
#include "rys/gt_sampler.hpp"
#include "rys/gue.hpp"
#include "rys/suites.hpp"

using namespace rys;

namespace {

double chi2_pvalue(const std::map<long, long>& counts, const std::map<long, double>& probs, long n) {
    double stat = 0;
    for (const auto& [k, p] : probs) {
        double e = p * n;
        double o = counts.count(k) ? counts.at(k) : 0;
        stat += (o - e) * (o - e) / e;
    }
    return chi_square_pvalue(stat, static_cast<double>(probs.size() - 1));
}

}  // namespace

TEST_SUITE("gt_sampler") {

TEST_CASE("applicability") {
    std::string why;
    CHECK(GtChainSampler::applicable(reference_models()[4].second));   // sampler_two_class
    auto r = RailYardModel::make("LR", "-+", {Rational(1, 2), Rational(1, 2)});
    CHECK_FALSE(GtChainSampler::applicable(r, &why));
    CHECK(why == "model has R columns");
    auto three = RailYardModel::make("LLL", "---", {Rational(1, 2), Rational(1, 3), Rational(1, 4)});
    CHECK_FALSE(GtChainSampler::applicable(three, &why));
    auto notrect = RailYardModel::make("LLLL", "----", {Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4)},
                                       Partition{2, 1});
    CHECK_FALSE(GtChainSampler::applicable(notrect, &why));
    auto one = RailYardModel::make("LLL", "-+-", {Rational(1, 2), Rational(1, 3), Rational(1, 2)}, Partition{3, 1});
    CHECK(GtChainSampler::applicable(one));
    auto right = RailYardModel::make("LL", "+-", {Rational(1, 2), Rational(1, 2)}, Partition(), Partition{1});
    CHECK_FALSE(GtChainSampler::applicable(right, &why));
    CHECK_THROWS_AS(GtChainSampler{r}, std::invalid_argument);
}

TEST_CASE("truncated geometric") {
    std::mt19937_64 rng(4);
    const long n = 40000;
    for (double q : {0.3, 0.7, 1.0, 1.6}) {
        INFO(q);
        std::map<long, long> c;
        for (long i = 0; i < n; ++i) {
            long v = truncated_geometric(2, 6, q, rng);
            REQUIRE(v >= 2);
            REQUIRE(v <= 6);
            ++c[v];
        }
        std::map<long, double> p;
        double z = 0;
        for (long v = 2; v <= 6; ++v) z += std::pow(q, v - 2);
        for (long v = 2; v <= 6; ++v) p[v] = std::pow(q, v - 2) / z;
        CHECK(chi2_pvalue(c, p, n) > 1e-4);
    }
    std::map<long, long> c;
    for (long i = 0; i < n; ++i) ++c[std::min<long>(truncated_geometric(0, -1, 0.5, rng), 8)];
    std::map<long, double> p;
    for (long v = 0; v < 8; ++v) p[v] = std::pow(0.5, v + 1);
    p[8] = std::pow(0.5, 8);
    CHECK(chi2_pvalue(c, p, n) > 1e-4);
    CHECK(truncated_geometric(3, 3, 0.5, rng) == 3);
    CHECK_THROWS_AS(truncated_geometric(0, -1, 1.5, rng), std::domain_error);
}

TEST_CASE("one Gelfand-Tsetlin level is uniform over patterns") {
    // top row (2,1,0) in shifted coordinates (4,2,0); next level y with weight prod(y1 - y2)
    std::mt19937_64 rng(8);
    const long n = 40000;
    std::map<long, long> c;
    for (long i = 0; i < n; ++i) {
        auto y = GtChainSampler::corners_level({4, 2, 0}, rng);
        REQUIRE(y.size() == 2);
        REQUIRE(y[0] >= 2);
        REQUIRE(y[0] < 4);
        REQUIRE(y[1] >= 0);
        REQUIRE(y[1] < 2);
        ++c[y[0] * 10 + y[1]];
    }
    std::map<long, double> p{{20, 2.0 / 8}, {21, 1.0 / 8}, {30, 3.0 / 8}, {31, 2.0 / 8}};
    CHECK(chi2_pvalue(c, p, n) > 1e-4);
}

TEST_CASE("structured sampler matches the exact boundary laws") {
    // two classes, rectangular boundary, + columns in between
    auto m = RailYardModel::make("LLLLLLLL", "---++---",
                                 {Rational(1, 2), Rational(1, 2), Rational(1, 8), Rational(1, 2), Rational(1, 3),
                                  Rational(1, 8), Rational(1, 2), Rational(1, 8)},
                                 Partition{2, 2, 2});
    REQUIRE(GtChainSampler::applicable(m));
    CoveringSampler sampler(m, TruncationPolicy::defaults(m));
    CHECK(sampler.structured());
    const long n = 40000;
    auto samples = sample_many(sampler, n, 3);
    for (const auto& s : samples) REQUIRE(consistent(s, m));
    for (int t : {3, 4, 6, 7}) {
        INFO(t);
        auto exact = boundary_schur_process(m, t, TruncationPolicy::defaults(m));
        std::map<Partition, long> cnt;
        for (const auto& s : samples) ++cnt[s.at(t)];
        double stat = 0, rest_p = 1, rest_o = n;
        int bins = 0;
        for (const auto& [p, q] : exact.measure.entries) {
            double e = to_double(q) * n;
            if (e < 5) continue;
            double o = cnt.count(p) ? cnt[p] : 0;
            stat += (o - e) * (o - e) / e;
            rest_p -= to_double(q);
            rest_o -= o;
            ++bins;
        }
        if (rest_p * n >= 5) {
            stat += (rest_o - rest_p * n) * (rest_o - rest_p * n) / (rest_p * n);
            ++bins;
        }
        CHECK(bins > 3);
        CHECK(chi_square_pvalue(stat, bins - 1) > 1e-4);
    }
}

}
