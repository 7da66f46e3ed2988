#include "doctest.h"

#include <map>
#include <random>

#include "rys/fock.hpp"
#include "rys/railyard.hpp"
#include "rys/suites.hpp"

using namespace rys;

namespace {

const StepKind kAll[] = {kLPlus, kLMinus, kRPlus, kRMinus};

// law of lambda^(t) read off a full enumeration of a finite model
ExactMeasure enumerated_marginal(const RailYardModel& m, int t) {
    ExactMeasure out;
    Rational z = 0;
    for (const auto& [chain, w] : enumerate_coverings(m, 10).coverings) {
        out.add(chain.at(t), w);
        z += w;
    }
    for (auto& [p, w] : out.entries) w /= z;
    return out;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("matrix elements follow the step relations") {
    auto all = partitions_up_to(5);
    for (auto k : kAll)
        for (const auto& a : all)
            for (const auto& b : all) {
                long e = gamma_exponent(k, a, b);
                CHECK((e >= 0) == step_allowed(k, a, b));
                if (e >= 0) CHECK(e == std::labs(static_cast<long>(a.size()) - static_cast<long>(b.size())));
            }
}

TEST_CASE("gamma on the vacuum") {
    // Gamma_{L,-}(x)|0> sums x^n over single rows (n)
    ExactMeasure vac;
    vac.add(Partition(), 1);
    TruncationPolicy tr;
    tr.max_first_part = 6;
    tr.max_length = 6;
    auto v = apply_gamma(kLMinus, Rational(1, 2), vac, tr);
    CHECK(v.entries.size() == 7);
    for (int n = 0; n <= 6; ++n) CHECK(v.at(n == 0 ? Partition() : Partition{n}) == rpow(Rational(1, 2), n));
    CHECK(v.dropped == Rational(1, 128) / (1 - Rational(1, 2)));
    // Gamma_{L,+} only lowers: the vacuum is fixed
    auto w = apply_gamma(kLPlus, Rational(1, 2), vac, tr);
    CHECK(w.entries.size() == 1);
    CHECK(w.at(Partition()) == 1);
}

TEST_CASE("commutation relations") {
    TruncationPolicy tr;
    tr.max_first_part = 8;
    tr.max_length = 8;
    for (auto a : kAll)
        for (auto b : kAll) {
            auto rep = verify_commutation(a, b, Rational(1, 3), Rational(1, 2), tr);
            INFO(kind_name(a), " ", kind_name(b), " ", rep.factor);
            CHECK(rep.ok);
            CHECK(rep.max_graded_discrepancy == 0);
        }
}

TEST_CASE("segment amplitude gives the partition function") {
    for (const auto& [name, m] : reference_models()) {
        INFO(name);
        CHECK(segment_amplitude(m, m.l, m.r, m.left_boundary, m.right_boundary) == partition_function(m));
    }
}

TEST_CASE("boundary process equals enumerated marginals on finite models") {
    std::mt19937_64 rng(23);
    int tested = 0;
    for (int rep = 0; rep < 25; ++rep) {
        std::string lr, sg;
        std::vector<Rational> w;
        const int len = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < len; ++i) {
            lr += (rng() % 2) ? 'L' : 'R';
            w.push_back(Rational(static_cast<long>(1 + rng() % 4), 5));
        }
        const int minus = 1 + static_cast<int>(rng() % len);
        sg = std::string(minus, '-') + std::string(len - minus, '+');
        const Partition boundaries[] = {Partition{1}, Partition{2, 1}, Partition{1, 1}, Partition{3}};
        auto m = RailYardModel::make(lr, sg, w, boundaries[rng() % 4]);
        if (partition_function(m) == 0) continue;
        ++tested;
        TruncationPolicy tr = TruncationPolicy::defaults(m);
        for (int t = m.l; t <= m.r + 1; ++t) {
            auto got = boundary_schur_process(m, t, tr);
            auto want = enumerated_marginal(m, t);
            CHECK(got.dropped == 0);
            CHECK(got.measure.entries.size() == want.entries.size());
            for (const auto& [p, q] : want.entries) CHECK(got.measure.at(p) == q);
            auto fl = boundary_schur_process_float(m, t, tr);
            for (const auto& [p, q] : want.entries) CHECK(fl.at(p) == doctest::Approx(to_double(q)).epsilon(1e-10));
        }
    }
    CHECK(tested > 10);
}

TEST_CASE("boundary process on an infinite model converges with the truncation") {
    auto m = reference_models()[1].second;   // sampler_mixed
    TruncationPolicy tr = TruncationPolicy::defaults(m);
    auto res = boundary_schur_process(m, 3, tr);
    CHECK(to_double(res.dropped) < 1e-6);
    CHECK(res.measure.total() + res.dropped == 1);
    auto fl = boundary_schur_process_float(m, 3, tr);
    for (const auto& [p, q] : res.measure.entries) CHECK(fl.at(p) == doctest::Approx(to_double(q)).epsilon(1e-6));
}

TEST_CASE("samples are consistent and independent of the thread count") {
    for (const auto& [name, m] : reference_models()) {
        INFO(name);
        CoveringSampler sampler(m, TruncationPolicy::defaults(m));
        CHECK(sampler.truncation_loss() < 1e-6);
        auto one = sample_many(sampler, 300, 5, 1);
        auto three = sample_many(sampler, 300, 5, 3);
        REQUIRE(one.size() == 300);
        for (std::size_t i = 0; i < one.size(); ++i) {
            CHECK(consistent(one[i], m));
            CHECK(one[i].partitions == three[i].partitions);
        }
        auto again = replica_rng(5, 17);
        CHECK(sampler.sample(again).partitions == one[17].partitions);
    }
}

TEST_CASE("sampled chains follow the exact chain law") {
    for (const auto& [name, m] : reference_models()) {
        INFO(name);
        auto r = sampler_chi_square(m, 20000, 77);
        CHECK(r.dof > 3);
        CHECK(r.pvalue > 1e-4);
    }
}

}
