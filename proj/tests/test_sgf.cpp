#include "doctest.h"

#include <cmath>

#include "rys/gue.hpp"
#include "rys/sgf.hpp"
#include "rys/suites.hpp"

using namespace rys;

namespace {

RailYardModel named(const std::string& name) {
    for (const auto& [n, m] : reference_models())
        if (n == name) return m;
    throw std::logic_error("no model " + name);
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// two classes a > b = a/ratio over a rectangular boundary, + columns in between
RailYardModel two_class(const Rational& ratio) {
    const Rational a(1, 2);
    const Rational b = a / ratio;
    return RailYardModel::make("LLLLLLL", "--++---", {a, b, Rational(1, 3), Rational(1, 3), a, b, a}, Partition{2, 2});
}

}  // namespace

TEST_SUITE("sgf") {

TEST_CASE("weight classes and boundary blocks") {
    auto m = named("sampler_two_class");
    auto c = WeightClasses::from_model(m);
    REQUIRE(c.n() == 2);
    CHECK(c.values[0] == Rational(1, 2));
    CHECK(c.columns[0] == std::vector<int>{1, 5});
    CHECK(c.columns[1] == std::vector<int>{2, 6});
    CHECK(c.sigma0 == std::vector<int>{1, 5, 2, 6});
    CHECK(c.class_of(6) == 2);
    CHECK(c.class_of(3) == 0);
    CHECK(c.size_after(1, 2) == 1);
    CHECK(c.offset_after(2, 2) == 1);
    auto pb = PiecewiseBoundary::from(Partition{3, 3, 1}, 4, c);
    CHECK(pb.mu == std::vector<int>{3, 1, 0});
    CHECK(pb.K == std::vector<int>{1, 1, 2});
}

TEST_CASE("Schur generating function equals the summed expectation") {
    for (const auto& [name, t] : std::vector<std::pair<std::string, int>>{
             {"sampler_llll", 1}, {"sampler_boundary", 2}, {"sampler_two_class", 2}, {"sampler_two_class", 4}}) {
        INFO(name, " t=", t);
        auto m = named(name);
        auto x = sgf_base_point(m, t);
        REQUIRE(!x.empty());
        CHECK(sgf_value(m, t, x) == 1);
        for (const Rational f : {Rational(9, 10), Rational(21, 20)}) {
            std::vector<Rational> u = x;
            for (std::size_t i = 0; i < u.size(); ++i) u[i] *= (i % 2 ? f : Rational(1));
            auto trunc = TruncationPolicy::defaults(m);
            trunc.max_first_part += 16;
            double want = to_double(sgf_by_summation(m, t, u, trunc));
            CHECK(rel(to_double(sgf_value(m, t, u)), want) < 1e-9);
        }
    }
}

TEST_CASE("difference operators give the power-sum moments") {
    struct Case {
        std::string model;
        int t;
        std::vector<MomentTerm> terms;
    };
    const std::vector<Case> cases = {
        {"sampler_llll", 1, {{1, 1, 1}}},
        {"sampler_llll", 1, {{1, 2, 1}}},
        {"sampler_llll", 1, {{0, 1, 2}}},
        {"sampler_boundary", 2, {{0, 2, 1}}},
        {"sampler_two_class", 2, {{0, 1, 1}, {0, 2, 1}}},
        {"sampler_two_class", 4, {{0, 3, 1}}},
    };
    for (const auto& c : cases) {
        INFO(c.model, " t=", c.t, " terms=", c.terms.size());
        auto m = named(c.model);
        auto fd = difference_operator_moment(m, c.t, c.terms);
        auto ex = exact_boundary_moment(m, c.t, c.terms);
        REQUIRE(ex.comparable);
        CHECK_FALSE(fd.unstable);
        CHECK(rel(fd.value, ex.value) < 1e-5);
    }
    auto m = named("sampler_two_class");
    CHECK_FALSE(exact_boundary_moment(m, 2, {{1, 1, 1}}).comparable);
}

TEST_CASE("D_k is the sum of the class operators") {
    for (const auto& [name, t] : std::vector<std::pair<std::string, int>>{{"sampler_two_class", 2}, {"sampler_llll", 1}}) {
        auto m = named(name);
        const int n = WeightClasses::from_model(m).n();
        for (int k = 1; k <= 3; ++k) {
            INFO(name, " k=", k);
            double whole = difference_operator_moment(m, t, {{0, k, 1}}).value;
            double parts = 0;
            for (int h = 1; h <= n; ++h) parts += difference_operator_moment(m, t, {{h, k, 1}}).value;
            CHECK(rel(parts, whole) < 1e-5);
        }
    }
}

TEST_CASE("power moments under an explicit measure") {
    ExactMeasure mu;
    mu.add(Partition{1}, Rational(1, 2));
    mu.add(Partition(), Rational(1, 2));
    // N = 2 rows: shifted coordinates (2,0) or (1,0)
    CHECK(exact_power_moment(mu, {2}, {{0, 1, 1}}) == Rational(3, 2));
    CHECK(exact_power_moment(mu, {1, 1}, {{1, 2, 1}}) == Rational(5, 2));
    CHECK(exact_power_moment(mu, {1, 1}, {{2, 1, 1}}) == 0);
    CHECK(exact_power_moment(mu, {2}, {{0, 1, 2}}) == Rational(5, 2));
}

TEST_CASE("factorised sub-measures") {
    auto m = two_class(16);
    const int t = 4;
    auto subs = factor_submeasures(m, t, TruncationPolicy::defaults(m));
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].h == 1);
    CHECK(subs[0].row_from == 0);
    CHECK(subs[1].row_from == subs[0].row_to);
    CHECK(subs[1].row_to == WeightClasses::from_model(m).total() - 3 + 1);
    CHECK(subs[1].model.count(kRPlus) + subs[1].model.count(kRMinus) == 0);
    for (const auto& s : subs) CHECK(to_double(s.law.measure.total() + s.law.dropped) == doctest::Approx(1.0));
    // class h >= 2 never exceeds the boundary's first part
    for (const auto& [p, w] : subs[1].law.measure.entries) CHECK(p.first() <= m.left_boundary.first());
    // the factorisation sharpens as the classes separate
    double prev = 2;
    for (int r : {2, 8, 32, 128}) {
        auto mr = two_class(r);
        auto joint = boundary_schur_process(mr, t + 1, TruncationPolicy::defaults(mr));
        double tv = 0;
        for (const auto& s : factor_submeasures(mr, t, TruncationPolicy::defaults(mr)))
            tv = std::max(tv, total_variation(block_law(joint.measure, s.row_from, s.row_to), s.law.measure));
        INFO("ratio ", r, " tv ", tv);
        CHECK(tv < prev);
        prev = tv;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("block laws and total variation") {
    ExactMeasure mu;
    mu.add(Partition{2, 1}, Rational(1, 4));
    mu.add(Partition{2}, Rational(1, 4));
    mu.add(Partition{1, 1}, Rational(1, 2));
    auto top = block_law(mu, 0, 1);
    CHECK(top.at(Partition{2}) == Rational(1, 2));
    CHECK(top.at(Partition{1}) == Rational(1, 2));
    auto low = block_law(mu, 1, 2);
    CHECK(low.at(Partition{1}) == Rational(3, 4));
    CHECK(total_variation(top, low) == doctest::Approx(0.5));
    CHECK(total_variation(mu, mu) == 0);
}

TEST_CASE("dominance gap grows with the class ratio") {
    CHECK(std::isinf(dominance_gap(Partition{2, 1}, {Rational(1, 2), Rational(1, 2)})));
    double prev = -1e300;
    for (int r : {2, 4, 8, 16}) {
        LadderParams p;
        p.N = 8;
        p.tail = 1;
        p.ratio = r;
        double g = dominance_gap(ladder_model(p));
        INFO("ratio ", r, " gap ", g);
        CHECK(g > prev);
        prev = g;
    }
    CHECK(prev > 0);
}

}
