#include "doctest.h"

#include <algorithm>
#include <set>

#include "rys/partition.hpp"

using namespace rys;

namespace {

// interlacing straight from the inequalities, with zero padding
bool interlaces_brute(const Partition& mu, const Partition& lambda) {
    const std::size_t n = std::max(mu.length(), lambda.length()) + 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (lambda[i] < mu[i]) return false;
        if (mu[i] < lambda[i + 1]) return false;
    }
    return true;
}

// mu ≺' lambda iff lambda / mu is a vertical strip: mu ⊂ lambda and 0 <= lambda_i - mu_i <= 1
bool vertical_strip_brute(const Partition& mu, const Partition& lambda) {
    const std::size_t n = std::max(mu.length(), lambda.length());
    for (std::size_t i = 1; i <= n; ++i) {
        int d = lambda[i] - mu[i];
        if (d < 0 || d > 1) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("partition") {

TEST_CASE("storage drops trailing zeros and pads implicitly") {
    Partition p{3, 1, 0, 0};
    CHECK(p.length() == 2);
    CHECK(p[1] == 3);
    CHECK(p[2] == 1);
    CHECK(p[7] == 0);
    CHECK(p.size() == 4);
    CHECK(Partition().empty());
    CHECK(Partition::parse("(3,1)") == p);
    CHECK(Partition::parse(p.str()) == p);
    CHECK(Partition::parse("()") == Partition());
}

TEST_CASE("non-increasing parts are enforced") {
    CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({2, -1}), std::invalid_argument);
}

TEST_CASE("partition counts") {
    const long p[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int n = 0; n <= 10; ++n) CHECK(static_cast<long>(partitions_of(n).size()) == p[n]);
    long total = 0;
    for (int n = 0; n <= 8; ++n) total += p[n];
    CHECK(static_cast<long>(partitions_up_to(8).size()) == total);
    // box (3 rows, parts <= 2): binomial(5, 2) = 10
    CHECK(partitions_in_box(3, 2).size() == 10);
}

TEST_CASE("interlacing agrees with the inequalities") {
    auto all = partitions_up_to(6);
    for (const auto& mu : all)
        for (const auto& la : all) {
            CHECK(interlaces(mu, la) == interlaces_brute(mu, la));
            CHECK(interlaces_conjugate(mu, la) == vertical_strip_brute(mu, la));
        }
    CHECK(interlaces(Partition{2}, Partition{3, 1}));
    CHECK_FALSE(interlaces(Partition{1, 1}, Partition{2}));
}

TEST_CASE("strip enumeration matches filtering") {
    auto all = partitions_up_to(7);
    for (const auto& la : partitions_up_to(4)) {
        std::set<Partition> below, vbelow;
        for (const auto& v : strips_below(la)) below.insert(v);
        for (const auto& v : vstrips_below(la)) vbelow.insert(v);
        std::set<Partition> above, vabove;
        for (const auto& v : strips_above(la, 7, 7)) above.insert(v);
        for (const auto& v : vstrips_above(la, 7, 7)) vabove.insert(v);
        std::set<Partition> eb, evb, ea, eva;
        for (const auto& mu : all) {
            if (interlaces_brute(mu, la)) eb.insert(mu);
            if (vertical_strip_brute(mu, la)) evb.insert(mu);
            if (mu.size() <= 7 && interlaces_brute(la, mu) && mu.first() <= 7) ea.insert(mu);
            if (vertical_strip_brute(la, mu)) eva.insert(mu);
        }
        CHECK(below == eb);
        CHECK(vbelow == evb);
        // |mu| <= 7 is enough to contain every strip above |la| <= 4 with the caps used
        for (const auto& mu : above) CHECK(interlaces_brute(la, mu));
        for (const auto& mu : ea)
            if (mu.first() <= 7 && static_cast<int>(mu.length()) <= 7) CHECK(above.count(mu) == 1);
        for (const auto& mu : vabove) CHECK(vertical_strip_brute(la, mu));
        for (const auto& mu : eva) CHECK(vabove.count(mu) == 1);
    }
}

TEST_CASE("conjugation") {
    CHECK(conjugate(Partition{3, 1}) == Partition{2, 1, 1});
    for (const auto& la : partitions_up_to(8)) {
        CHECK(conjugate(conjugate(la)) == la);
        CHECK(conjugate(la).size() == la.size());
        // mu ≺ la  <=>  mu' ≺' la'
        for (const auto& mu : strips_below(la)) CHECK(interlaces_conjugate(conjugate(mu), conjugate(la)));
    }
}

TEST_CASE("shifted coordinates and counting measure") {
    auto s = shifted_coordinates(Partition{2, 1}, 3);
    CHECK(s == std::vector<long>{4, 2, 0});
    CHECK_THROWS_AS(shifted_coordinates(Partition{1, 1, 1}, 2), std::invalid_argument);
    // empty partition at size N: staircase (N-i)/N, moments -> 1/2, 1/3
    auto m = counting_measure(Partition(), 400);
    CHECK(m.mass() == doctest::Approx(1.0));
    CHECK(m.moment(1) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(m.moment(2) == doctest::Approx(1.0 / 3).epsilon(0.01));
    auto m2 = counting_measure(Partition{2}, 2);
    CHECK(m2.atoms.size() == 2);
    CHECK(m2.atoms[0] == doctest::Approx(1.5));
    CHECK(m2.atoms[1] == doctest::Approx(0.0));
}

}
