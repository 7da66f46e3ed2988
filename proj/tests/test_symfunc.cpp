#include "doctest.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "rys/symfunc.hpp"

using namespace rys;

namespace {

// sum over semistandard tableaux of shape lambda/mu with entries 1..n of prod x_T
Rational ssyt_sum(const Partition& lambda, const Partition& mu, const std::vector<Rational>& x) {
    if (!lambda.contains(mu)) return 0;
    std::vector<std::pair<int, int>> cells;   // (row, col), 1-based, row-major
    for (int r = 1; r <= static_cast<int>(lambda.length()); ++r)
        for (int c = mu[r] + 1; c <= lambda[r]; ++c) cells.emplace_back(r, c);
    const int n = static_cast<int>(x.size());
    std::map<std::pair<int, int>, int> T;
    Rational total = 0;
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t k, Rational w) {
        if (k == cells.size()) {
            total += w;
            return;
        }
        auto [r, c] = cells[k];
        int lo = 1;
        if (T.count({r, c - 1})) lo = std::max(lo, T[{r, c - 1}]);
        if (T.count({r - 1, c})) lo = std::max(lo, T[{r - 1, c}] + 1);
        for (int v = lo; v <= n; ++v) {
            T[{r, c}] = v;
            rec(k + 1, w * x[v - 1]);
        }
        T.erase({r, c});
    };
    rec(0, Rational(1));
    return total;
}

Rational det_leibniz(const std::vector<std::vector<Rational>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    Rational s = 0;
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
        Rational t = inv % 2 ? -1 : 1;
        for (int i = 0; i < n; ++i) t *= m[i][p[i]];
        s += t;
    } while (std::next_permutation(p.begin(), p.end()));
    return s;
}

}  // namespace

TEST_SUITE("symfunc") {

TEST_CASE("complete homogeneous polynomials") {
    std::vector<Rational> x{Rational(1, 2), Rational(1, 3)};
    CHECK(complete_homogeneous(0, x) == 1);
    CHECK(complete_homogeneous(-1, x) == 0);
    CHECK(complete_homogeneous(1, x) == Rational(5, 6));
    CHECK(complete_homogeneous(2, x) == Rational(1, 4) + Rational(1, 6) + Rational(1, 9));
    auto all = complete_homogeneous_upto(5, x);
    for (int r = 0; r <= 5; ++r) CHECK(all[r] == complete_homogeneous(r, x));
    // single row tableaux
    for (int r = 0; r <= 5; ++r) CHECK(complete_homogeneous(r, x) == ssyt_sum(Partition{r}, Partition(), x));
}

TEST_CASE("determinant against Leibniz expansion") {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 5; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
            for (auto& row : m)
                for (auto& v : row) {
                    v = Rational(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 4) + 1);
                    v.canonicalize();
                }
            CHECK(determinant(m) == det_leibniz(m));
        }
}

TEST_CASE("Jacobi-Trudi skew Schur equals tableau sums") {
    const std::vector<std::vector<Rational>> pts = {
        {Rational(1, 2)}, {Rational(1, 2), Rational(1, 3)}, {Rational(2, 3), Rational(1, 5), Rational(3, 4)}};
    for (const auto& x : pts)
        for (const auto& la : partitions_up_to(6))
            for (const auto& mu : partitions_up_to(3)) CHECK(skew_schur(la, mu, x) == ssyt_sum(la, mu, x));
}

TEST_CASE("principal specialization") {
    CHECK(schur_principal(Partition{2, 1}, 3) == 8);
    CHECK(schur_principal(Partition{1, 1, 1}, 2) == 0);
    CHECK(schur_principal(Partition(), 4) == 1);
    for (int N = 1; N <= 4; ++N)
        for (const auto& la : partitions_up_to(6))
            CHECK(schur_principal(la, N) == ssyt_sum(la, Partition(), std::vector<Rational>(N, Rational(1))));
}

TEST_CASE("point multiset grouping") {
    PointMultiset p({Rational(1, 2), Rational(1, 3), Rational(1, 2)});
    CHECK(p.size() == 3);
    CHECK(p.classes() == 2);
    CHECK(p.multiplicities() == std::vector<int>{2, 1});
    CHECK(p.block_of(0) == 0);
    CHECK(p.block_of(1) == 1);
    CHECK(p.block_of(2) == 0);
}

TEST_CASE("eta offsets and phi partitions") {
    PointMultiset p(std::vector<Rational>{Rational(1, 2), Rational(1, 3)}, std::vector<int>{2, 1});
    // sigma = identity: labels 0,0,1 -> eta = (1,1,0)
    CHECK(eta_offsets({1, 2, 3}, p) == std::vector<int>{1, 1, 0});
    // labels 1,0,0 -> eta = (2,0,0)
    CHECK(eta_offsets({3, 1, 2}, p) == std::vector<int>{2, 0, 0});
    auto phi = phi_partitions(Partition{4, 2, 1}, {1, 2, 3}, p);
    REQUIRE(phi.size() == 2);
    CHECK(phi[0] == Partition{5, 3});
    CHECK(phi[1] == Partition{1});
    CHECK_THROWS_AS(eta_offsets({1, 1, 2}, p), std::invalid_argument);
}

TEST_CASE("coset expansion equals the Schur polynomial") {
    std::mt19937_64 rng(11);
    const Rational pool[] = {Rational(1, 2), Rational(1, 3), Rational(3, 5), Rational(0), Rational(7, 4)};
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 5);
        std::vector<Rational> seq;
        for (int i = 0; i < n; ++i) seq.push_back(pool[rng() % 3 + (rep % 2) * 2]);
        for (const auto& la : partitions_up_to(5)) {
            PointMultiset pm(seq);
            CHECK(schur_coset_formula(la, pm) == ssyt_sum(la, Partition(), seq));
        }
    }
    // number of cosets: N! / prod mult!
    PointMultiset pm(std::vector<Rational>{Rational(1, 2), Rational(1, 3)}, std::vector<int>{2, 2});
    CHECK(coset_terms(Partition{1}, pm).size() == 6);
}

}
