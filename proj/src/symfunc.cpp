#include "rys/symfunc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rys {

std::vector<Rational> complete_homogeneous_upto(int rmax, const std::vector<Rational>& points) {
    // h_r(x_1..x_j) = h_r(x_1..x_{j-1}) + x_j h_{r-1}(x_1..x_j)
    std::vector<Rational> h(std::max(rmax, 0) + 1, Rational(0));
    if (rmax < 0) return {};
    h[0] = 1;
    for (const auto& x : points) {
        if (x == 0) continue;
        for (int r = 1; r <= rmax; ++r) h[r] += x * h[r - 1];
    }
    return h;
}

Rational complete_homogeneous(int r, const std::vector<Rational>& points) {
    if (r < 0) return 0;
    return complete_homogeneous_upto(r, points)[r];
}

Rational determinant(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Rational prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Rational d = m[n - 1][n - 1];
    return sign > 0 ? d : Rational(-d);
}

Rational skew_schur(const Partition& lambda, const Partition& mu, const std::vector<Rational>& points) {
    if (!lambda.contains(mu)) return 0;
    const int n = static_cast<int>(lambda.length());
    if (n == 0) return 1;
    // quick vanishing: a column of the skew shape taller than the number of
    // (nonzero) points forces zero; the determinant would find it too.
    int nonzero = 0;
    for (const auto& x : points)
        if (x != 0) ++nonzero;
    Partition lc = conjugate(lambda), mc = conjugate(mu);
    for (std::size_t j = 1; j <= lc.length(); ++j)
        if (lc[j] - mc[j] > nonzero) return 0;
    int rmax = lambda.first() + n;
    auto h = complete_homogeneous_upto(rmax, points);
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            int r = lambda[i] - mu[j] - i + j;
            m[i - 1][j - 1] = (r < 0) ? Rational(0) : h[r];
        }
    return determinant(std::move(m));
}

Rational schur_principal(const Partition& lambda, int N) {
    if (lambda.length() > static_cast<std::size_t>(std::max(N, 0))) return 0;
    Rational num = 1;
    mpz_class n = 1, d = 1;
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            n *= (lambda[i] - lambda[j] + j - i);
            d *= (j - i);
        }
    num = Rational(n, d);
    num.canonicalize();
    return num;
}

PointMultiset::PointMultiset(std::vector<Rational> sequence) : seq_(std::move(sequence)) {
    for (const auto& x : seq_) {
        auto it = std::find(values_.begin(), values_.end(), x);
        if (it == values_.end()) {
            values_.push_back(x);
            mult_.push_back(1);
            block_.push_back(static_cast<int>(values_.size()) - 1);
        } else {
            int b = static_cast<int>(it - values_.begin());
            ++mult_[b];
            block_.push_back(b);
        }
    }
}

PointMultiset::PointMultiset(std::vector<Rational> values, std::vector<int> multiplicities)
    : values_(std::move(values)), mult_(std::move(multiplicities)) {
    if (values_.size() != mult_.size()) throw std::invalid_argument("PointMultiset: size mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (values_[i] == values_[j]) throw std::invalid_argument("PointMultiset: values must be distinct");
        if (mult_[i] <= 0) throw std::invalid_argument("PointMultiset: multiplicities must be positive");
        for (int k = 0; k < mult_[i]; ++k) {
            seq_.push_back(values_[i]);
            block_.push_back(static_cast<int>(i));
        }
    }
}

namespace {

void check_permutation(const std::vector<int>& sigma, int N) {
    if (static_cast<int>(sigma.size()) != N) throw std::invalid_argument("sigma: wrong length");
    std::vector<char> seen(N, 0);
    for (int s : sigma) {
        if (s < 1 || s > N || seen[s - 1]) throw std::invalid_argument("sigma: not a permutation");
        seen[s - 1] = 1;
    }
}

std::vector<int> eta_from_labels(const std::vector<int>& labels) {
    const int N = static_cast<int>(labels.size());
    std::vector<int> eta(N, 0);
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k)
            if (labels[k] != labels[j]) ++eta[j];
    return eta;
}

std::vector<Partition> phi_from_labels(const Partition& lambda, const std::vector<int>& labels, int classes) {
    auto eta = eta_from_labels(labels);
    std::vector<std::vector<int>> blocks(classes);
    for (std::size_t j = 0; j < labels.size(); ++j) blocks[labels[j]].push_back(lambda[j + 1] + eta[j]);
    std::vector<Partition> out;
    for (auto& b : blocks) {
        std::sort(b.begin(), b.end(), std::greater<int>());
        out.push_back(Partition::from_sorted(b));
    }
    return out;
}

Rational term_from_labels(const Partition& lambda, const std::vector<int>& labels, const PointMultiset& pts) {
    auto phi = phi_from_labels(lambda, labels, pts.classes());
    Rational v = 1;
    for (int i = 0; i < pts.classes(); ++i) {
        v *= rpow(pts.values()[i], phi[i].size());
        v *= schur_principal(phi[i], pts.multiplicities()[i]);
    }
    if (v == 0) return v;
    const std::size_t N = labels.size();
    Rational den = 1;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (labels[i] != labels[j]) den *= (pts.values()[labels[i]] - pts.values()[labels[j]]);
    return v / den;
}

}  // namespace

std::vector<int> eta_offsets(const std::vector<int>& sigma, const PointMultiset& points) {
    check_permutation(sigma, points.size());
    std::vector<int> labels(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) labels[j] = points.block_of(sigma[j] - 1);
    return eta_from_labels(labels);
}

std::vector<Partition> phi_partitions(const Partition& lambda, const std::vector<int>& sigma,
                                      const PointMultiset& points) {
    check_permutation(sigma, points.size());
    if (lambda.length() > static_cast<std::size_t>(points.size()))
        throw std::invalid_argument("phi_partitions: partition longer than point list");
    std::vector<int> labels(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) labels[j] = points.block_of(sigma[j] - 1);
    return phi_from_labels(lambda, labels, points.classes());
}

std::vector<CosetTerm> coset_terms(const Partition& lambda, const PointMultiset& points) {
    std::vector<CosetTerm> out;
    const int N = points.size();
    if (lambda.length() > static_cast<std::size_t>(N)) return out;
    // lexicographic enumeration of label sequences with the prescribed counts
    std::vector<int> labels;
    for (int i = 0; i < points.classes(); ++i)
        for (int k = 0; k < points.multiplicities()[i]; ++k) labels.push_back(i);
    do {
        out.push_back({labels, term_from_labels(lambda, labels, points)});
    } while (std::next_permutation(labels.begin(), labels.end()));
    return out;
}

Rational schur_coset_formula(const Partition& lambda, const PointMultiset& points) {
    if (lambda.length() > static_cast<std::size_t>(points.size())) return 0;
    Rational s = 0;
    for (const auto& t : coset_terms(lambda, points)) s += t.value;
    return s;
}

}  // namespace rys
