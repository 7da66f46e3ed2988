#pragma once

#include <vector>

#include "rys/partition.hpp"
#include "rys/rational.hpp"

namespace rys {

// h_r evaluated at the points; h_0 = 1 and h_r = 0 for r < 0.
Rational complete_homogeneous(int r, const std::vector<Rational>& points);
// h_0 .. h_rmax in one pass.
std::vector<Rational> complete_homogeneous_upto(int rmax, const std::vector<Rational>& points);

// Exact determinant by fraction-free (Bareiss) elimination with pivoting.
Rational determinant(std::vector<std::vector<Rational>> m);

// s_{lambda/mu}(points) via the Jacobi-Trudi determinant det(h_{lambda_i - mu_j - i + j}).
Rational skew_schur(const Partition& lambda, const Partition& mu, const std::vector<Rational>& points);
inline Rational schur(const Partition& lambda, const std::vector<Rational>& points) {
    return skew_schur(lambda, Partition(), points);
}

// s_lambda(1^N) by the Weyl dimension product.
Rational schur_principal(const Partition& lambda, int N);

// A list of points x_1..x_N together with its distinct values (in order of first
// appearance) and multiplicities.
class PointMultiset {
public:
    PointMultiset() = default;
    explicit PointMultiset(std::vector<Rational> sequence);
    // distinct values with multiplicities; the sequence lists each block contiguously
    PointMultiset(std::vector<Rational> values, std::vector<int> multiplicities);

    const std::vector<Rational>& sequence() const { return seq_; }
    const std::vector<Rational>& values() const { return values_; }
    const std::vector<int>& multiplicities() const { return mult_; }
    int size() const { return static_cast<int>(seq_.size()); }
    int classes() const { return static_cast<int>(values_.size()); }
    // block index (0-based) of sequence position j (0-based)
    int block_of(int j) const { return block_[j]; }

private:
    std::vector<Rational> seq_;
    std::vector<Rational> values_;
    std::vector<int> mult_;
    std::vector<int> block_;
};

// eta_j = #{k > j : x_{sigma(k)} != x_{sigma(j)}}.  sigma is 1-based, a permutation of [N].
std::vector<int> eta_offsets(const std::vector<int>& sigma, const PointMultiset& points);

// phi^{(i,sigma)} for every block i, obtained by sorting {lambda_j + eta_j : x_{sigma(j)} = x_i}.
std::vector<Partition> phi_partitions(const Partition& lambda, const std::vector<int>& sigma,
                                      const PointMultiset& points);

// One term of the coset expansion, for a coset described by the block label
// carried by each position j (labels[j] = block of x_{sigma(j)}).
struct CosetTerm {
    std::vector<int> labels;
    Rational value;
};

// All coset terms of the expansion of s_lambda(points) (l(lambda) <= N).
std::vector<CosetTerm> coset_terms(const Partition& lambda, const PointMultiset& points);
// Sum of the coset terms; equals s_lambda(points).
Rational schur_coset_formula(const Partition& lambda, const PointMultiset& points);

}  // namespace rys
