#pragma once

#include <random>
#include <string>
#include <vector>

#include "rys/model.hpp"
#include "rys/railyard.hpp"

namespace rys {

// Exact sampler for all-L models with right boundary ∅ whose (L,-) weights take at most two
// values a > b, positive weights throughout, and
//   * one value: any left boundary;
//   * two values: left boundary a rectangle (mu^{N1}) with N1 = #(weight a) >= N2 = #(weight b).
//
// The (L,-) part is first drawn in the order [a...a][b...b]:
//   - the partition between the two phases follows a discrete beta=2 ensemble on shifted
//     coordinates (weight (b/a)^c (c+N1-N2)!/c!), sampled as a projection DPP;
//   - each phase is then a uniform Gelfand-Tsetlin pattern (the a-phase after complementing in
//     the N1 x mu box), drawn level by level from continuous Haar corners plus flooring.
// Columns are then brought into the model's order by adjacent transpositions; every
// transposition drops the intermediate partition and redraws it from its exact conditional
// law given its two neighbours (independent truncated geometrics per row), which is valid
// because two L-type operators commute up to a scalar.
class GtChainSampler {
public:
    static bool applicable(const RailYardModel& model, std::string* why = nullptr);
    explicit GtChainSampler(const RailYardModel& model);

    DimerSample sample(std::mt19937_64& rng) const;

    // building blocks, exposed for tests
    // one uniform GT level: strictly decreasing integers x (size n) -> size n-1
    static std::vector<long> corners_level(const std::vector<long>& x, std::mt19937_64& rng);
    std::vector<int> sample_split_coordinates(std::mt19937_64& rng) const;   // descending c_i
    int swap_count() const { return static_cast<int>(swaps_.size()); }

private:
    struct Step {
        StepKind kind;
        double x;
        int column;   // model column index (l-based)
    };
    RailYardModel model_;
    int n_classes_ = 1;
    int N1_ = 0, N2_ = 0, mu_ = 0;
    std::vector<Step> initial_;   // initial step order
    std::vector<int> swaps_;      // positions k: swap steps k and k+1 (applied in order)
    std::vector<std::pair<StepKind, double>> swap_first_, swap_second_;   // new order at each swap
    // projection DPP basis, row-major S x N2
    int S_ = 0;
    std::vector<double> basis_;

    std::vector<Partition> uniform_gt_down(const Partition& top, int levels, std::mt19937_64& rng) const;
};

// Draw v in [lo, hi] with P(v) ∝ q^(v-lo); hi < 0 means unbounded (requires q < 1).
long truncated_geometric(long lo, long hi, double q, std::mt19937_64& rng);

}  // namespace rys
