#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rys/fock.hpp"
#include "rys/model.hpp"
#include "rys/partition.hpp"
#include "rys/rational.hpp"

namespace rys {

// (L,-) columns grouped by weight: class 1 carries the largest weight.
struct WeightClasses {
    std::vector<Rational> values;            // strictly decreasing
    std::vector<std::vector<int>> columns;   // column indices of each class, ascending
    std::vector<int> sigma0;                 // all (L,-) columns, class 1 first, then class 2, ...

    static WeightClasses from_model(const RailYardModel& model);
    int n() const { return static_cast<int>(values.size()); }
    int total() const { return static_cast<int>(sigma0.size()); }
    int size(int h) const { return static_cast<int>(columns.at(h - 1).size()); }   // h is 1-based
    int class_of(int column) const;                                               // 1-based, 0 if none
    int size_after(int h, int t) const;                                           // class-h columns in (t..r]
    int offset_after(int h, int t) const;   // sum of size_after(d, t) over d < h
};

// Piecewise-constant left boundary with s distinct values.
// Block t (1-based, ascending heights) holds K_t rows of value mu_{s-t+1}.
struct PiecewiseBoundary {
    int N = 0;
    std::vector<int> mu;        // mu_1 > ... > mu_s
    std::vector<int> K;         // K_1..K_s  (K_t = multiplicity of mu_{s-t+1})
    std::vector<long> A, B;     // Omega segments, ascending
    std::vector<Rational> a, b; // a_i = (mu_{s-i+1} + sum_{t<i} K_t)/N - 1, b_i likewise with t <= i
    std::vector<std::vector<int>> J;   // per class: indices t of mu_t touched by that class (1-based)

    static PiecewiseBoundary from(const Partition& lambda, int N, const WeightClasses& classes);
    int s() const { return static_cast<int>(mu.size()); }
    std::vector<long> omega() const;
    // classes own contiguous runs of mu-indices, in class order
    bool classes_contiguous() const;
};

// Exact Schur generating function of the law of the partition after column t, at points u
// for the (L,-) columns in (t..r] (in column order).
Rational sgf_value(const RailYardModel& model, int t, const std::vector<Rational>& u);
// The same quantity by summing over the boundary law (oracle).
Rational sgf_by_summation(const RailYardModel& model, int t, const std::vector<Rational>& u,
                          const TruncationPolicy& trunc);
// points x^{(L,-,>t)} in column order
std::vector<Rational> sgf_base_point(const RailYardModel& model, int t);

// One factor [D_{h,k}]^l of a product of difference operators; h = 0 stands for D_k.
struct MomentTerm {
    int h = 0;
    int k = 1;
    int l = 1;
};

struct FdOptions {
    double eta = 1e-4;            // relative spread used to split coincident points
    double step_ratio = 1e-3;     // finite-difference step relative to the spread
    double tolerance = 1e-5;      // relative disagreement that flags instability
};

struct MomentResult {
    double value = 0;
    double disagreement = 0;  // relative gap between the two highest-order extrapolants
    bool unstable = false;
    long evaluations = 0;
};

// (prod_j [D_{h_j,k_j}]^{l_j} S)(u = x) by finite differences on sgf_value.
MomentResult difference_operator_moment(const RailYardModel& model, int t, const std::vector<MomentTerm>& terms,
                                        const FdOptions& opts = {});

// E[ prod_j (sum_{i in rows(h_j)} (lambda_i + N - i)^{k_j})^{l_j} ] under an exact measure.
// blocks[h-1] is the number of rows owned by class h (classes stacked from the top);
// N = sum of blocks; h = 0 means all rows.
Rational exact_power_moment(const ExactMeasure& measure, const std::vector<int>& blocks,
                            const std::vector<MomentTerm>& terms);

// The same expectation under the exact law after column t, widening the truncation until the
// value settles.  `comparable` is set when the product of D operators acts on the law by exactly
// these power sums (every term h = 0, or a single weight class).
struct ExactMoment {
    double value = 0;
    double dropped = 0;     // truncated mass of the last round
    bool comparable = false;
};
ExactMoment exact_boundary_moment(const RailYardModel& model, int t, const std::vector<MomentTerm>& terms);

struct SubMeasure {
    int h = 1;
    RailYardModel model;
    Partition left;        // lambda^{(h, sigma0)}
    int row_from = 0;      // rows (row_from, row_to] of the joint partition after t
    int row_to = 0;
    BoundaryProcessResult law;
};

// Sub-models: class 1 keeps every non-(L,-) column and the class-1 weights (other (L,-) weights
// set to 0); class h >= 2 becomes an all-L model where only class-h (L,-) weights are nonzero.
std::vector<SubMeasure> factor_submeasures(const RailYardModel& model, int t, const TruncationPolicy& trunc);
// Law of (lambda_{from+1}, ..., lambda_to) under a measure on partitions.
ExactMeasure block_law(const ExactMeasure& joint, int from, int to);
double total_variation(const ExactMeasure& p, const ExactMeasure& q);

// min over cosets != sigma0 of log |term(sigma0)| - log |term(sigma)| in the coset expansion of
// s_{lambda^(l)}(x^{(L,-)}); +infinity when there is a single coset.
double dominance_gap(const RailYardModel& model);
double dominance_gap(const Partition& lambda, const std::vector<Rational>& points);

double log_abs(const Rational& q);   // log|q| without overflow

}  // namespace rys
