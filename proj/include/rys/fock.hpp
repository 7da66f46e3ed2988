#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rys/model.hpp"
#include "rys/railyard.hpp"

namespace rys {

struct TruncationPolicy {
    int max_first_part = 32;
    int max_length = 32;
    Rational weight_floor = 0;   // 0 = keep every state

    static TruncationPolicy defaults(const RailYardModel& model);
    bool admits(const Partition& p) const {
        return p.first() <= max_first_part && static_cast<int>(p.length()) <= max_length;
    }
};

template <class T>
struct PartitionMeasure {
    std::unordered_map<Partition, T, PartitionHash> entries;
    T dropped = T(0);          // weight removed by truncation
    bool normalized = false;

    T total() const {
        T s = T(0);
        for (const auto& [p, w] : entries) s += w;
        return s;
    }
    T at(const Partition& p) const {
        auto it = entries.find(p);
        return it == entries.end() ? T(0) : it->second;
    }
    void add(const Partition& p, const T& w) {
        if (w == T(0)) return;
        entries[p] += w;
    }
    void normalize();
    std::vector<std::pair<Partition, T>> sorted() const;
};

using ExactMeasure = PartitionMeasure<Rational>;
using FloatMeasure = PartitionMeasure<double>;

// Matrix element <left| Gamma_kind(x) |right> without the weight: returns the exponent of x,
// or -1 when the element vanishes.
long gamma_exponent(StepKind kind, const Partition& left, const Partition& right);

// Kets:  Gamma|right> = sum over left states.  Bras: <left|Gamma = sum over right states.
// Each neighbour comes with its exponent of x.
std::vector<std::pair<Partition, long>> ket_neighbours(StepKind kind, const Partition& right, int max_first, int max_len);
std::vector<std::pair<Partition, long>> bra_neighbours(StepKind kind, const Partition& left, int max_first, int max_len);

// Gamma_kind(x) applied to a ket vector; states outside the policy are dropped and
// their total weight (exact, including infinite geometric tails) recorded in `dropped`.
template <class T>
PartitionMeasure<T> apply_gamma(StepKind kind, const T& x, const PartitionMeasure<T>& vec, const TruncationPolicy& trunc);
// Same, acting on a bra from the right.
template <class T>
PartitionMeasure<T> apply_gamma_bra(StepKind kind, const T& x, const PartitionMeasure<T>& vec,
                                    const TruncationPolicy& trunc);

// Degree-p homogeneous piece of Gamma_kind acting on a ket (exact, finite).
ExactMeasure apply_gamma_graded(StepKind kind, long degree, const ExactMeasure& vec);

struct CommutationReport {
    StepKind first, second;          // Gamma_first(x1) Gamma_second(x2) on the left-hand side
    std::string factor;              // description of the scalar
    int states = 0;                  // basis kets tested
    long coefficients = 0;           // graded coefficients compared
    Rational max_graded_discrepancy = 0;
    Rational max_evaluated_discrepancy = 0;   // at (x1,x2), total degree <= cap, both sides truncated alike
    Rational omitted_mass_bound = 0;          // mass of the lhs beyond the degree cap (|lambda|-0 basis ket)
    bool ok = false;
};

// Compares Gamma_1(x1)Gamma_2(x2)|lambda> with the scalar times the swapped product, degree by
// degree in (x1, x2), over basis kets |lambda| <= 4; degrees are capped by trunc.max_first_part.
CommutationReport verify_commutation(StepKind k1, StepKind k2, const Rational& x1, const Rational& x2,
                                     const TruncationPolicy& trunc);

// Exact evaluation helpers built on normal ordering (all - columns moved left,
// all + columns right, with the z_ij scalars): both remaining passes are finite.
Rational normal_ordered_scalar(const RailYardModel& model, int from, int to);   // product of z over + before - in [from..to]
// <left| Gamma_from ... Gamma_to |right>, exact.
Rational segment_amplitude(const RailYardModel& model, int from, int to, const Partition& left, const Partition& right);

// Law of lambda^(t), the state entering column t (t in [l..r+1]).
struct BoundaryProcessResult {
    ExactMeasure measure;     // normalized
    Rational dropped = 0;     // 1 - (captured probability)
    bool truncated = false;
};
BoundaryProcessResult boundary_schur_process(const RailYardModel& model, int t, const TruncationPolicy& trunc);
// Float transfer-pass version (forward x backward sweeps over the truncated space).
FloatMeasure boundary_schur_process_float(const RailYardModel& model, int t, const TruncationPolicy& trunc);

// Sequential sampler.  For models of the rectangular two-class shape handled by
// GtChainSampler (see gt_sampler.hpp) the structured exact algorithm is used; otherwise a
// backward sweep over the truncated state space is cached once and each draw walks it.
class CoveringSampler {
public:
    enum class Method { Auto, Transfer, Structured };
    CoveringSampler(const RailYardModel& model, const TruncationPolicy& trunc, Method method = Method::Auto);
    ~CoveringSampler();
    CoveringSampler(CoveringSampler&&) noexcept;
    CoveringSampler& operator=(CoveringSampler&&) noexcept;

    DimerSample sample(std::mt19937_64& rng) const;
    bool structured() const;
    // Transfer mode: relative weight of the truncated state space lost at the left boundary
    // compared with the exact partition function (0 for the structured method).
    double truncation_loss() const;
    std::size_t state_count() const;

private:
    struct Impl;
    Impl* impl_;
};

DimerSample sample_covering(const RailYardModel& model, std::uint64_t rng_seed, const TruncationPolicy& trunc);

// Per-replica seed stream: deterministic given (seed, replica).
std::mt19937_64 replica_rng(std::uint64_t seed, std::uint64_t replica);

// n samples, sample i drawn from replica_rng(seed, i); the result does not depend on threads.
std::vector<DimerSample> sample_many(const CoveringSampler& sampler, long n, std::uint64_t seed, int threads = 1);

}  // namespace rys
