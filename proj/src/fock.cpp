#include "rys/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <thread>
#include <stdexcept>

#include "rys/gt_sampler.hpp"

namespace rys {

TruncationPolicy TruncationPolicy::defaults(const RailYardModel& model) {
    TruncationPolicy t;
    int plus = model.count_sign(Sign::Plus);
    int minus = model.count_sign(Sign::Minus);
    int lam1 = std::max(model.left_boundary.first(), model.right_boundary.first());
    int lamlen = static_cast<int>(std::max(model.left_boundary.length(), model.right_boundary.length()));
    t.max_first_part = lam1 + plus + 8;
    t.max_length = minus + lamlen;
    // R-columns grow the length rather than the first part; give them the same slack.
    if (model.count(kRPlus) + model.count(kRMinus) > 0) t.max_length += plus + 8;
    t.max_length = std::max(t.max_length, 1);
    return t;
}

template <class T>
void PartitionMeasure<T>::normalize() {
    T z = total();
    if (z == T(0)) throw std::domain_error("cannot normalize a zero measure");
    for (auto& [p, w] : entries) w /= z;
    dropped /= z;
    normalized = true;
}

template <class T>
std::vector<std::pair<Partition, T>> PartitionMeasure<T>::sorted() const {
    std::vector<std::pair<Partition, T>> v(entries.begin(), entries.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

template struct PartitionMeasure<Rational>;
template struct PartitionMeasure<double>;

long gamma_exponent(StepKind kind, const Partition& left, const Partition& right) {
    if (!step_allowed(kind, left, right)) return -1;
    long d = left.size() - right.size();
    return d < 0 ? -d : d;
}

namespace {

std::vector<std::pair<Partition, long>> with_exponents(std::vector<Partition> states, const Partition& ref) {
    std::vector<std::pair<Partition, long>> out;
    out.reserve(states.size());
    long s = ref.size();
    for (auto& p : states) {
        long d = p.size() - s;
        out.emplace_back(std::move(p), d < 0 ? -d : d);
    }
    return out;
}

// whether the neighbour set of this (kind, side) is infinite (grows the partition)
bool grows_ket(StepKind k) { return k.minus(); }
bool grows_bra(StepKind k) { return k.plus(); }

template <class T>
T geometric_range(const T& x, int from_exp, int to_exp) {
    // sum_{e = from..to} x^e
    T s = T(0), p = T(1);
    for (int e = 0; e < from_exp; ++e) p *= x;
    for (int e = from_exp; e <= to_exp; ++e) {
        s += p;
        p *= x;
    }
    return s;
}

// Exact total weight sum_{mu strip above s} x^{|mu|-|s|}; returns false when infinite (x >= 1).
template <class T>
bool growth_total(bool horizontal, const Partition& s0, const T& x, T& out) {
    if (!(x < T(1))) return false;
    Partition s = horizontal ? s0 : conjugate(s0);
    T total = T(1) / (T(1) - x);
    for (std::size_t i = 2; i <= s.length() + 1; ++i)
        total *= geometric_range(x, 0, s[i - 1] - s[i]);
    out = total;
    return true;
}

template <class T>
struct PowerCache {
    T x;
    std::vector<T> p{T(1)};
    explicit PowerCache(const T& base) : x(base) {}
    const T& operator()(long e) {
        while (static_cast<long>(p.size()) <= e) p.push_back(p.back() * x);
        return p[e];
    }
};

template <class T>
PartitionMeasure<T> apply_common(StepKind kind, const T& x, const PartitionMeasure<T>& vec, const TruncationPolicy& trunc,
                                 bool ket) {
    PartitionMeasure<T> out;
    out.dropped = vec.dropped;
    PowerCache<T> pw(x);
    const bool grows = ket ? grows_ket(kind) : grows_bra(kind);
    for (const auto& [state, c] : vec.entries) {
        auto nb = ket ? ket_neighbours(kind, state, trunc.max_first_part, trunc.max_length)
                      : bra_neighbours(kind, state, trunc.max_first_part, trunc.max_length);
        T kept = T(0);
        for (const auto& [p, e] : nb) {
            if (!trunc.admits(p)) continue;
            T w = c * pw(e);
            kept += w;
            out.add(p, w);
        }
        if (grows) {
            T tot;
            if (growth_total(kind.letter == Letter::L, state, x, tot)) out.dropped += c * tot - kept;
        }
    }
    if (trunc.weight_floor > 0) {
        T z = out.total();
        T floor = z * T(to_double(trunc.weight_floor));
        if constexpr (std::is_same_v<T, Rational>) floor = z * trunc.weight_floor;
        for (auto it = out.entries.begin(); it != out.entries.end();) {
            if (it->second < floor) {
                out.dropped += it->second;
                it = out.entries.erase(it);
            } else {
                ++it;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<std::pair<Partition, long>> ket_neighbours(StepKind kind, const Partition& right, int max_first, int max_len) {
    if (kind.letter == Letter::L)
        return with_exponents(kind.plus() ? strips_below(right) : strips_above(right, max_first, max_len), right);
    return with_exponents(kind.plus() ? vstrips_below(right) : vstrips_above(right, max_first, max_len), right);
}

std::vector<std::pair<Partition, long>> bra_neighbours(StepKind kind, const Partition& left, int max_first, int max_len) {
    if (kind.letter == Letter::L)
        return with_exponents(kind.plus() ? strips_above(left, max_first, max_len) : strips_below(left), left);
    return with_exponents(kind.plus() ? vstrips_above(left, max_first, max_len) : vstrips_below(left), left);
}

template <class T>
PartitionMeasure<T> apply_gamma(StepKind kind, const T& x, const PartitionMeasure<T>& vec, const TruncationPolicy& trunc) {
    return apply_common(kind, x, vec, trunc, true);
}

template <class T>
PartitionMeasure<T> apply_gamma_bra(StepKind kind, const T& x, const PartitionMeasure<T>& vec,
                                    const TruncationPolicy& trunc) {
    return apply_common(kind, x, vec, trunc, false);
}

template PartitionMeasure<Rational> apply_gamma(StepKind, const Rational&, const PartitionMeasure<Rational>&,
                                                const TruncationPolicy&);
template PartitionMeasure<double> apply_gamma(StepKind, const double&, const PartitionMeasure<double>&,
                                              const TruncationPolicy&);
template PartitionMeasure<Rational> apply_gamma_bra(StepKind, const Rational&, const PartitionMeasure<Rational>&,
                                                    const TruncationPolicy&);
template PartitionMeasure<double> apply_gamma_bra(StepKind, const double&, const PartitionMeasure<double>&,
                                                  const TruncationPolicy&);

ExactMeasure apply_gamma_graded(StepKind kind, long degree, const ExactMeasure& vec) {
    ExactMeasure out;
    if (degree < 0) return out;
    for (const auto& [state, c] : vec.entries) {
        int mf = state.first() + static_cast<int>(degree) + 1;
        int ml = static_cast<int>(state.length() + degree) + 1;
        for (const auto& [p, e] : ket_neighbours(kind, state, mf, ml))
            if (e == degree) out.add(p, c);
    }
    return out;
}

CommutationReport verify_commutation(StepKind k1, StepKind k2, const Rational& x1, const Rational& x2,
                                     const TruncationPolicy& trunc) {
    CommutationReport rep;
    rep.first = k1;
    rep.second = k2;
    const bool same_letter = k1.letter == k2.letter;
    // scalar series in (x1 x2): lhs = c(x1x2) * swapped
    std::vector<Rational> c;
    const int D = std::max(trunc.max_first_part, 1);
    if (k1.sign == k2.sign) {
        rep.factor = "1";
        c = {1};
    } else if (k1.plus()) {
        if (same_letter) {
            rep.factor = "1/(1-x1x2)";
            if (x1 * x2 >= 1) throw std::domain_error("verify_commutation: x1 x2 >= 1 diverges");
            c.assign(D + 1, Rational(1));
        } else {
            rep.factor = "1+x1x2";
            c = {1, 1};
        }
    } else {
        if (same_letter) {
            rep.factor = "1-x1x2";
            c = {1, -1};
        } else {
            rep.factor = "1/(1+x1x2)";
            c.resize(D + 1);
            for (int k = 0; k <= D; ++k) c[k] = (k % 2 == 0) ? 1 : -1;
        }
    }
    auto basis = partitions_up_to(4);
    rep.states = static_cast<int>(basis.size());
    rep.ok = true;
    for (const auto& lam : basis) {
        ExactMeasure ket;
        ket.add(lam, 1);
        // graded pieces: G1[p] = Gamma1^(p)|.>, etc.
        std::vector<ExactMeasure> g2(D + 1), g1(D + 1);
        for (int q = 0; q <= D; ++q) g2[q] = apply_gamma_graded(k2, q, ket);
        for (int p = 0; p <= D; ++p) g1[p] = apply_gamma_graded(k1, p, ket);
        std::map<std::pair<int, int>, ExactMeasure> lhs, rhs;
        for (int p = 0; p <= D; ++p)
            for (int q = 0; q + p <= D; ++q) {
                lhs[{p, q}] = apply_gamma_graded(k1, p, g2[q]);
                ExactMeasure r;
                for (int k = 0; k < static_cast<int>(c.size()) && k <= std::min(p, q); ++k) {
                    auto part = apply_gamma_graded(k2, q - k, g1[p - k]);
                    for (const auto& [st, w] : part.entries) r.add(st, c[k] * w);
                }
                rhs[{p, q}] = r;
            }
        // graded comparison
        ExactMeasure ev_l, ev_r;
        for (const auto& [pq, L] : lhs) {
            const auto& R = rhs[pq];
            Rational scale = rpow(x1, pq.first) * rpow(x2, pq.second);
            std::map<Partition, std::pair<Rational, Rational>> both;
            for (const auto& [st, w] : L.entries) both[st].first = w;
            for (const auto& [st, w] : R.entries) both[st].second = w;
            for (const auto& [st, lr] : both) {
                ++rep.coefficients;
                Rational d = abs(lr.first - lr.second);
                if (d > rep.max_graded_discrepancy) rep.max_graded_discrepancy = d;
                ev_l.add(st, scale * lr.first);
                ev_r.add(st, scale * lr.second);
            }
        }
        std::map<Partition, std::pair<Rational, Rational>> ev;
        for (const auto& [st, w] : ev_l.entries) ev[st].first = w;
        for (const auto& [st, w] : ev_r.entries) ev[st].second = w;
        for (const auto& [st, lr] : ev) {
            Rational d = abs(lr.first - lr.second);
            if (d > rep.max_evaluated_discrepancy) rep.max_evaluated_discrepancy = d;
        }
        if (lam.empty()) {
            // lhs mass in the next shell of total degree beyond the cap
            for (int tot = D + 1; tot <= D + 2; ++tot)
                for (int p = 0; p <= tot; ++p) {
                    auto a = apply_gamma_graded(k2, tot - p, ket);
                    auto b = apply_gamma_graded(k1, p, a);
                    Rational scale = rpow(x1, p) * rpow(x2, tot - p);
                    for (const auto& [st, w] : b.entries) rep.omitted_mass_bound += abs(scale * w);
                }
        }
    }
    rep.ok = rep.max_graded_discrepancy == 0 && rep.max_evaluated_discrepancy == 0;
    return rep;
}

Rational normal_ordered_scalar(const RailYardModel& model, int from, int to) {
    Rational s = 1;
    for (int i = from; i <= to; ++i) {
        if (!model.kind(i).plus()) continue;
        for (int j = i + 1; j <= to; ++j) {
            if (!model.kind(j).minus()) continue;
            Letter a = model.kind(i).letter, b = model.kind(j).letter;
            if (a == b && model.weight(i) * model.weight(j) >= 1)
                throw std::domain_error("partition function diverges: x_i x_j >= 1 for a same-letter (+,-) pair");
            s *= pair_factor(a, b, model.weight(i), model.weight(j));
        }
    }
    return s;
}

Rational segment_amplitude(const RailYardModel& model, int from, int to, const Partition& left, const Partition& right) {
    if (from > to) return left == right ? Rational(1) : Rational(0);
    Rational scalar = normal_ordered_scalar(model, from, to);
    TruncationPolicy wide;
    wide.max_first_part = std::numeric_limits<int>::max() / 4;
    wide.max_length = std::numeric_limits<int>::max() / 4;
    // - columns act on the bra (shrinking), + columns on the ket (shrinking); both finite.
    ExactMeasure bra;
    bra.add(left, 1);
    for (int i = from; i <= to; ++i)
        if (model.kind(i).minus()) bra = apply_gamma_bra(model.kind(i), model.weight(i), bra, wide);
    ExactMeasure ket;
    ket.add(right, 1);
    for (int i = to; i >= from; --i)
        if (model.kind(i).plus()) ket = apply_gamma(model.kind(i), model.weight(i), ket, wide);
    Rational s = 0;
    const auto& small = bra.entries.size() < ket.entries.size() ? bra : ket;
    const auto& big = bra.entries.size() < ket.entries.size() ? ket : bra;
    for (const auto& [p, w] : small.entries) {
        auto it = big.entries.find(p);
        if (it != big.entries.end()) s += w * it->second;
    }
    return scalar * s;
}

namespace {

// forward reachable state sets with caps: sets[k] = states lambda^(l+k)
std::vector<std::vector<Partition>> reachable_states(const RailYardModel& model, const TruncationPolicy& trunc) {
    const int n = model.columns();
    std::vector<std::vector<Partition>> fwd(n + 1), bwd(n + 1);
    fwd[0] = {model.left_boundary};
    for (int k = 0; k < n; ++k) {
        std::unordered_map<Partition, char, PartitionHash> seen;
        StepKind kind = model.kinds[k];
        bool zero = model.weights[k] == 0;
        for (const auto& s : fwd[k])
            for (auto& [p, e] : bra_neighbours(kind, s, trunc.max_first_part, trunc.max_length)) {
                if (!trunc.admits(p) || (zero && e > 0)) continue;
                if (seen.emplace(p, 1).second) fwd[k + 1].push_back(p);
            }
    }
    bwd[n] = {model.right_boundary};
    for (int k = n - 1; k >= 0; --k) {
        std::unordered_map<Partition, char, PartitionHash> seen;
        StepKind kind = model.kinds[k];
        bool zero = model.weights[k] == 0;
        for (const auto& s : bwd[k + 1])
            for (auto& [p, e] : ket_neighbours(kind, s, trunc.max_first_part, trunc.max_length)) {
                if (!trunc.admits(p) || (zero && e > 0)) continue;
                if (seen.emplace(p, 1).second) bwd[k].push_back(p);
            }
    }
    std::vector<std::vector<Partition>> out(n + 1);
    for (int k = 0; k <= n; ++k) {
        std::unordered_map<Partition, char, PartitionHash> in_b;
        for (const auto& p : bwd[k]) in_b.emplace(p, 1);
        for (const auto& p : fwd[k])
            if (in_b.count(p)) out[k].push_back(p);
        std::sort(out[k].begin(), out[k].end());
    }
    return out;
}

}  // namespace

BoundaryProcessResult boundary_schur_process(const RailYardModel& model, int t, const TruncationPolicy& trunc) {
    if (t < model.l || t > model.r + 1) throw std::out_of_range("boundary_schur_process: t outside [l..r+1]");
    BoundaryProcessResult res;
    Rational Z = segment_amplitude(model, model.l, model.r, model.left_boundary, model.right_boundary);
    if (Z == 0) throw std::domain_error("boundary_schur_process: no covering exists");
    auto states = reachable_states(model, trunc);
    Rational captured = 0;
    for (const auto& mu : states[t - model.l]) {
        Rational f = segment_amplitude(model, model.l, t - 1, model.left_boundary, mu);
        if (f == 0) continue;
        Rational g = segment_amplitude(model, t, model.r, mu, model.right_boundary);
        if (g == 0) continue;
        Rational p = f * g / Z;
        res.measure.add(mu, p);
        captured += p;
    }
    res.dropped = 1 - captured;
    res.truncated = res.dropped != 0;
    res.measure.dropped = res.dropped;
    res.measure.normalized = true;
    return res;
}

FloatMeasure boundary_schur_process_float(const RailYardModel& model, int t, const TruncationPolicy& trunc) {
    if (t < model.l || t > model.r + 1) throw std::out_of_range("boundary_schur_process: t outside [l..r+1]");
    FloatMeasure bra, ket;
    bra.add(model.left_boundary, 1.0);
    for (int i = model.l; i < t; ++i) bra = apply_gamma_bra(model.kind(i), model.weight_d(i), bra, trunc);
    ket.add(model.right_boundary, 1.0);
    for (int i = model.r; i >= t; --i) ket = apply_gamma(model.kind(i), model.weight_d(i), ket, trunc);
    FloatMeasure out;
    for (const auto& [p, w] : bra.entries) {
        auto it = ket.entries.find(p);
        if (it != ket.entries.end()) out.add(p, w * it->second);
    }
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Sampler

struct CoveringSampler::Impl {
    RailYardModel model;
    bool use_structured = false;
    std::unique_ptr<GtChainSampler> gt;

    // transfer data
    std::vector<std::vector<Partition>> states;
    // per level k, per state: cumulative probabilities and target indices
    std::vector<std::vector<std::vector<double>>> cum;
    std::vector<std::vector<std::vector<int>>> target;
    double loss = 0;
    std::size_t nstates = 0;

    void build_transfer(const TruncationPolicy& trunc) {
        if (model.divergent()) throw std::domain_error("sampler: divergent model (x_i x_j >= 1)");
        states = reachable_states(model, trunc);
        const int n = model.columns();
        for (const auto& s : states) nstates += s.size();
        if (states[0].empty()) throw std::domain_error("sampler: no covering within the truncation policy");
        std::vector<std::unordered_map<Partition, int, PartitionHash>> index(n + 1);
        for (int k = 0; k <= n; ++k)
            for (std::size_t j = 0; j < states[k].size(); ++j) index[k].emplace(states[k][j], static_cast<int>(j));
        // backward sweep with per-level rescaling; log of scales accumulated
        std::vector<std::vector<double>> g(n + 1);
        g[n].assign(states[n].size(), 1.0);
        double log_scale = 0;
        cum.resize(n);
        target.resize(n);
        for (int k = n - 1; k >= 0; --k) {
            StepKind kind = model.kinds[k];
            double x = model.weights[k].get_d();
            g[k].assign(states[k].size(), 0.0);
            cum[k].resize(states[k].size());
            target[k].resize(states[k].size());
            for (std::size_t j = 0; j < states[k].size(); ++j) {
                const auto& s = states[k][j];
                double acc = 0;
                for (auto& [p, e] : bra_neighbours(kind, s, trunc.max_first_part, trunc.max_length)) {
                    auto it = index[k + 1].find(p);
                    if (it == index[k + 1].end()) continue;
                    double w = (e == 0 ? 1.0 : std::pow(x, static_cast<double>(e))) * g[k + 1][it->second];
                    if (w <= 0) continue;
                    acc += w;
                    cum[k][j].push_back(acc);
                    target[k][j].push_back(it->second);
                }
                g[k][j] = acc;
                for (auto& c : cum[k][j]) c /= (acc > 0 ? acc : 1.0);
            }
            double mx = 0;
            for (double v : g[k]) mx = std::max(mx, v);
            if (mx > 0) {
                for (double& v : g[k]) v /= mx;
                log_scale += std::log(mx);
            }
        }
        double z_trunc_log = log_scale + std::log(g[0][0]);
        double z_exact = to_double(segment_amplitude(model, model.l, model.r, model.left_boundary, model.right_boundary));
        loss = z_exact > 0 ? 1.0 - std::exp(z_trunc_log - std::log(z_exact)) : 1.0;
    }

    DimerSample sample_transfer(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const int n = model.columns();
        std::vector<Partition> chain;
        chain.reserve(n + 1);
        int j = 0;
        chain.push_back(states[0][0]);
        for (int k = 0; k < n; ++k) {
            const auto& c = cum[k][j];
            double u = U(rng);
            auto it = std::lower_bound(c.begin(), c.end(), u);
            std::size_t pick = it == c.end() ? c.size() - 1 : static_cast<std::size_t>(it - c.begin());
            j = target[k][j][pick];
            chain.push_back(states[k + 1][j]);
        }
        return make_sample(model, std::move(chain));
    }
};

CoveringSampler::CoveringSampler(const RailYardModel& model, const TruncationPolicy& trunc, Method method)
    : impl_(new Impl) {
    impl_->model = model;
    std::string why;
    bool can = GtChainSampler::applicable(model, &why);
    if (method == Method::Structured && !can) {
        delete impl_;
        throw std::invalid_argument("structured sampler not applicable: " + why);
    }
    if (can && method != Method::Transfer) {
        impl_->use_structured = true;
        impl_->gt = std::make_unique<GtChainSampler>(model);
    } else {
        impl_->build_transfer(trunc);
    }
}

CoveringSampler::~CoveringSampler() { delete impl_; }
CoveringSampler::CoveringSampler(CoveringSampler&& o) noexcept : impl_(o.impl_) { o.impl_ = nullptr; }
CoveringSampler& CoveringSampler::operator=(CoveringSampler&& o) noexcept {
    if (this != &o) {
        delete impl_;
        impl_ = o.impl_;
        o.impl_ = nullptr;
    }
    return *this;
}

DimerSample CoveringSampler::sample(std::mt19937_64& rng) const {
    if (impl_->use_structured) return impl_->gt->sample(rng);
    return impl_->sample_transfer(rng);
}

bool CoveringSampler::structured() const { return impl_->use_structured; }
double CoveringSampler::truncation_loss() const { return impl_->use_structured ? 0.0 : impl_->loss; }
std::size_t CoveringSampler::state_count() const { return impl_->nstates; }

DimerSample sample_covering(const RailYardModel& model, std::uint64_t rng_seed, const TruncationPolicy& trunc) {
    CoveringSampler s(model, trunc);
    auto rng = replica_rng(rng_seed, 0);
    return s.sample(rng);
}

std::mt19937_64 replica_rng(std::uint64_t seed, std::uint64_t replica) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32), 0x52595355u};
    return std::mt19937_64(seq);
}

std::vector<DimerSample> sample_many(const CoveringSampler& sampler, long n, std::uint64_t seed, int threads) {
    std::vector<DimerSample> out(std::max(n, 0L));
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max(n, 1L))));
    auto work = [&](int w) {
        for (long i = w; i < n; i += threads) {
            auto rng = replica_rng(seed, static_cast<std::uint64_t>(i));
            out[i] = sampler.sample(rng);
        }
    };
    if (threads == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace rys
